#include "orbq/modular/forms.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>

#include "orbq/error.hpp"
#include "orbq/modular/eta.hpp"

namespace orbq
{

namespace
{

// Row echelon form kept in reduced shape for membership tests.
class Echelon
{
public:
    explicit Echelon(std::size_t width) : width_(width) {}

    // Reduces v against the stored rows; returns the residual.
    std::vector<Rational> reduce(std::vector<Rational> v) const
    {
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            const Rational &x = v[pivots_[r]];
            if (x == 0)
                continue;
            Rational f = x;
            for (std::size_t j = pivots_[r]; j < width_; ++j)
                if (rows_[r][j] != 0)
                    v[j] -= f * rows_[r][j];
        }
        return v;
    }

    bool add(const std::vector<Rational> &v)
    {
        std::vector<Rational> w = reduce(v);
        std::size_t p = 0;
        while (p < width_ && w[p] == 0)
            ++p;
        if (p == width_)
            return false;
        Rational inv = Rational(1) / w[p];
        for (auto &x : w)
            x *= inv;
        for (auto &row : rows_) {
            if (row[p] == 0)
                continue;
            Rational f = row[p];
            for (std::size_t j = p; j < width_; ++j)
                row[j] -= f * w[j];
        }
        rows_.push_back(std::move(w));
        pivots_.push_back(p);
        return true;
    }

    std::size_t rank() const { return rows_.size(); }

private:
    std::size_t width_;
    std::vector<std::vector<Rational>> rows_;
    std::vector<std::size_t> pivots_;
};

// Screening modulo a prime: independence mod p implies independence over Q for
// integral vectors, so only survivors get the exact treatment.
constexpr std::uint64_t kPrime = 2305843009213693951ULL; // 2^61 - 1

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b)
{
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % kPrime);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e)
{
    std::uint64_t r = 1;
    for (; e; e >>= 1, a = mulmod(a, a))
        if (e & 1)
            r = mulmod(r, a);
    return r;
}

std::uint64_t to_mod(const Integer &z)
{
    Integer r = z % Integer(std::to_string(kPrime));
    if (r < 0)
        r += Integer(std::to_string(kPrime));
    return std::stoull(r.get_str());
}

std::uint64_t to_mod(const Rational &q)
{
    return mulmod(to_mod(q.get_num()), powmod(to_mod(q.get_den()), kPrime - 2));
}

// prod (1 - q^n)^e mod p, first `len` coefficients
const std::vector<std::uint64_t> &euler_power_mod(long e, long len)
{
    static std::mutex mu;
    static std::map<std::pair<long, long>, std::vector<std::uint64_t>> memo;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(e, len);
    auto it = memo.find(key);
    if (it == memo.end()) {
        std::vector<std::uint64_t> v;
        for (const auto &c : euler_product_power(e, len))
            v.push_back(to_mod(c));
        it = memo.emplace(key, std::move(v)).first;
    }
    return it->second;
}

// q-expansion of a holomorphic eta quotient at q^0 .. q^{count-1}, mod p
std::vector<std::uint64_t> quotient_vector_mod(const CycleType &c, long count)
{
    std::vector<std::uint64_t> out(count);
    Rational lead = c.leading_exponent();
    if (!is_integer(lead) || lead < 0)
        return out;
    long start = to_long(lead.get_num());
    if (start >= count)
        return out;
    long len = count - start;
    std::vector<std::uint64_t> acc(len);
    acc[0] = 1;
    for (const auto &[t, b] : c.exponents()) {
        const auto &f = euler_power_mod(b, (len + t - 1) / t);
        std::vector<std::uint64_t> next(len);
        for (long i = 0; i < len; ++i) {
            if (!acc[i])
                continue;
            for (std::size_t j = 0; j < f.size() && i + long(j) * t < len; ++j)
                if (f[j])
                    next[i + j * t] = (next[i + j * t] + mulmod(acc[i], f[j])) % kPrime;
        }
        acc = std::move(next);
    }
    for (long i = 0; i < len; ++i)
        out[start + i] = acc[i];
    return out;
}

class EchelonMod
{
public:
    explicit EchelonMod(std::size_t width) : width_(width) {}

    std::vector<std::uint64_t> reduce(std::vector<std::uint64_t> v) const
    {
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            std::uint64_t x = v[pivots_[r]];
            if (!x)
                continue;
            for (std::size_t j = pivots_[r]; j < width_; ++j)
                if (rows_[r][j])
                    v[j] = (v[j] + kPrime - mulmod(x, rows_[r][j])) % kPrime;
        }
        return v;
    }

    bool independent(const std::vector<std::uint64_t> &v) const
    {
        auto w = reduce(v);
        return std::any_of(w.begin(), w.end(), [](std::uint64_t x) { return x != 0; });
    }

    bool add(const std::vector<std::uint64_t> &v)
    {
        auto w = reduce(v);
        std::size_t p = 0;
        while (p < width_ && !w[p])
            ++p;
        if (p == width_)
            return false;
        std::uint64_t inv = powmod(w[p], kPrime - 2);
        for (auto &x : w)
            x = mulmod(x, inv);
        for (auto &row : rows_) {
            std::uint64_t f = row[p];
            if (!f)
                continue;
            for (std::size_t j = p; j < width_; ++j)
                row[j] = (row[j] + kPrime - mulmod(f, w[j])) % kPrime;
        }
        rows_.push_back(std::move(w));
        pivots_.push_back(p);
        return true;
    }

private:
    std::size_t width_;
    std::vector<std::vector<std::uint64_t>> rows_;
    std::vector<std::size_t> pivots_;
};

std::vector<Rational> coefficient_vector(const PuiseuxSeries &s, long count)
{
    std::vector<Rational> v(count);
    for (const auto &[e, c] : s.terms()) {
        if (e >= count)
            break;
        if (!is_integer(e) || e < 0)
            throw NotInSpace("expansion has exponent " + e.get_str());
        v[to_long(e.get_num())] = c.to_rational();
    }
    return v;
}

std::vector<Rational> quotient_vector(const BasisForm &f, long count)
{
    return coefficient_vector(f.expand(Rational(count)), count);
}

// Solves sum x_i cols_i = target exactly; throws NotInSpace if inconsistent.
std::vector<Rational> solve(const std::vector<std::vector<Rational>> &cols, const std::vector<Rational> &target)
{
    std::size_t rows = target.size(), n = cols.size();
    std::vector<std::vector<Rational>> m(rows, std::vector<Rational>(n + 1));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            m[i][j] = cols[j][i];
        m[i][n] = target[i];
    }
    std::vector<long> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c] == 0)
            ++p;
        if (p == rows)
            continue;
        std::swap(m[p], m[r]);
        Rational inv = Rational(1) / m[r][c];
        for (std::size_t j = c; j <= n; ++j)
            m[r][j] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0)
                continue;
            Rational f = m[i][c];
            for (std::size_t j = c; j <= n; ++j)
                m[i][j] -= f * m[r][j];
        }
        pivot_col.push_back(static_cast<long>(c));
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i)
        if (m[i][n] != 0)
            throw NotInSpace("residual at q^" + std::to_string(i) + " is nonzero");
    std::vector<Rational> x(n);
    for (std::size_t i = 0; i < r; ++i)
        x[pivot_col[i]] = m[i][n];
    return x;
}

long known_count(const PuiseuxSeries &f, long minimum)
{
    if (!f.trunc()) {
        auto last = f.last_exponent();
        long n = last ? to_long(floor(*last)) + 1 : 0;
        return std::max(n, minimum);
    }
    return std::max(0L, to_long(ceil(*f.trunc())));
}

void check_rational_integral(const PuiseuxSeries &f)
{
    for (const auto &[e, c] : f.terms()) {
        if (!is_integer(e) || e < 0)
            throw NotInSpace("form has exponent " + e.get_str());
        if (!c.is_rational())
            throw NonRationalCoefficient("form coefficient " + c.to_string() + " at q^" + e.get_str());
    }
}

// Calls visit(b) for every exponent vector with sum(b) = total and
// sum |b_t| = l1, |b_t| <= bound, in a fixed order.  visit returns false to stop.
bool for_each_vector(std::size_t len, long total, long l1, long bound,
                     const std::function<bool(const std::vector<long> &)> &visit)
{
    std::vector<long> b(len, 0);
    std::function<bool(std::size_t, long, long)> rec = [&](std::size_t i, long sum_left, long l1_left) -> bool {
        if (i + 1 == len) {
            long v = sum_left;
            if (std::labs(v) != l1_left || std::labs(v) > bound)
                return true;
            b[i] = v;
            return visit(b);
        }
        for (long v = -std::min(bound, l1_left); v <= std::min(bound, l1_left); ++v) {
            long rest = l1_left - std::labs(v);
            // remaining coordinates must reach the residual sum
            if (std::labs(sum_left - v) > rest)
                continue;
            if ((rest - std::labs(sum_left - v)) % 2 != 0)
                continue;
            b[i] = v;
            if (!rec(i + 1, sum_left - v, rest))
                return false;
        }
        return true;
    };
    return rec(0, total, l1);
}

CycleType to_cycle_type(const std::vector<long> &divs, const std::vector<long> &b)
{
    std::map<long, long> m;
    for (std::size_t i = 0; i < divs.size(); ++i)
        m[divs[i]] = b[i];
    return CycleType(m);
}

// Valid quotients for (N, k, chi) in breadth-first order; visit returns false to stop.
void search_quotients(long N, long k, long character, long bound, const std::function<bool(const CycleType &)> &visit)
{
    std::vector<long> divs = divisors(N);
    std::size_t n = divs.size();
    // integer forms of the Ligozat congruences and cusp orders
    long L = 1;
    for (long t : divs)
        L = lcm(L, t);
    std::vector<std::vector<long>> cusp(n, std::vector<long>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            long g = gcd(divs[i], divs[j]);
            cusp[i][j] = g * g * (L / divs[j]);
        }
    auto plausible = [&](const std::vector<long> &b) {
        long s1 = 0, s2 = 0;
        for (std::size_t j = 0; j < n; ++j) {
            s1 += divs[j] * b[j];
            s2 += (N / divs[j]) * b[j];
        }
        if (s1 % 24 != 0 || s2 % 24 != 0)
            return false;
        for (std::size_t i = 0; i < n; ++i) {
            long o = 0;
            for (std::size_t j = 0; j < n; ++j)
                o += cusp[i][j] * b[j];
            if (o < 0)
                return false;
        }
        return true;
    };
    long max_l1 = bound * static_cast<long>(n);
    const long budget = 40000000;
    long tried = 0;
    for (long l1 = std::labs(2 * k); l1 <= max_l1; l1 += 2) {
        bool go = for_each_vector(divs.size(), 2 * k, l1, bound, [&](const std::vector<long> &b) {
            if (++tried > budget)
                return false;
            if (!plausible(b))
                return true;
            CycleType c = to_cycle_type(divs, b);
            LigozatResult r = ligozat_validate(c, N);
            if (!r.valid || r.character != character)
                return true;
            return visit(c);
        });
        if (!go)
            return;
    }
}

std::vector<BasisForm> as_forms(const std::vector<CycleType> &quotients)
{
    return {quotients.begin(), quotients.end()};
}

} // namespace

PuiseuxSeries eisenstein_e4(const Rational &trunc)
{
    long n = std::max(0L, to_long(ceil(trunc)));
    std::vector<Integer> c(n);
    for (long k = 0; k < n; ++k) {
        if (k == 0) {
            c[k] = 1;
            continue;
        }
        Integer s = 0;
        for (long d : divisors(k))
            s += Integer(d) * d * d;
        c[k] = 240 * s;
    }
    return PuiseuxSeries::from_integers(0, c, trunc);
}

PuiseuxSeries BasisForm::expand(const Rational &trunc) const
{
    Rational lead = eta.leading_exponent();
    PuiseuxSeries s = eta.empty() ? PuiseuxSeries::constant(Cyclotomic(1), trunc) : eta_expand(eta, trunc);
    if (e4_power > 0)
        s = s * eisenstein_e4(trunc - lead).pow(e4_power, trunc - lead);
    return s;
}

std::string BasisForm::to_string() const
{
    std::string s = eta.empty() ? "" : eta.to_string();
    if (e4_power > 0)
        s += (s.empty() ? "" : " * ") + std::string("E4^") + std::to_string(e4_power);
    return s.empty() ? "1" : s;
}

LigozatResult ligozat_validate(const CycleType &c, long N)
{
    LigozatResult r;
    long s_t = 0, s_n = 0;
    for (auto [t, b] : c.exponents()) {
        if (N % t != 0)
            throw BadDivisor(std::to_string(t) + " does not divide " + std::to_string(N));
        s_t += t * b;
        s_n += (N / t) * b;
    }
    long rank = c.rank();
    r.weight = make_rational(rank, 2);
    r.congruences = rank % 2 == 0 && s_t % 24 == 0 && s_n % 24 == 0;
    if (rank % 2 == 0) {
        Rational s = c.discriminant();
        if ((rank / 2) % 2 != 0)
            s = -s;
        r.character = squarefree_label(s);
    } else {
        r.character = 0;
    }
    r.holomorphic = true;
    for (long d : divisors(N)) {
        Rational sum = 0;
        for (auto [t, b] : c.exponents()) {
            long g = gcd(d, t);
            sum += make_rational(g * g * b, t);
        }
        Rational ord = sum * make_rational(N, 24 * gcd(d, N / d) * d);
        r.cusp_orders[d] = ord;
        if (ord < 0)
            r.holomorphic = false;
    }
    r.valid = r.congruences && r.holomorphic;
    return r;
}

long sturm_bound(long N, long k)
{
    return k * psi_index(N) / 12 + 1;
}

std::optional<long> dimension_formula(long N, long k, long character)
{
    if (character != 1 || k < 0 || k % 2 != 0)
        return std::nullopt;
    if (k == 0)
        return 1;
    long e2 = 1, e3 = 1, einf = 0;
    auto fac = factorize(N);
    if (N % 4 == 0)
        e2 = 0;
    else
        for (auto [p, e] : fac)
            e2 *= 1 + kronecker(-4, p);
    if (N % 9 == 0)
        e3 = 0;
    else
        for (auto [p, e] : fac)
            e3 *= 1 + kronecker(-3, p);
    for (long d : divisors(N))
        einf += euler_phi(gcd(d, N / d));
    Rational g = 1 + make_rational(psi_index(N), 12) - make_rational(e2, 4) - make_rational(e3, 3) -
                 make_rational(einf, 2);
    if (!is_integer(g))
        throw std::logic_error("non-integral genus");
    long genus = to_long(g.get_num());
    if (k == 2)
        return genus + einf - 1;
    return (k - 1) * (genus - 1) + (k / 4) * e2 + (k / 3) * e3 + (k / 2) * einf;
}

std::vector<EtaTableRow> load_eta_table(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open eta basis table " + path);
    std::vector<EtaTableRow> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw ParseError(path + ":" + std::to_string(lineno) + ": missing ':'");
        EtaTableRow row;
        std::istringstream head(line.substr(0, colon));
        if (!(head >> row.level >> row.weight >> row.character))
            throw ParseError(path + ":" + std::to_string(lineno) + ": bad header");
        std::string body = line.substr(colon + 1);
        std::size_t pos = 0;
        while (pos < body.size()) {
            auto semi = body.find(';', pos);
            std::string item = body.substr(pos, semi == std::string::npos ? std::string::npos : semi - pos);
            if (item.find_first_not_of(" \t\r") != std::string::npos)
                row.basis.push_back(CycleType::parse(item));
            if (semi == std::string::npos)
                break;
            pos = semi + 1;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

const std::vector<EtaTableRow> &eta_basis_table()
{
    static std::once_flag once;
    static std::vector<EtaTableRow> rows;
    std::call_once(once, [] {
        const char *env = std::getenv("ORBQ_DATA_DIR");
        std::string dir = env ? env : ORBQ_DATA_DIR;
        rows = load_eta_table(dir + "/eta_bases.txt");
    });
    return rows;
}

long expansion_rank(const std::vector<BasisForm> &forms, long N, long k)
{
    long count = sturm_bound(N, k) + 1;
    Echelon ech(count);
    for (const auto &q : forms)
        ech.add(quotient_vector(q, count));
    return static_cast<long>(ech.rank());
}

std::vector<Rational> fit_in_basis(const PuiseuxSeries &f, const FormSpace &space)
{
    long need = sturm_bound(space.level, space.weight) + 1;
    long count = known_count(f, need);
    if (count < need)
        throw InsufficientPrecision("form known to " + std::to_string(count) + " coefficients, need " +
                                    std::to_string(need));
    check_rational_integral(f);
    std::vector<std::vector<Rational>> cols;
    for (const auto &q : space.basis)
        cols.push_back(quotient_vector(q, count));
    return solve(cols, coefficient_vector(f, count));
}

FormSpace basis_for_space(long N, long k, long character, long bound)
{
    for (const auto &row : eta_basis_table())
        if (row.level == N && row.weight == k && row.character == character)
            return {N, k, character, as_forms(row.basis)};
    FormSpace space{N, k, character, {}};
    if (k == 0 && character == 1) {
        space.basis.push_back(BasisForm());
        return space;
    }
    if (N == 1 && character == 1) {
        for (long b = k / 12; b >= 0; --b)
            if ((k - 12 * b) % 4 == 0)
                space.basis.emplace_back(CycleType(std::map<long, long>{{1, 24 * b}}), (k - 12 * b) / 4);
        return space;
    }
    auto dim = dimension_formula(N, k, character);
    if (!dim)
        throw BasisNotFound("no dimension available for (" + std::to_string(N) + "," + std::to_string(k) + "," +
                            std::to_string(character) + ")");
    if (*dim == 0)
        return space;
    long count = sturm_bound(N, k) + 1;
    Echelon ech(count);
    EchelonMod screen(count);
    search_quotients(N, k, character, bound, [&](const CycleType &c) {
        auto vm = quotient_vector_mod(c, count);
        if (!screen.independent(vm))
            return true;
        if (ech.add(quotient_vector(c, count))) {
            screen.add(vm);
            space.basis.push_back(c);
        }
        return static_cast<long>(space.basis.size()) < *dim;
    });
    if (static_cast<long>(space.basis.size()) < *dim)
        throw BasisNotFound("found " + std::to_string(space.basis.size()) + " of " + std::to_string(*dim) +
                            " quotients for level " + std::to_string(N) + " weight " + std::to_string(k));
    return space;
}

std::pair<FormSpace, std::vector<Rational>> fit_by_search(const PuiseuxSeries &f, long N, long k, long character,
                                                         long bound)
{
    long need = sturm_bound(N, k) + 1;
    long count = known_count(f, need);
    if (count < need)
        throw InsufficientPrecision("form known to " + std::to_string(count) + " coefficients, need " +
                                    std::to_string(need));
    check_rational_integral(f);
    std::vector<Rational> target = coefficient_vector(f, count);

    auto try_space = [&](const FormSpace &s) -> std::optional<std::vector<Rational>> {
        try {
            return fit_in_basis(f, s);
        } catch (const NotInSpace &) {
            return std::nullopt;
        }
    };
    for (const auto &row : eta_basis_table())
        if (row.level == N && row.weight == k && row.character == character) {
            FormSpace s{N, k, character, as_forms(row.basis)};
            if (auto x = try_space(s))
                return {s, *x};
        }
    FormSpace space{N, k, character, {}};
    if (k == 0 || N == 1) {
        FormSpace s = basis_for_space(N, k, character, bound);
        return {s, fit_in_basis(f, s)};
    }
    bool zero = std::all_of(target.begin(), target.end(), [](const Rational &x) { return x == 0; });
    if (zero)
        return {space, {}};

    Echelon ech(count);
    EchelonMod screen(count);
    std::vector<std::uint64_t> target_mod;
    for (const auto &x : target)
        target_mod.push_back(to_mod(x));
    bool found = false;
    search_quotients(N, k, character, bound, [&](const CycleType &c) {
        auto vm = quotient_vector_mod(c, count);
        if (!screen.independent(vm))
            return true;
        std::vector<Rational> v = quotient_vector(c, count);
        if (!ech.add(v))
            return true;
        screen.add(vm);
        space.basis.push_back(c);
        if (screen.independent(target_mod))
            return true;
        auto r = ech.reduce(target);
        found = std::all_of(r.begin(), r.end(), [](const Rational &x) { return x == 0; });
        return !found;
    });
    if (!found)
        throw BasisNotFound("no eta quotient span contains the form at level " + std::to_string(N) + " weight " +
                            std::to_string(k));
    return {space, fit_in_basis(f, space)};
}

} // namespace orbq
