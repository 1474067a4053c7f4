#include "orbq/qseries/puiseux.hpp"

#include <algorithm>
#include <sstream>

#include "orbq/error.hpp"

namespace orbq
{

namespace
{

std::optional<Rational> min_trunc(const std::optional<Rational> &a, const std::optional<Rational> &b)
{
    if (!a)
        return b;
    if (!b)
        return a;
    return std::min(*a, *b);
}

// Index k (exponent k/den) is kept iff k < limit_index(T, den).
long limit_index(const Rational &t, long den)
{
    return to_long(ceil(t * den));
}

std::string exponent_string(const Rational &e)
{
    if (e == 1)
        return "q";
    if (is_integer(e) && e >= 0 && e < 10)
        return "q^" + e.get_str();
    return "q^{" + e.get_str() + "}";
}

} // namespace

PuiseuxSeries::PuiseuxSeries(const std::map<Rational, Cyclotomic> &terms, Trunc trunc)
    : trunc_(std::move(trunc))
{
    if (terms.empty())
        return;
    long den = 1;
    for (const auto &[e, c] : terms)
        den = lcm(den, to_long(e.get_den()));
    den_ = den;
    start_ = to_long(floor(terms.begin()->first * den));
    long last = to_long(floor(terms.rbegin()->first * den));
    c_.assign(last - start_ + 1, Cyclotomic());
    for (const auto &[e, c] : terms)
        c_[to_long(floor(e * den)) - start_] += c;
    normalize();
}

PuiseuxSeries PuiseuxSeries::constant(const Cyclotomic &c, Trunc trunc)
{
    return monomial(c, Rational(0), std::move(trunc));
}

PuiseuxSeries PuiseuxSeries::monomial(const Cyclotomic &c, const Rational &e, Trunc trunc)
{
    return PuiseuxSeries(std::map<Rational, Cyclotomic>{{e, c}}, std::move(trunc));
}

PuiseuxSeries PuiseuxSeries::from_integers(long start, const std::vector<Integer> &coeffs, Trunc trunc)
{
    PuiseuxSeries s(std::move(trunc));
    s.den_ = 1;
    s.start_ = start;
    s.c_.reserve(coeffs.size());
    for (const auto &z : coeffs)
        s.c_.emplace_back(z);
    s.normalize();
    return s;
}

void PuiseuxSeries::normalize()
{
    if (trunc_) {
        long lim = limit_index(*trunc_, den_) - start_;
        if (lim < static_cast<long>(c_.size()))
            c_.resize(std::max(0L, lim));
    }
    while (!c_.empty() && c_.back().is_zero())
        c_.pop_back();
    std::size_t lead = 0;
    while (lead < c_.size() && c_[lead].is_zero())
        ++lead;
    if (lead > 0) {
        c_.erase(c_.begin(), c_.begin() + static_cast<long>(lead));
        start_ += static_cast<long>(lead);
    }
    if (c_.empty()) {
        den_ = 1;
        start_ = 0;
        return;
    }
    long g = den_;
    for (std::size_t i = 0; i < c_.size() && g > 1; ++i)
        if (!c_[i].is_zero())
            g = gcd(g, start_ + static_cast<long>(i));
    if (g > 1) {
        std::vector<Cyclotomic> nc;
        nc.reserve(c_.size() / g + 1);
        for (std::size_t i = 0; i < c_.size(); i += g)
            nc.push_back(std::move(c_[i]));
        c_ = std::move(nc);
        den_ /= g;
        start_ /= g;
    }
}

PuiseuxSeries PuiseuxSeries::with_den(long den) const
{
    if (den == den_)
        return *this;
    long f = den / den_;
    PuiseuxSeries out(trunc_);
    out.den_ = den;
    out.start_ = start_ * f;
    if (!c_.empty())
        out.c_.assign((c_.size() - 1) * f + 1, Cyclotomic());
    for (std::size_t i = 0; i < c_.size(); ++i)
        out.c_[i * f] = c_[i];
    return out;
}

Rational PuiseuxSeries::lead_exponent() const
{
    if (c_.empty()) {
        if (!trunc_)
            throw EmptySeries("exact zero series has no leading exponent");
        return *trunc_;
    }
    return make_rational(start_, den_);
}

Cyclotomic PuiseuxSeries::lead_coefficient() const
{
    if (c_.empty())
        throw EmptySeries("no known terms");
    return c_.front();
}

Cyclotomic PuiseuxSeries::coefficient(const Rational &e) const
{
    if (trunc_ && e >= *trunc_)
        throw InsufficientPrecision("coefficient at " + e.get_str() + " is beyond truncation " +
                                    trunc_->get_str());
    Rational idx = e * den_;
    if (!is_integer(idx))
        return Cyclotomic();
    long k = to_long(idx.get_num()) - start_;
    if (k < 0 || k >= static_cast<long>(c_.size()))
        return Cyclotomic();
    return c_[k];
}

std::map<Rational, Cyclotomic> PuiseuxSeries::terms() const
{
    std::map<Rational, Cyclotomic> out;
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (!c_[i].is_zero())
            out.emplace(make_rational(start_ + static_cast<long>(i), den_), c_[i]);
    return out;
}

std::optional<Rational> PuiseuxSeries::last_exponent() const
{
    if (c_.empty())
        return std::nullopt;
    return make_rational(start_ + static_cast<long>(c_.size()) - 1, den_);
}

bool PuiseuxSeries::all_rational() const
{
    return std::all_of(c_.begin(), c_.end(), [](const Cyclotomic &c) { return c.is_rational(); });
}

PuiseuxSeries PuiseuxSeries::truncated(const Rational &t) const
{
    PuiseuxSeries out = *this;
    out.trunc_ = min_trunc(trunc_, t);
    out.normalize();
    return out;
}

PuiseuxSeries PuiseuxSeries::rescale(const Rational &r, const Rational &s) const
{
    if (r <= 0)
        throw std::invalid_argument("rescale factor must be positive");
    std::map<Rational, Cyclotomic> t;
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (!c_[i].is_zero())
            t.emplace(r * make_rational(start_ + static_cast<long>(i), den_) + s, c_[i]);
    Trunc nt;
    if (trunc_)
        nt = r * *trunc_ + s;
    return PuiseuxSeries(t, nt);
}

PuiseuxSeries series_rescale(const PuiseuxSeries &a, const Rational &r, const Rational &s)
{
    return a.rescale(r, s);
}

PuiseuxSeries PuiseuxSeries::map_coefficients(
    const std::function<Cyclotomic(const Rational &, const Cyclotomic &)> &f) const
{
    PuiseuxSeries out = *this;
    for (std::size_t i = 0; i < out.c_.size(); ++i)
        if (!out.c_[i].is_zero())
            out.c_[i] = f(make_rational(start_ + static_cast<long>(i), den_), out.c_[i]);
    out.normalize();
    return out;
}

PuiseuxSeries &PuiseuxSeries::operator+=(const PuiseuxSeries &o)
{
    Trunc t = min_trunc(trunc_, o.trunc_);
    if (o.c_.empty()) {
        trunc_ = t;
        normalize();
        return *this;
    }
    if (c_.empty()) {
        *this = o;
        trunc_ = t;
        normalize();
        return *this;
    }
    long den = lcm(den_, o.den_);
    PuiseuxSeries a = with_den(den);
    PuiseuxSeries b = o.with_den(den);
    long lo = std::min(a.start_, b.start_);
    long hi = std::max(a.start_ + static_cast<long>(a.c_.size()), b.start_ + static_cast<long>(b.c_.size()));
    if (t)
        hi = std::min(hi, limit_index(*t, den));
    std::vector<Cyclotomic> c(std::max(0L, hi - lo));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        long k = a.start_ + static_cast<long>(i) - lo;
        if (k < static_cast<long>(c.size()))
            c[k] += a.c_[i];
    }
    for (std::size_t i = 0; i < b.c_.size(); ++i) {
        long k = b.start_ + static_cast<long>(i) - lo;
        if (k < static_cast<long>(c.size()))
            c[k] += b.c_[i];
    }
    den_ = den;
    start_ = lo;
    c_ = std::move(c);
    trunc_ = t;
    normalize();
    return *this;
}

PuiseuxSeries &PuiseuxSeries::operator-=(const PuiseuxSeries &o)
{
    return *this += -o;
}

PuiseuxSeries PuiseuxSeries::operator-() const
{
    PuiseuxSeries out = *this;
    for (auto &c : out.c_)
        c = -c;
    return out;
}

PuiseuxSeries &PuiseuxSeries::operator*=(const Cyclotomic &c)
{
    if (c.is_rational()) {
        const Rational &r = c.to_rational();
        for (auto &x : c_)
            x *= r;
    } else {
        for (auto &x : c_)
            x *= c;
    }
    normalize();
    return *this;
}

bool operator==(const PuiseuxSeries &a, const PuiseuxSeries &b)
{
    if (a.trunc_ != b.trunc_)
        return false;
    if (a.c_.empty() || b.c_.empty())
        return a.c_.empty() && b.c_.empty();
    return a.den_ == b.den_ && a.start_ == b.start_ && a.c_ == b.c_;
}

PuiseuxSeries series_mul(const PuiseuxSeries &a, const PuiseuxSeries &b)
{
    using Trunc = PuiseuxSeries::Trunc;
    bool a_zero = a.c_.empty() && !a.trunc_;
    bool b_zero = b.c_.empty() && !b.trunc_;
    if (a_zero || b_zero)
        return PuiseuxSeries();
    Trunc t;
    if (a.trunc_)
        t = *a.trunc_ + b.lead_exponent();
    if (b.trunc_)
        t = min_trunc(t, *b.trunc_ + a.lead_exponent());
    if (a.c_.empty() || b.c_.empty())
        return PuiseuxSeries(t);

    long den = lcm(a.den_, b.den_);
    PuiseuxSeries x = a.with_den(den);
    PuiseuxSeries y = b.with_den(den);
    long start = x.start_ + y.start_;
    long size = static_cast<long>(x.c_.size() + y.c_.size()) - 1;
    if (t)
        size = std::min(size, limit_index(*t, den) - start);
    PuiseuxSeries out(t);
    out.den_ = den;
    out.start_ = start;
    if (size <= 0)
        return PuiseuxSeries(t);

    std::vector<long> xi, yi;
    for (std::size_t i = 0; i < x.c_.size(); ++i)
        if (!x.c_[i].is_zero())
            xi.push_back(static_cast<long>(i));
    for (std::size_t i = 0; i < y.c_.size(); ++i)
        if (!y.c_[i].is_zero())
            yi.push_back(static_cast<long>(i));

    if (x.all_rational() && y.all_rational()) {
        std::vector<Rational> acc(size);
        Rational tmp;
        for (long i : xi) {
            const Rational &u = x.c_[i].to_rational();
            for (long j : yi) {
                if (i + j >= size)
                    break;
                mpq_mul(tmp.get_mpq_t(), u.get_mpq_t(), y.c_[j].to_rational().get_mpq_t());
                acc[i + j] += tmp;
            }
        }
        out.c_.reserve(size);
        for (auto &r : acc)
            out.c_.emplace_back(r);
    } else {
        out.c_.assign(size, Cyclotomic());
        for (long i : xi)
            for (long j : yi) {
                if (i + j >= size)
                    break;
                out.c_[i + j] += x.c_[i] * y.c_[j];
            }
    }
    out.normalize();
    return out;
}

PuiseuxSeries series_invert(const PuiseuxSeries &a, PuiseuxSeries::Trunc limit)
{
    if (a.empty())
        throw EmptySeries("cannot invert a series with no known terms");
    Rational l = a.lead_exponent();
    PuiseuxSeries::Trunc t;
    if (a.trunc())
        t = *a.trunc() - 2 * l;
    if (limit)
        t = t ? std::min(*t, *limit) : *limit;
    if (!t)
        throw std::invalid_argument("inverting an exact series needs a truncation limit");

    Cyclotomic c0inv = a.lead_coefficient().inverse();
    // b = a / (c0 q^l), exponents >= 0, b_0 = 1
    PuiseuxSeries b = a.shift(-l) * c0inv;
    long den = b.den();
    auto bt = b.terms();
    long n = to_long(ceil((*t + l) * den));
    if (n <= 0)
        return PuiseuxSeries(t);
    std::vector<std::pair<long, Cyclotomic>> bs;
    bool rational = true;
    for (const auto &[e, c] : bt) {
        long k = to_long(Rational(e * den).get_num());
        if (k == 0)
            continue;
        if (k >= n)
            break;
        rational = rational && c.is_rational();
        bs.emplace_back(k, c);
    }
    std::map<Rational, Cyclotomic> out;
    if (rational) {
        std::vector<Rational> inv(n);
        inv[0] = 1;
        Rational tmp;
        for (long k = 1; k < n; ++k) {
            Rational s = 0;
            for (const auto &[j, c] : bs) {
                if (j > k)
                    break;
                mpq_mul(tmp.get_mpq_t(), c.to_rational().get_mpq_t(), inv[k - j].get_mpq_t());
                s += tmp;
            }
            inv[k] = -s;
        }
        for (long k = 0; k < n; ++k)
            if (inv[k] != 0)
                out.emplace(make_rational(k, den), Cyclotomic(inv[k]));
    } else {
        std::vector<Cyclotomic> inv(n);
        inv[0] = Cyclotomic(1);
        for (long k = 1; k < n; ++k) {
            Cyclotomic s;
            for (const auto &[j, c] : bs) {
                if (j > k)
                    break;
                if (!inv[k - j].is_zero())
                    s += c * inv[k - j];
            }
            inv[k] = -s;
        }
        for (long k = 0; k < n; ++k)
            if (!inv[k].is_zero())
                out.emplace(make_rational(k, den), inv[k]);
    }
    PuiseuxSeries r(out, *t + l);
    return r.shift(-l) * c0inv;
}

PuiseuxSeries PuiseuxSeries::pow(long e, Trunc limit) const
{
    if (e < 0)
        return series_invert(*this, limit).pow(-e, limit);
    PuiseuxSeries result = constant(Cyclotomic(1));
    PuiseuxSeries base = *this;
    if (limit)
        base = base.truncated(*limit);
    while (e > 0) {
        if (e & 1)
            result = result * base;
        e >>= 1;
        if (e > 0)
            base = base * base;
    }
    return result;
}

std::string PuiseuxSeries::to_string(int max_terms) const
{
    std::ostringstream os;
    int written = 0;
    for (const auto &[e, c] : terms()) {
        if (written == max_terms) {
            os << " + ...";
            break;
        }
        std::string mono = e == 0 ? "" : exponent_string(e);
        if (c.is_rational()) {
            Rational r = c.to_rational();
            bool neg = r < 0;
            if (written > 0)
                os << (neg ? " - " : " + ");
            else if (neg)
                os << "-";
            Rational a = neg ? Rational(-r) : r;
            if (a != 1 || mono.empty())
                os << a.get_str();
            os << mono;
        } else {
            if (written > 0)
                os << " + ";
            os << "(" << c.to_string() << ")" << mono;
        }
        ++written;
    }
    if (trunc_) {
        if (written > 0)
            os << " + ";
        os << "O(" << (*trunc_ == 0 ? std::string("1") : exponent_string(*trunc_)) << ")";
    } else if (written == 0) {
        os << "0";
    }
    return os.str();
}

IntegralSeries assert_integral(const PuiseuxSeries &a)
{
    IntegralSeries out;
    out.trunc = a.trunc();
    for (const auto &[e, c] : a.terms()) {
        if (!is_integer(e))
            throw NonIntegralExponent("term at exponent " + e.get_str());
        if (!c.is_rational())
            throw NonRationalCoefficient("coefficient " + c.to_string() + " at exponent " + e.get_str());
        const Rational &r = c.to_rational();
        if (!is_integer(r))
            throw NonIntegerCoefficient("coefficient " + r.get_str() + " at exponent " + e.get_str());
        out.terms.emplace(to_long(e.get_num()), r.get_num());
    }
    return out;
}

std::vector<Integer> euler_product_power(long e, long limit)
{
    std::vector<Integer> f;
    if (limit <= 0)
        return f;
    // Pentagonal series of prod (1 - q^n).
    std::vector<std::pair<long, int>> g;
    for (long k = 1;; ++k) {
        long p1 = k * (3 * k - 1) / 2, p2 = k * (3 * k + 1) / 2;
        if (p1 >= limit)
            break;
        int s = (k % 2 == 1) ? -1 : 1;
        g.emplace_back(p1, s);
        if (p2 < limit)
            g.emplace_back(p2, s);
    }
    f.assign(limit, 0);
    f[0] = 1;
    Integer acc, tmp;
    for (long n = 1; n < limit; ++n) {
        acc = 0;
        for (auto [k, s] : g) {
            if (k > n)
                break;
            long w = (e + 1) * k - n;
            if (w == 0)
                continue;
            tmp = f[n - k] * w;
            if (s > 0)
                acc += tmp;
            else
                acc -= tmp;
        }
        mpz_divexact_ui(f[n].get_mpz_t(), acc.get_mpz_t(), static_cast<unsigned long>(n));
    }
    return f;
}

} // namespace orbq
