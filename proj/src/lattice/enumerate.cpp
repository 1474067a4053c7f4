#include "orbq/lattice/enumerate.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "orbq/error.hpp"

namespace orbq
{

namespace
{

std::atomic<unsigned> g_threads{0};

// Integer model of the problem: y = s*x + mu, exact norm yT G y, with G = D*gram.
struct Problem
{
    std::size_t d = 0;
    std::vector<std::int64_t> G; // d*d
    std::vector<std::int64_t> mu;
    std::int64_t s = 1;
    Integer scale;               // norm = Q / scale
    std::int64_t bound = 0;      // on Q
    std::vector<std::int64_t> phase; // numerators mod m
    long m = 1;
    bool symmetric = false;
    IntMatrix U; // reduced basis rows in original coordinates

    // floating Cholesky: Q(x)/s^2 = sum_i q_i (x_i + lam_i + sum_{j>i} r_ij (x_j + lam_j))^2
    std::vector<double> q, r, lam;
    double fbound = 0;
};

std::int64_t checked(const Integer &z, const char *what)
{
    if (!z.fits_slong_p())
        throw Unsupported(std::string("enumeration overflow in ") + what);
    return z.get_si();
}

Problem setup(const GramLattice &L, const Rational &bound, const EnumerateOptions &opts)
{
    Problem p;
    p.d = L.dim();
    std::size_t d = p.d;
    Integer D = 1;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), L.gram()(i, j).get_den_mpz_t());
    IntMatrix Gi(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            Gi(i, j) = Rational(L.gram()(i, j) * Rational(D)).get_num();

    // LLL preconditioning: new basis rows b'_i = sum_j U_ij b_j
    p.U = lll_gram(Gi);
    RatMatrix Ur = to_rational(p.U);
    IntMatrix Gr = p.U * Gi * p.U.transpose();

    std::vector<Rational> shift = opts.shift;
    if (shift.empty())
        shift.assign(d, Rational(0));
    if (shift.size() != d)
        throw std::invalid_argument("shift has the wrong dimension");
    // old coords x = U^T x', so lambda' = U^{-T} lambda
    std::vector<Rational> lam(d);
    if (d > 0) {
        RatMatrix UinvT = inverse(Ur).transpose();
        lam = UinvT.apply(shift);
    }
    for (auto &v : lam)
        v -= Rational(floor(v)); // reduce into [0,1), the coset is unchanged
    Integer s = 1;
    for (const auto &v : lam)
        mpz_lcm(s.get_mpz_t(), s.get_mpz_t(), v.get_den_mpz_t());
    p.s = checked(s, "shift denominator");
    p.mu.resize(d);
    p.symmetric = true;
    for (std::size_t i = 0; i < d; ++i) {
        p.mu[i] = checked(Rational(lam[i] * Rational(s)).get_num(), "shift");
        if (p.mu[i] != 0)
            p.symmetric = false;
    }

    p.G.resize(d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            p.G[i * d + j] = checked(Gr(i, j), "Gram entry");
    p.scale = D * s * s;
    Integer B = floor(bound * Rational(p.scale));
    if (B < 0)
        B = -1;
    p.bound = checked(B, "bound");
    if (p.bound > (std::int64_t(1) << 52))
        throw Unsupported("enumeration bound too large");

    if (opts.phase) {
        if (opts.phase->values.size() != d)
            throw std::invalid_argument("phase has the wrong dimension");
        p.m = opts.phase->order();
        std::vector<Rational> a = Ur.apply(opts.phase->values);
        p.phase.resize(d);
        for (std::size_t i = 0; i < d; ++i)
            p.phase[i] = mod(to_long(Rational(frac(a[i]) * p.m).get_num()), p.m);
    } else {
        p.phase.assign(d, 0);
    }

    // Cholesky of Gr in doubles, eliminating from the last coordinate
    p.q.assign(d, 0);
    p.r.assign(d * d, 0);
    p.lam.resize(d);
    for (std::size_t i = 0; i < d; ++i)
        p.lam[i] = lam[i].get_d();
    std::vector<double> a(d * d);
    for (std::size_t i = 0; i < d * d; ++i)
        a[i] = static_cast<double>(p.G[i]);
    // G = R^T R with R upper triangular; q_i = R_ii^2, r_ij = R_ij / R_ii
    std::vector<double> R(d * d, 0);
    for (std::size_t i = 0; i < d; ++i) {
        double sdiag = a[i * d + i];
        for (std::size_t k = 0; k < i; ++k)
            sdiag -= R[k * d + i] * R[k * d + i];
        if (sdiag <= 0)
            throw NotPositiveDefinite("floating Cholesky failed");
        R[i * d + i] = std::sqrt(sdiag);
        for (std::size_t j = i + 1; j < d; ++j) {
            double v = a[i * d + j];
            for (std::size_t k = 0; k < i; ++k)
                v -= R[k * d + i] * R[k * d + j];
            R[i * d + j] = v / R[i * d + i];
        }
    }
    for (std::size_t i = 0; i < d; ++i) {
        p.q[i] = R[i * d + i] * R[i * d + i];
        for (std::size_t j = i + 1; j < d; ++j)
            p.r[i * d + j] = R[i * d + j] / R[i * d + i];
    }
    double sd = static_cast<double>(p.s);
    p.fbound = static_cast<double>(p.bound) / (sd * sd);
    p.fbound = p.fbound * (1 + 1e-9) + 1e-9;
    return p;
}

class Histogram
{
public:
    Histogram(std::int64_t bound, long m) : m_(m)
    {
        if (bound >= 0 && static_cast<std::uint64_t>(bound + 1) * m <= (1u << 20))
            dense_.assign(static_cast<std::size_t>(bound + 1) * m, 0);
        else
            use_map_ = true;
    }
    void add(std::int64_t norm, long phase, std::uint64_t w = 1)
    {
        if (use_map_) {
            auto &v = map_[norm];
            if (v.empty())
                v.assign(m_, 0);
            v[phase] += w;
        } else {
            dense_[static_cast<std::size_t>(norm) * m_ + phase] += w;
        }
    }
    void merge(const Histogram &o)
    {
        if (use_map_) {
            for (const auto &[n, v] : o.map_)
                for (long k = 0; k < m_; ++k)
                    if (v[k])
                        add(n, k, v[k]);
        } else {
            for (std::size_t i = 0; i < dense_.size(); ++i)
                dense_[i] += o.dense_[i];
        }
    }
    NormCounts result(const Integer &scale) const
    {
        NormCounts out;
        out.phase_order = m_;
        auto put = [&](std::int64_t n, const std::uint64_t *v) {
            bool any = false;
            for (long k = 0; k < m_; ++k)
                any = any || v[k];
            if (any)
                out.counts[make_rational(Integer(static_cast<long>(n)), scale)] = {v, v + m_};
        };
        if (use_map_) {
            for (const auto &[n, v] : map_)
                put(n, v.data());
        } else {
            for (std::size_t n = 0; n * m_ < dense_.size(); ++n)
                put(static_cast<std::int64_t>(n), &dense_[n * m_]);
        }
        return out;
    }

private:
    long m_;
    bool use_map_ = false;
    std::vector<std::uint64_t> dense_;
    std::unordered_map<std::int64_t, std::vector<std::uint64_t>> map_;
};

// Depth-first Fincke-Pohst walk.  Leaf receives (y-norm Q, phase, x, zero-flag).
template <class Leaf>
class Walker
{
public:
    Walker(const Problem &p, Leaf &leaf) : p_(p), leaf_(leaf), d_(p.d)
    {
        x_.assign(d_, 0);
        y_.assign(d_, 0);
        rr_.assign((d_ + 1) * d_, 0);
        z_.assign(d_, 0);
    }

    // Walk the subtree with the top coordinate fixed to xt.
    void run_top(std::int64_t xt)
    {
        std::size_t i = d_ - 1;
        double c = -p_.lam[i];
        set_and_descend(i, xt, c, 0.0, 0, 0, true);
    }

    // Admissible range for the top coordinate.
    std::pair<std::int64_t, std::int64_t> top_range() const
    {
        std::size_t i = d_ - 1;
        double c = -p_.lam[i];
        auto [lo, hi] = range(i, c, 0.0);
        if (p_.symmetric)
            lo = std::max<std::int64_t>(lo, 0);
        return {lo, hi};
    }

private:
    std::pair<std::int64_t, std::int64_t> range(std::size_t i, double c, double partial) const
    {
        double rem = p_.fbound - partial;
        if (rem < 0)
            return {1, 0};
        double w = std::sqrt(rem / p_.q[i]) + 1e-9;
        return {static_cast<std::int64_t>(std::ceil(c - w)), static_cast<std::int64_t>(std::floor(c + w))};
    }

    // rr_[(i+1)*d + k] = sum_{j>i} G_kj y_j
    void set_and_descend(std::size_t i, std::int64_t xi, double c, double partial, std::int64_t qabove,
                         long ph, bool zero_so_far)
    {
        const std::int64_t *G = p_.G.data();
        std::int64_t yi = p_.s * xi + p_.mu[i];
        std::int64_t *rin = &rr_[(i + 1) * d_];
        std::int64_t qi = qabove + yi * (2 * rin[i] + G[i * d_ + i] * yi);
        long phi = ph;
        if (p_.m > 1)
            phi = static_cast<long>((ph + p_.phase[i] * mod(xi, p_.m)) % p_.m);
        x_[i] = xi;
        if (i == 0) {
            if (qi <= p_.bound)
                leaf_(qi, phi, x_, zero_so_far && xi == 0);
            return;
        }
        double diff = static_cast<double>(xi) - c;
        double part = partial + p_.q[i] * diff * diff;
        std::int64_t *rout = &rr_[i * d_];
        for (std::size_t k = 0; k < i; ++k)
            rout[k] = rin[k] + G[k * d_ + i] * yi;
        z_[i] = static_cast<double>(xi) + p_.lam[i];
        std::size_t n = i - 1;
        double cn = -p_.lam[n];
        for (std::size_t j = i; j < d_; ++j)
            cn -= p_.r[n * d_ + j] * z_[j];
        auto [lo, hi] = range(n, cn, part);
        bool zero = zero_so_far && xi == 0;
        if (zero && p_.symmetric)
            lo = std::max<std::int64_t>(lo, 0);
        if (n == 0) {
            // leaf level, inlined
            const std::int64_t r0 = rout[0], g00 = G[0];
            for (std::int64_t x0 = lo; x0 <= hi; ++x0) {
                std::int64_t y0 = p_.s * x0 + p_.mu[0];
                std::int64_t q0 = qi + y0 * (2 * r0 + g00 * y0);
                if (q0 <= p_.bound) {
                    x_[0] = x0;
                    long p0 = phi;
                    if (p_.m > 1)
                        p0 = static_cast<long>((phi + p_.phase[0] * mod(x0, p_.m)) % p_.m);
                    leaf_(q0, p0, x_, zero && x0 == 0);
                }
            }
            return;
        }
        for (std::int64_t xn = lo; xn <= hi; ++xn)
            set_and_descend(n, xn, cn, part, qi, phi, zero);
    }

    const Problem &p_;
    Leaf &leaf_;
    std::size_t d_;
    std::vector<std::int64_t> x_, y_, rr_;
    std::vector<double> z_;
};

template <class MakeLeaf, class Finish>
void walk_parallel(const Problem &p, unsigned threads, MakeLeaf make_leaf, Finish finish)
{
    struct Dummy
    {
        void operator()(std::int64_t, long, const std::vector<std::int64_t> &, bool) {}
    } dummy;
    Walker<Dummy> probe(p, dummy);
    auto [lo, hi] = probe.top_range();
    if (lo > hi)
        return;
    std::atomic<std::int64_t> next{lo};
    unsigned n = std::max(1u, threads);
    std::int64_t span = hi - lo + 1;
    if (static_cast<std::int64_t>(n) > span)
        n = static_cast<unsigned>(span);
    std::vector<std::thread> pool;
    std::mutex mu;
    auto work = [&]() {
        auto leaf = make_leaf();
        Walker<decltype(leaf)> w(p, leaf);
        for (;;) {
            std::int64_t xt = next.fetch_add(1);
            if (xt > hi)
                break;
            w.run_top(xt);
        }
        std::lock_guard<std::mutex> lock(mu);
        finish(leaf);
    };
    if (n == 1) {
        work();
        return;
    }
    for (unsigned t = 0; t < n; ++t)
        pool.emplace_back(work);
    for (auto &t : pool)
        t.join();
}

} // namespace

std::uint64_t NormCounts::total(const Rational &norm) const
{
    auto it = counts.find(norm);
    if (it == counts.end())
        return 0;
    std::uint64_t s = 0;
    for (auto c : it->second)
        s += c;
    return s;
}

std::map<Rational, std::uint64_t> NormCounts::totals() const
{
    std::map<Rational, std::uint64_t> out;
    for (const auto &[n, v] : counts)
        out[n] = total(n);
    return out;
}

void set_default_threads(unsigned n)
{
    g_threads = n;
}

unsigned default_threads()
{
    unsigned n = g_threads;
    if (n == 0)
        n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

NormCounts enumerate_by_norm(const GramLattice &L, const Rational &bound, const EnumerateOptions &opts)
{
    Problem p = setup(L, bound, opts);
    long m = p.m;
    if (p.d == 0) {
        NormCounts out;
        out.phase_order = m;
        if (bound >= 0) {
            out.counts[Rational(0)] = std::vector<std::uint64_t>(m, 0);
            out.counts[Rational(0)][0] = 1;
        }
        return out;
    }
    Histogram total(p.bound, m);
    bool sym = p.symmetric;
    struct Leaf
    {
        Histogram h;
        bool sym;
        long m;
        void operator()(std::int64_t q, long ph, const std::vector<std::int64_t> &, bool zero)
        {
            if (!sym || zero) {
                h.add(q, ph);
                return;
            }
            h.add(q, ph);
            h.add(q, ph == 0 ? 0 : m - ph);
        }
    };
    walk_parallel(
        p, opts.threads ? opts.threads : default_threads(), [&]() { return Leaf{Histogram(p.bound, m), sym, m}; },
        [&](Leaf &leaf) { total.merge(leaf.h); });
    return total.result(p.scale);
}

void enumerate_vectors(const GramLattice &L, const Rational &bound, const std::vector<Rational> &shift,
                       const std::function<void(const std::vector<long> &, const Rational &)> &visit)
{
    EnumerateOptions opts;
    opts.shift = shift;
    Problem p = setup(L, bound, opts);
    if (p.d == 0) {
        if (bound >= 0)
            visit({}, Rational(0));
        return;
    }
    // undo the shift normalisation and the reduction (x = U^T x')
    std::vector<Rational> lam_full = shift.empty() ? std::vector<Rational>(p.d) : shift;
    RatMatrix UinvT = inverse(to_rational(p.U)).transpose();
    std::vector<Rational> lam_red = UinvT.apply(lam_full);
    std::vector<long> offset(p.d);
    for (std::size_t i = 0; i < p.d; ++i)
        offset[i] = -to_long(floor(lam_red[i]));
    std::vector<long> xo(p.d);
    auto emit = [&](std::int64_t q, const std::vector<std::int64_t> &x) {
        for (std::size_t j = 0; j < p.d; ++j) {
            Integer s = 0;
            for (std::size_t i = 0; i < p.d; ++i)
                s += p.U(i, j) * Integer(static_cast<long>(x[i] + offset[i]));
            xo[j] = to_long(s);
        }
        visit(xo, make_rational(Integer(static_cast<long>(q)), p.scale));
    };
    struct Leaf
    {
        const Problem *p;
        decltype(emit) *e;
        std::vector<std::int64_t> neg;
        void operator()(std::int64_t q, long, const std::vector<std::int64_t> &x, bool zero)
        {
            (*e)(q, x);
            if (p->symmetric && !zero) {
                neg.resize(x.size());
                for (std::size_t i = 0; i < x.size(); ++i)
                    neg[i] = -x[i];
                (*e)(q, neg);
            }
        }
    };
    walk_parallel(p, 1, [&]() { return Leaf{&p, &emit, {}}; }, [](Leaf &) {});
}

} // namespace orbq
