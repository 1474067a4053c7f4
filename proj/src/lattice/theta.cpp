#include "orbq/lattice/theta.hpp"

#include <cmath>

#include "orbq/error.hpp"
#include "orbq/lattice/theta_cache.hpp"
#include "orbq/modular/forms.hpp"

namespace orbq
{

PuiseuxSeries theta_from_counts(const NormCounts &c, const Rational &trunc)
{
    std::map<Rational, Cyclotomic> terms;
    long m = c.phase_order;
    for (const auto &[n, v] : c.counts) {
        Rational e = n / 2;
        if (e >= trunc)
            break;
        Cyclotomic coeff;
        for (long k = 0; k < m; ++k) {
            if (v[k] == 0)
                continue;
            Integer cnt(static_cast<unsigned long>(v[k]));
            if (k == 0)
                coeff += Cyclotomic(cnt);
            else
                coeff += Cyclotomic::zeta(m, k) * Rational(cnt);
        }
        if (!coeff.is_zero())
            terms[e] = coeff;
    }
    return PuiseuxSeries(terms, trunc);
}

namespace
{

// Norms lie on a grid; the largest grid point strictly below `limit` keeps the
// enumeration from touching a shell the truncation drops anyway.
Rational largest_norm_below(const GramLattice &L, const Rational &limit, const std::vector<Rational> &shift)
{
    Integer den = 1;
    for (std::size_t i = 0; i < L.dim(); ++i)
        for (std::size_t j = 0; j < L.dim(); ++j)
            den = lcm(den, Rational(L.gram()(i, j) * (i == j ? 1 : 2)).get_den());
    Rational step = make_rational(Integer(1), den);
    if (!shift.empty()) {
        Integer s = 1;
        for (const auto &x : shift)
            s = lcm(s, x.get_den());
        step /= s * s;
    } else if (L.is_even()) {
        step = 2;
    }
    Integer k = ceil(limit / step) - 1;
    return k < 0 ? Rational(0) : Rational(k * step);
}

} // namespace

PuiseuxSeries theta(const GramLattice &L, const Rational &trunc, const std::vector<Rational> &shift,
                    const std::optional<PhaseCharacter> &phase)
{
    EnumerateOptions opts;
    bool shifted = false;
    for (const auto &v : shift)
        shifted = shifted || !is_integer(v);
    if (shifted && phase && !phase->is_trivial())
        throw Unsupported("theta with both a shift and a phase");
    if (shifted)
        opts.shift = shift;
    if (phase && !phase->is_trivial())
        opts.phase = phase;
    if (trunc <= 0)
        return PuiseuxSeries(PuiseuxSeries::Trunc(trunc));
    NormCounts c = cached_enumerate(L, largest_norm_below(L, trunc * 2, opts.shift), opts);
    return theta_from_counts(c, trunc);
}

PuiseuxSeries theta(const Sublattice &K, const Rational &trunc, const std::optional<PhaseCharacter> &phase)
{
    return theta(K.lattice, trunc, {}, phase);
}

Rational min_norm_coset(const ShiftedCoset &C)
{
    const GramLattice &L = C.lattice;
    std::size_t d = L.dim();
    bool integral = true;
    for (const auto &v : C.shift)
        integral = integral && is_integer(v);
    if (integral || d == 0)
        return 0;
    // Babai rounding in a reduced basis gives the first upper bound
    Integer D = 1;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), L.gram()(i, j).get_den_mpz_t());
    IntMatrix Gi(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            Gi(i, j) = Rational(L.gram()(i, j) * Rational(D)).get_num();
    IntMatrix U = lll_gram(Gi);
    RatMatrix Ur = to_rational(U);
    std::vector<Rational> lam = inverse(Ur).transpose().apply(C.shift);
    for (auto &v : lam)
        v -= Rational(floor(v + Rational(1, 2)));
    GramLattice R = transform(L, U);
    Rational upper = R.norm(lam);
    Rational b = upper / 64;
    for (;;) {
        if (b > upper)
            b = upper;
        EnumerateOptions opts;
        opts.shift = C.shift;
        NormCounts c = enumerate_by_norm(L, b, opts);
        if (!c.counts.empty())
            return c.counts.begin()->first;
        if (b == upper)
            throw std::logic_error("closest vector search found nothing below the Babai bound");
        b *= 2;
    }
}

PuiseuxSeries extremal_theta(long d, const Rational &trunc)
{
    if (d <= 0 || d % 24 != 0)
        throw Unsupported("extremal theta needs a positive multiple of 24, got " + std::to_string(d));
    long j = d / 24;
    if (trunc <= j)
        throw InsufficientPrecision("extremal theta of dimension " + std::to_string(d) + " needs trunc > " +
                                    std::to_string(j));
    long T = to_long(ceil(trunc));
    PuiseuxSeries e4 = eisenstein_e4(trunc);
    PuiseuxSeries delta = PuiseuxSeries::from_integers(1, euler_product_power(24, T), PuiseuxSeries::Trunc(trunc));
    std::vector<PuiseuxSeries> mono;
    for (long b = 0; b <= j; ++b) {
        PuiseuxSeries m = e4.pow(3 * (j - b), PuiseuxSeries::Trunc(trunc));
        for (long k = 0; k < b; ++k)
            m = series_mul(m, delta);
        mono.push_back(m.truncated(trunc));
    }
    // triangular: mono[b] = q^b + ...
    std::vector<Rational> x(j + 1);
    for (long i = 0; i <= j; ++i) {
        Rational s = i == 0 ? Rational(1) : Rational(0);
        for (long b = 0; b < i; ++b)
            s -= x[b] * mono[b].coefficient(Rational(i)).to_rational();
        x[i] = s;
    }
    PuiseuxSeries f{PuiseuxSeries::Trunc(trunc)};
    for (long b = 0; b <= j; ++b)
        f += mono[b] * Cyclotomic(x[b]);
    return f;
}

TailModel theta_tail_model(const GramLattice &L)
{
    std::size_t d = L.dim();
    TailModel t;
    t.growth = d / 2.0;
    if (d == 0) {
        t.constant = 1;
        return t;
    }
    Integer D = 1;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), L.gram()(i, j).get_den_mpz_t());
    IntMatrix Gi(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            Gi(i, j) = Rational(L.gram()(i, j) * Rational(D)).get_num();
    IntMatrix U = lll_gram(Gi);
    GramLattice R = transform(L, U);
    // Gram-Schmidt lengths q_i from an exact LDL^T
    RatMatrix a = R.gram();
    double constant = 1;
    for (std::size_t c = 0; c < d; ++c) {
        double q = a(c, c).get_d() * (1 - 1e-9);
        constant *= 2 * std::sqrt(2 / q) + 1;
        for (std::size_t r = c + 1; r < d; ++r) {
            Rational f = a(r, c) / a(c, c);
            for (std::size_t k = c; k < d; ++k)
                a(r, k) -= f * a(c, k);
        }
    }
    t.constant = constant;
    return t;
}

NumericValue eval_numeric(const PuiseuxSeries &f, std::complex<double> tau, const TailModel &tail)
{
    if (tau.imag() <= 0)
        throw DivergentTail("Im(tau) must be positive");
    const double two_pi = 2 * M_PI;
    NumericValue out;
    double mag = 0;
    for (const auto &[e, c] : f.terms()) {
        std::complex<double> term = c.to_complex() * std::exp(std::complex<double>(0, two_pi) * e.get_d() * tau);
        out.value += term;
        mag += std::abs(term);
    }
    out.error = mag * 1e-14 + 1e-300;
    if (!f.trunc() || tail.constant == 0)
        return out;
    long den = f.den();
    double e0 = Rational(Rational(ceil(*f.trunc() * den)) / den).get_d();
    double y = tau.imag();
    double base = std::max(1.0, 1 + e0);
    double step = 1.0 / den;
    double ratio = std::pow((base + step) / base, tail.growth) * std::exp(-two_pi * y * step);
    if (ratio >= 1)
        throw DivergentTail("tail ratio " + std::to_string(ratio) + " at Im(tau) = " + std::to_string(y));
    double first = tail.constant * std::pow(base, tail.growth) * std::exp(-two_pi * y * e0);
    out.error += first / (1 - ratio);
    return out;
}

} // namespace orbq
