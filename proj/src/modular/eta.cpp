#include "orbq/modular/eta.hpp"

#include <algorithm>
#include <set>

#include "orbq/error.hpp"

namespace orbq
{

Rational dedekind_sum(long d, long c)
{
    if (c <= 0)
        throw std::invalid_argument("dedekind_sum needs c > 0");
    if (gcd(d, c) != 1)
        throw NonCoprime("s(" + std::to_string(d) + "," + std::to_string(c) + ")");
    Rational s = 0;
    for (long n = 1; n < c; ++n) {
        Rational x = make_rational(mod(d * n, c), c);
        s += make_rational(n, c) * (x - Rational(1, 2));
    }
    return s;
}

Rational eta_multiplier_phase(const UnimodularMatrix &M)
{
    UnimodularMatrix m = M.normalized();
    if (m.c == 0)
        return frac(make_rational(m.b, 24));
    Rational r = make_rational(m.a + m.d - 3 * m.c, 24 * m.c) - dedekind_sum(m.d, m.c) / 2;
    return frac(r);
}

Cyclotomic eta_multiplier(const UnimodularMatrix &M)
{
    return Cyclotomic::root_of_unity(eta_multiplier_phase(M));
}

PuiseuxSeries eta_expand(const CycleType &c, const Rational &trunc)
{
    Rational lead = c.leading_exponent();
    PuiseuxSeries out = PuiseuxSeries::constant(Cyclotomic(1), trunc - lead);
    for (auto [t, b] : c.exponents()) {
        long n = to_long(ceil((trunc - lead) / t));
        if (n <= 0)
            return PuiseuxSeries(trunc);
        PuiseuxSeries f = PuiseuxSeries::from_integers(0, euler_product_power(b, n), Rational(n));
        out = out * f.rescale(Rational(t), Rational(0));
    }
    return out.shift(lead);
}

Cyclotomic TransformedEtaQuotient::prefactor() const
{
    return Cyclotomic::root_of_unity(phase) * Cyclotomic::sqrt(radicand);
}

Rational TransformedEtaQuotient::leading_exponent() const
{
    Rational s = 0;
    for (const auto &f : factors)
        s += make_rational(f.exponent * f.alpha, 24 * f.gamma);
    return s;
}

TransformedEtaQuotient transform_eta_quotient(const CycleType &c, const UnimodularMatrix &M)
{
    TransformedEtaQuotient out;
    UnimodularMatrix m = M.normalized();
    out.M = m;
    out.automorphy_weight = make_rational(c.rank(), 2);
    for (auto [t, e] : c.exponents()) {
        TransformedEtaFactor f;
        f.t = t;
        f.exponent = e;
        if (m.c == 0) {
            // eta(t tau + t B): the phase is produced by the expansion itself
            f.alpha = t;
            f.beta = t * m.b;
            f.gamma = 1;
            f.matrix = UnimodularMatrix::identity();
            f.multiplier_phase = 0;
        } else {
            long alpha = gcd(t * m.a, m.c);
            long a = t * m.a / alpha;
            long cc = m.c / alpha;
            long d = cc == 1 ? 0 : mod_inverse(a, cc);
            long b = (a * d - 1) / cc;
            f.alpha = alpha;
            f.gamma = t / alpha;
            f.beta = t * m.b * d - m.d * b;
            f.matrix = UnimodularMatrix::make(a, b, cc, d);
            f.multiplier_phase = eta_multiplier_phase(f.matrix);
        }
        out.phase += e * (f.multiplier_phase + make_rational(f.beta, 24 * f.gamma));
        Rational g(f.gamma);
        for (long i = 0; i < std::labs(e); ++i)
            out.radicand = e > 0 ? Rational(out.radicand / g) : Rational(out.radicand * g);
        out.factors.push_back(f);
    }
    out.phase = frac(out.phase);
    return out;
}

PuiseuxSeries expand_transformed(const TransformedEtaQuotient &q, const Rational &trunc, bool include_prefactor)
{
    Rational lead = q.leading_exponent();
    Rational room = trunc - lead;
    PuiseuxSeries out = PuiseuxSeries::constant(Cyclotomic(1), room);
    for (const auto &f : q.factors) {
        // q^{e alpha/(24 gamma)} sum_n p_e(n) e(beta n/gamma) q^{alpha n/gamma}
        Rational step = make_rational(f.alpha, f.gamma);
        long n = to_long(ceil(room / step));
        if (n <= 0)
            return PuiseuxSeries(trunc);
        std::vector<Integer> p = euler_product_power(f.exponent, n);
        std::map<Rational, Cyclotomic> terms;
        long beta = mod(f.beta, f.gamma);
        for (long k = 0; k < n; ++k) {
            if (p[k] == 0)
                continue;
            Cyclotomic c(p[k]);
            if (beta != 0)
                c = c * Cyclotomic::zeta(f.gamma, beta * k);
            terms.emplace(step * k, c);
        }
        out = out * PuiseuxSeries(terms, room);
    }
    out = out.shift(lead);
    if (include_prefactor)
        out *= q.prefactor();
    return out;
}

std::vector<UnimodularMatrix> coset_reps_gamma0(long m)
{
    if (m <= 0)
        throw std::invalid_argument("coset_reps_gamma0 needs m >= 1");
    if (m == 1)
        return {UnimodularMatrix::identity()};
    std::vector<long> units;
    for (long u = 1; u < m; ++u)
        if (gcd(u, m) == 1)
            units.push_back(u);
    // canonical point of P^1(Z/m): least (c, d) in its unit orbit
    auto canon = [&](long c, long d) {
        std::pair<long, long> best{m, m};
        for (long u : units)
            best = std::min(best, std::pair<long, long>{u * c % m, u * d % m});
        return best;
    };
    std::set<std::pair<long, long>> seen;
    std::vector<UnimodularMatrix> reps;
    // (0 : 1) first, then (1 : d), then the rest in lexicographic order
    for (long c = 0; c < m; ++c)
        for (long d = 0; d < m; ++d) {
            if (gcd(gcd(c, d), m) != 1)
                continue;
            auto key = canon(c, d);
            if (!seen.insert(key).second)
                continue;
            if (c == 0) {
                reps.push_back(UnimodularMatrix::identity());
                continue;
            }
            long cc = c, dd = d;
            while (gcd(cc, dd) != 1)
                dd += m;
            auto [g, x, y] = ext_gcd(dd, cc);
            (void)g;
            // a dd - b cc = 1 with a = x, b = -y
            reps.push_back(UnimodularMatrix::make(x, -y, cc, dd));
        }
    return reps;
}

} // namespace orbq
