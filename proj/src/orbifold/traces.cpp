#include "orbq/orbifold/traces.hpp"

#include <atomic>
#include <cmath>
#include <mutex>

#include "orbq/error.hpp"
#include "orbq/lattice/theta_cache.hpp"
#include "orbq/modular/eta.hpp"

namespace orbq
{

namespace
{

std::atomic<double> g_limit{3e9};
std::mutex g_profile_mu;

PuiseuxSeries constant_series(long v, const Rational &trunc)
{
    if (trunc <= 0)
        return PuiseuxSeries(PuiseuxSeries::Trunc(trunc));
    return PuiseuxSeries::constant(Cyclotomic(v), trunc);
}

PhaseCharacter power_of(const PhaseCharacter &w, long d)
{
    std::vector<Rational> v = w.values;
    for (auto &x : v)
        x *= d;
    return PhaseCharacter::make(std::move(v));
}

} // namespace

void set_enumeration_limit(double vectors) { g_limit = vectors; }
double enumeration_limit() { return g_limit; }

double estimated_vector_count(const GramLattice &L, const Rational &bound)
{
    double d = double(L.dim());
    if (L.dim() == 0)
        return 1;
    double r2 = bound.get_d();
    if (r2 <= 0)
        return 1;
    // ball volume over covolume
    double logv = 0.5 * d * std::log(M_PI * r2) - std::lgamma(0.5 * d + 1) - 0.5 * std::log(L.det().get_d());
    return std::exp(logv) + 1;
}

OrbifoldSource OrbifoldSource::from_lift(const LiftSpec &spec, bool extremal_theta)
{
    OrbifoldSource s;
    const auto &L = spec.base.lattice();
    s.c_ = long(L.dim());
    s.N_ = spec.hat_order;
    s.cycle_ = cycle_type_of(spec.base);
    s.spec_ = spec;
    if (extremal_theta) {
        if (s.c_ % 24 != 0 || L.det() != 1 || !L.is_even())
            throw Unsupported("extremal theta needs an even unimodular lattice of dimension divisible by 24");
        s.extremal_ = true;
    }
    return s;
}

OrbifoldSource OrbifoldSource::fixed_point_free(const CycleType &cycle, long hat_order)
{
    OrbifoldSource s;
    s.cycle_ = cycle;
    s.c_ = cycle.degree();
    if (s.c_ <= 0 || s.c_ % 24 != 0)
        throw Unsupported("virtual source needs degree divisible by 24, got " + cycle.to_string());
    long n = cycle.order();
    for (long k = 1; k < n; ++k)
        if (cycle_power(cycle, k).rank() != 0)
            throw Unsupported("power " + std::to_string(k) + " of " + cycle.to_string() + " has fixed vectors");
    if (n % 2 == 0) {
        CycleType minus_one(std::map<long, long>{{1, -s.c_}, {2, s.c_}});
        if (cycle_power(cycle, n / 2) != minus_one)
            throw Unsupported("lift order of " + cycle.to_string() + " is not determined by its cycle type");
    }
    if (hat_order != 0 && hat_order != n)
        throw Unsupported("virtual source supports only hat order " + std::to_string(n));
    s.N_ = n;
    s.extremal_ = true;
    return s;
}

CycleType OrbifoldSource::cycle(long k) const
{
    long n = base_order();
    k = mod(k, n);
    if (k == 0)
        return CycleType(std::map<long, long>{{1, c_}});
    return cycle_power(cycle_, k);
}

Rational OrbifoldSource::conformal_weight() const
{
    if (spec_)
        return orbq::conformal_weight(*spec_);
    if (N_ == 1)
        return 0;
    return orbq::conformal_weight(cycle_, Rational(c_), Rational(0));
}

long OrbifoldSource::type() const
{
    if (spec_)
        return orbifold_type(*spec_);
    return orbifold_type(conformal_weight(), N_);
}

const OrbifoldSource::Profile &OrbifoldSource::profile(long k) const
{
    if (!spec_)
        throw Unsupported("virtual source has no explicit fixed lattice");
    k = mod(k, N_);
    std::lock_guard<std::mutex> lock(g_profile_mu);
    auto it = profiles_->find(k);
    if (it == profiles_->end()) {
        Sublattice K = fixed_sublattice(spec_->base.lattice(), spec_->base.power(k));
        PhaseCharacter w = w_on_fixed(*spec_, k, K);
        it = profiles_->emplace(k, Profile{std::move(K), std::move(w)}).first;
    }
    return it->second;
}

const Sublattice &OrbifoldSource::fixed(long k) const { return profile(k).fixed; }
const PhaseCharacter &OrbifoldSource::w(long k) const { return profile(k).w; }

std::size_t OrbifoldSource::fixed_rank(long k) const
{
    if (spec_)
        return fixed(k).rank();
    return mod(k, base_order()) == 0 ? std::size_t(c_) : 0;
}

PuiseuxSeries OrbifoldSource::guarded_theta(const GramLattice &K, const Rational &trunc,
                                            const std::optional<PhaseCharacter> &phase) const
{
    if (K.dim() == 0)
        return constant_series(1, trunc);
    Rational bound = trunc * 2;
    if (estimated_vector_count(K, bound) > enumeration_limit()) {
        EnumerateOptions opts;
        if (phase && !phase->is_trivial())
            opts.phase = phase;
        if (!ThetaCache::instance().lookup(ThetaCache::preimage(K, opts), bound))
            throw NeedsCache("theta of a rank " + std::to_string(K.dim()) + " lattice to norm " + to_string(bound) +
                             " needs about " + std::to_string(estimated_vector_count(K, bound)) +
                             " vectors; provide a cached series");
    }
    return theta(K, trunc, {}, phase);
}

PuiseuxSeries OrbifoldSource::twisted_theta(long k, const Rational &trunc) const
{
    k = mod(k, N_);
    if (k == 0 && extremal_)
        return extremal_theta(c_, trunc);
    if (!spec_)
        return constant_series(1, trunc);
    const auto &p = profile(k);
    return guarded_theta(p.fixed.lattice, trunc, p.w);
}

TraceFunction untwisted_trace(const OrbifoldSource &src, long j, const Rational &trunc)
{
    long k = mod(j, src.hat_order());
    CycleType C = src.cycle(k);
    PuiseuxSeries num = src.twisted_theta(k, trunc + C.leading_exponent());
    TraceFunction out;
    out.i = 0;
    out.j = k;
    out.value = series_mul(num, eta_expand(-C, trunc)).truncated(trunc);
    out.provenance = "theta / eta_{" + C.to_string() + "}";
    return out;
}

DtResult compute_Dt(const OrbifoldSource &src, long t, const Rational &numerator_trunc, const Rational &trunc)
{
    long N = src.hat_order();
    if (t <= 0 || N % t != 0)
        throw BadDivisor(std::to_string(t) + " does not divide " + std::to_string(N));
    DtResult r;
    r.t = t;
    r.m = N / t;
    r.eta = src.cycle(t);

    PuiseuxSeries direct{PuiseuxSeries::Trunc(numerator_trunc)};
    for (long j = 0; j < N; ++j)
        if (gcd(j, N) == t)
            direct += src.twisted_theta(j, numerator_trunc);

    PuiseuxSeries kernels{PuiseuxSeries::Trunc(numerator_trunc)};
    if (src.fixed_rank(t) == 0 || !src.spec()) {
        if (src.fixed_rank(t) == 0)
            kernels = constant_series(euler_phi(r.m), numerator_trunc);
        else
            kernels = direct; // virtual source, t = N: the lattice is not explicit
    } else {
        const auto &K = src.fixed(t);
        const auto &w = src.w(t);
        for (long d : divisors(r.m)) {
            int mu = mobius(d);
            if (mu == 0)
                continue;
            Sublattice ker = kernel_of_character(K, power_of(w, d));
            kernels += src.guarded_theta(ker.lattice, numerator_trunc) * Cyclotomic(long(mu) * (r.m / d));
        }
    }
    if (!(direct == kernels))
        throw MismatchedForms("D_" + std::to_string(t) + ": direct sum " + direct.to_string() + " vs kernel form " +
                              kernels.to_string());
    r.numerator = direct;
    r.value = series_mul(direct, eta_expand(-r.eta, trunc)).truncated(trunc);
    return r;
}

Cyclotomic zm_character(const UnimodularMatrix &M, long c)
{
    if (c % 8 != 0)
        throw BadCentralCharge("central charge " + std::to_string(c) + " is not divisible by 8");
    if (c % 24 == 0)
        return Cyclotomic(1);
    Rational x = mod(M.d, 3) != 0 ? Rational((M.b - M.c) * M.d) : Rational(M.b + (M.a + 1) * M.c);
    return Cyclotomic::root_of_unity(make_rational(-c, 24) * x);
}

} // namespace orbq
