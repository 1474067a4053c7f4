#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "orbq/autlift/lift.hpp"
#include "orbq/lattice/theta.hpp"
#include "orbq/modular/unimodular.hpp"

namespace orbq
{

// The orbifold input: a concrete lift, or a fixed-point-free cycle type on an
// extremal even unimodular lattice (theta from the modular fit).
class OrbifoldSource
{
public:
    static OrbifoldSource from_lift(const LiftSpec &spec, bool extremal_theta = false);
    // hat_order 0: n when n is odd or nu^{n/2} = -1, otherwise Unsupported.
    static OrbifoldSource fixed_point_free(const CycleType &cycle, long hat_order = 0);

    long central_charge() const { return c_; }
    long hat_order() const { return N_; }
    long base_order() const { return cycle_.order(); }
    const CycleType &cycle() const { return cycle_; }
    CycleType cycle(long k) const;
    const std::optional<LiftSpec> &spec() const { return spec_; }
    bool virtual_source() const { return !spec_; }
    bool uses_extremal_theta() const { return extremal_; }

    Rational conformal_weight() const;
    long type() const;

    // L^{nu^k} and w_k; rank-0 for virtual sources when k is not a multiple of n.
    const Sublattice &fixed(long k) const;
    const PhaseCharacter &w(long k) const;
    std::size_t fixed_rank(long k) const;

    // theta_{L^{nu^k}, w_k} to exponents < trunc
    PuiseuxSeries twisted_theta(long k, const Rational &trunc) const;
    // plain theta of a sublattice, behind the feasibility guard
    PuiseuxSeries guarded_theta(const GramLattice &K, const Rational &trunc,
                                const std::optional<PhaseCharacter> &phase = std::nullopt) const;

private:
    OrbifoldSource() = default;
    struct Profile
    {
        Sublattice fixed;
        PhaseCharacter w;
    };
    const Profile &profile(long k) const;

    long c_ = 0;
    long N_ = 1;
    CycleType cycle_;
    std::optional<LiftSpec> spec_;
    bool extremal_ = false;
    std::shared_ptr<std::map<long, Profile>> profiles_ = std::make_shared<std::map<long, Profile>>();
};

// Enumerations estimated above this many vectors need a cached theta series.
void set_enumeration_limit(double vectors);
double enumeration_limit();
// Gaussian-heuristic count of vectors of norm <= bound.
double estimated_vector_count(const GramLattice &L, const Rational &bound);

struct TraceFunction
{
    long i = 0, j = 0;
    PuiseuxSeries value;
    std::string provenance;
};

// T(0,j) = theta_{L^{nu^j}, w_j} / eta_{nu^j}, exponents < trunc.
TraceFunction untwisted_trace(const OrbifoldSource &src, long j, const Rational &trunc);
inline TraceFunction untwisted_trace(const LiftSpec &spec, long j, const Rational &trunc)
{
    return untwisted_trace(OrbifoldSource::from_lift(spec), j, trunc);
}

struct DtResult
{
    long t = 1, m = 1;
    // D_t * eta_{nu^t}, a modular form of weight rank/2
    PuiseuxSeries numerator;
    CycleType eta;
    PuiseuxSeries value;
};

// Direct sum over (j, N) = t, cross-checked against the kernel form
// sum_{d | m} mu(d) (m/d) theta_{ker w_t^d}.  Throws MismatchedForms.
DtResult compute_Dt(const OrbifoldSource &src, long t, const Rational &numerator_trunc, const Rational &trunc);

// Z(M) for central charge divisible by 8; throws BadCentralCharge.
Cyclotomic zm_character(const UnimodularMatrix &M, long c);

} // namespace orbq
