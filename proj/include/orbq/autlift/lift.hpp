#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orbq/autlift/automorphism.hpp"

namespace orbq
{

// Lift nu-hat = (standard lift) * e^{2 pi i beta_0}; beta = 0 is the standard lift.
struct LiftSpec
{
    LatticeAutomorphism base;
    // ambient coordinates, projected into the fixed space
    std::vector<Rational> beta;
    long hat_order = 1;

    static LiftSpec standard(const LatticeAutomorphism &nu);
    static LiftSpec with_beta(const LatticeAutomorphism &nu, const std::vector<Rational> &beta);
    bool is_standard() const;
};

// Projection (1/n) sum nu^i x onto the fixed space.
std::vector<Rational> fixed_projection(const LatticeAutomorphism &nu, const std::vector<Rational> &x);

long lift_order(const LiftSpec &spec);
// True when a standard lift of nu has order 2n.
bool has_order_doubling(const LatticeAutomorphism &nu);

// w_k on L^{nu^k}: k <beta, alpha> + [n, k even] <alpha, nu^{k/2} alpha> / 2.
PhaseCharacter w_on_fixed(const LiftSpec &spec, long k, const Sublattice &fixed);
PhaseCharacter w_on_fixed(const LiftSpec &spec, long k);

struct PowerProfile
{
    long k;
    CycleType cycle;
    Sublattice fixed;
    PhaseCharacter w;
};

std::vector<PowerProfile> power_profile(const LiftSpec &spec);

// c/24 - (1/24) sum b_t / t + min_norm / 2
Rational conformal_weight(const CycleType &c, const Rational &central_charge, const Rational &min_norm);
Rational conformal_weight(const LiftSpec &spec);
// N^2 rho mod N; throws NonIntegralType.
long orbifold_type(const Rational &rho, long N);
long orbifold_type(const LiftSpec &spec);

// Shifts in (1/r) (L^nu)' with r from `multipliers`, keeping the type 0 lifts
// ordered by hat order.  Throws SearchExhausted.
std::vector<LiftSpec> suggest_type0_beta(const LatticeAutomorphism &nu, const std::vector<long> &multipliers = {2, 3, 4, 6},
                                         std::size_t max_candidates = 20000);

// One of the three table headings.
std::string lift_classification(const LiftSpec &spec);

} // namespace orbq
