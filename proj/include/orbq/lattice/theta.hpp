#pragma once

#include <complex>
#include <optional>

#include "orbq/lattice/enumerate.hpp"
#include "orbq/qseries/puiseux.hpp"

namespace orbq
{

// sum u(x) q^{<x+shift, x+shift>/2} over exponents < trunc.  A shift and a phase
// together are rejected.
PuiseuxSeries theta(const GramLattice &L, const Rational &trunc, const std::vector<Rational> &shift = {},
                    const std::optional<PhaseCharacter> &phase = std::nullopt);
PuiseuxSeries theta(const Sublattice &K, const Rational &trunc,
                    const std::optional<PhaseCharacter> &phase = std::nullopt);

// Series from precomputed counts (norms halved into exponents).
PuiseuxSeries theta_from_counts(const NormCounts &c, const Rational &trunc);

Rational min_norm_coset(const ShiftedCoset &C);

// Level one form of weight d/2 with expansion 1 + O(q^{d/24 + 1}).
PuiseuxSeries extremal_theta(long d, const Rational &trunc);

// |c_e| <= constant * (1 + e)^growth for every exponent e beyond the truncation.
struct TailModel
{
    double constant = 1;
    double growth = 0;
};

// Box bound on lattice point counts: covers any phase or shift.
TailModel theta_tail_model(const GramLattice &L);

struct NumericValue
{
    std::complex<double> value;
    double error = 0;
};

// Partial sum plus a certified geometric bound on the unknown tail.
NumericValue eval_numeric(const PuiseuxSeries &f, std::complex<double> tau, const TailModel &tail = {});

} // namespace orbq
