#pragma once

#include <vector>

#include "orbq/modular/cycle_type.hpp"
#include "orbq/modular/unimodular.hpp"
#include "orbq/qseries/puiseux.hpp"

namespace orbq
{

Rational dedekind_sum(long d, long c);

// r with theta(M) = e(r); M with c < 0 is replaced by -M first.
Rational eta_multiplier_phase(const UnimodularMatrix &M);
Cyclotomic eta_multiplier(const UnimodularMatrix &M);

// Expansion of prod eta(t tau)^{b_t} with exponents < trunc.
PuiseuxSeries eta_expand(const CycleType &c, const Rational &trunc);

// eta(t M tau)^e = theta(matrix)^e ((C tau + D)/gamma)^{e/2} eta((alpha tau + beta)/gamma)^e
struct TransformedEtaFactor
{
    long t = 1;
    long exponent = 0;
    long alpha = 1, beta = 0, gamma = 1;
    UnimodularMatrix matrix;
    Rational multiplier_phase;
};

// Product of transformed factors.  The value equals
//   prefactor() * (C tau + D)^{automorphy_weight} * expand_transformed(...)
// where the expansion carries only the per-term phases e(beta n / gamma).
struct TransformedEtaQuotient
{
    UnimodularMatrix M;
    std::vector<TransformedEtaFactor> factors;
    // prefactor = e(phase) * sqrt(radicand)
    Rational phase;
    Rational radicand = 1;
    Rational automorphy_weight;

    Cyclotomic prefactor() const;
    Rational leading_exponent() const;
};

TransformedEtaQuotient transform_eta_quotient(const CycleType &c, const UnimodularMatrix &M);

PuiseuxSeries expand_transformed(const TransformedEtaQuotient &f, const Rational &trunc,
                                 bool include_prefactor = true);

// One matrix per right coset of Gamma_0(m) in SL2(Z): the identity for (0:1)
// and matrices with c > 0 otherwise; (1:d) maps to S T^d.
std::vector<UnimodularMatrix> coset_reps_gamma0(long m);

} // namespace orbq
