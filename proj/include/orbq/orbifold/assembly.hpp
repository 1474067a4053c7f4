#pragma once

#include <map>
#include <vector>

#include "orbq/modular/forms.hpp"
#include "orbq/orbifold/traces.hpp"

namespace orbq
{

struct CtOptions
{
    // left-multiply every coset representative by a random element of Gamma_0(m)
    std::optional<unsigned> randomize_seed;
};

struct CtResult
{
    long t = 1, m = 1;
    PuiseuxSeries value;
    FormSpace space;
    std::vector<Rational> coefficients;
    std::size_t cosets = 1;
    // leading exponent of the S-image: rho of the nu-hat^t twisted sector minus c/24
    std::optional<Rational> sector_exponent;
};

struct NumeratorFit
{
    DtResult dt;
    FormSpace space;
    std::vector<Rational> coefficients;
};

// D_t to exponents < trunc and D_t * eta_{nu^t} in an eta-quotient basis, fit at
// lcm(level of L^{nu^t}, m) and then at the lcm of the kernel levels.
NumeratorFit fit_numerator(const OrbifoldSource &src, long t, const Rational &trunc);

// D_t|R as a q-series, already divided by Z(R).
PuiseuxSeries transformed_Dt(const OrbifoldSource &src, long t, const FormSpace &space,
                             const std::vector<Rational> &coeffs, const UnimodularMatrix &R, const Rational &trunc);

CtResult compute_Ct(const OrbifoldSource &src, long t, const Rational &trunc, const CtOptions &opts = {});

struct OrbifoldReport
{
    long central_charge = 0;
    long hat_order = 1;
    CycleType cycle;
    Rational conformal_weight;
    long type = 0;
    std::string classification;
    long trunc_weight = 4;
    PuiseuxSeries character;
    IntegralSeries integral;
    std::map<long, Integer> dims;
    // t -> conformal weight of the nu-hat^t twisted sector
    std::map<long, Rational> sector_weights;
    std::vector<CtResult> pieces;
    double seconds = 0;
    std::size_t cache_hits = 0, cache_misses = 0;
};

// (1/N) sum_t C_t with exponents < trunc_weight - c/24.  Throws NotType0.
OrbifoldReport orbifold_character(const OrbifoldSource &src, long trunc_weight = 4, const CtOptions &opts = {});
inline OrbifoldReport orbifold_character(const LiftSpec &spec, long trunc_weight = 4)
{
    return orbifold_character(OrbifoldSource::from_lift(spec), trunc_weight);
}

// Coefficient of q^{k - c/24} for k = 0 .. below the truncation.
std::map<long, Integer> extract_dims(const PuiseuxSeries &ch, long c);

// All T(i,j), from T(0,t)|M with (0,t) M = (i,j).  Needs every w_t of order <= 2.
std::map<std::pair<long, long>, PuiseuxSeries> twisted_traces(const OrbifoldSource &src, const Rational &trunc);
// (1/N) sum_k e(-jk/N) T(i,k)
std::map<std::pair<long, long>, PuiseuxSeries> module_characters(const OrbifoldSource &src, long trunc_weight = 4);

} // namespace orbq
