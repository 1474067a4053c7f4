#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orbq/modular/cycle_type.hpp"
#include "orbq/qseries/puiseux.hpp"

namespace orbq
{

struct LigozatResult
{
    Rational weight;
    // Signed squarefree label of the quadratic character; 1 is trivial.
    long character = 1;
    // Keyed by the cusp denominator d | N; d = N is infinity, d = 1 is 0.
    std::map<long, Rational> cusp_orders;
    bool congruences = false;
    bool holomorphic = false;
    bool valid = false;
};

LigozatResult ligozat_validate(const CycleType &c, long N);

// eta quotient times E4^e4_power; level-1 spaces use E4^a Delta^b.
struct BasisForm
{
    CycleType eta;
    long e4_power = 0;

    BasisForm() = default;
    BasisForm(CycleType c, long e4 = 0) : eta(std::move(c)), e4_power(e4) {}
    PuiseuxSeries expand(const Rational &trunc) const;
    std::string to_string() const;
    friend bool operator==(const BasisForm &, const BasisForm &) = default;
};

struct FormSpace
{
    long level = 1;
    long weight = 0;
    long character = 1;
    std::vector<BasisForm> basis;
};

// 1 + 240 sum sigma_3(n) q^n
PuiseuxSeries eisenstein_e4(const Rational &trunc);

// B = floor(k psi(N) / 12) + 1; forms are compared on q^0 .. q^B.
long sturm_bound(long N, long k);

// dim M_k(Gamma_0(N)) for even k >= 0 and trivial character; nullopt otherwise.
std::optional<long> dimension_formula(long N, long k, long character);

struct EtaTableRow
{
    long level;
    long weight;
    long character;
    std::vector<CycleType> basis;
};

// Rows from data/eta_bases.txt (or the given path).
const std::vector<EtaTableRow> &eta_basis_table();
std::vector<EtaTableRow> load_eta_table(const std::string &path);

// Rank of the expansions of the quotients on q^0 .. q^B.
long expansion_rank(const std::vector<BasisForm> &forms, long N, long k);

std::vector<Rational> fit_in_basis(const PuiseuxSeries &f, const FormSpace &space);

// Table row if one matches; otherwise a breadth-first search over exponent
// vectors with |b_t| <= bound.  Needs a known dimension for the search.
FormSpace basis_for_space(long N, long k, long character, long bound = 60);

// Incremental variant for fitting: grows an independent set of valid quotients
// until f lies in its span (checked through the Sturm bound).
std::pair<FormSpace, std::vector<Rational>> fit_by_search(const PuiseuxSeries &f, long N, long k, long character,
                                                         long bound = 60);

} // namespace orbq
