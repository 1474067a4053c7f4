#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "orbq/lattice/gram_lattice.hpp"

namespace orbq
{

// counts[norm][k] = number of vectors of that norm on which the phase is k/m.
struct NormCounts
{
    long phase_order = 1;
    std::map<Rational, std::vector<std::uint64_t>> counts;

    std::uint64_t total(const Rational &norm) const;
    std::map<Rational, std::uint64_t> totals() const;
    friend bool operator==(const NormCounts &a, const NormCounts &b)
    {
        return a.phase_order == b.phase_order && a.counts == b.counts;
    }
};

struct EnumerateOptions
{
    // coset L + shift, shift in lattice coordinates
    std::vector<Rational> shift;
    std::optional<PhaseCharacter> phase;
    // 0 selects the process default
    unsigned threads = 0;
};

void set_default_threads(unsigned n);
unsigned default_threads();

// All x (plus shift) with norm <= bound, keyed by exact norm.
NormCounts enumerate_by_norm(const GramLattice &L, const Rational &bound, const EnumerateOptions &opts = {});
inline NormCounts enumerate_by_norm(const Sublattice &K, const Rational &bound, const EnumerateOptions &opts = {})
{
    return enumerate_by_norm(K.lattice, bound, opts);
}

// Streams every vector (integer coordinates, before the shift) with its norm.
void enumerate_vectors(const GramLattice &L, const Rational &bound, const std::vector<Rational> &shift,
                       const std::function<void(const std::vector<long> &, const Rational &)> &visit);

} // namespace orbq
