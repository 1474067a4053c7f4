#pragma once

#include <string>
#include <vector>

#include "orbq/lattice/gram_lattice.hpp"

namespace orbq
{

GramLattice lattice_a1();
GramLattice lattice_a2();
GramLattice lattice_d4();
GramLattice lattice_e8();
GramLattice lattice_leech();
// k * identity of size n
GramLattice lattice_scaled_identity(std::size_t n, long k);
// Cartan matrix of A_n / D_n (n >= 4)
GramLattice lattice_an(std::size_t n);
GramLattice lattice_dn(std::size_t n);

// Extended binary Golay code: 12 generators of length 24.
std::vector<std::vector<int>> golay_generators();
// Rows span sqrt(8) * Leech in Z^24 (LLL-reduced with respect to the Gram).
IntMatrix leech_basis();

// A1, A2, D4, E8, Leech, An, Dn, and sums like "E8^3" or "A2+A1".
GramLattice named_lattice(const std::string &name);

// Reflection in a norm-2 basis vector e_k: x -> x - <x, e_k> e_k.
IntMatrix root_reflection(const GramLattice &L, std::size_t k);
// Block-diagonal sum of automorphisms.
IntMatrix block_sum(const IntMatrix &a, const IntMatrix &b);

} // namespace orbq
