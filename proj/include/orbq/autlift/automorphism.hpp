#pragma once

#include "orbq/lattice/gram_lattice.hpp"
#include "orbq/modular/cycle_type.hpp"

namespace orbq
{

// nu acting on coordinate columns: x -> A x, with A^T G A = G.
class LatticeAutomorphism
{
public:
    // Throws NotAnIsometry; Unsupported if the order exceeds max_order.
    LatticeAutomorphism(GramLattice L, IntMatrix A, long max_order = 100000);

    const GramLattice &lattice() const { return L_; }
    const IntMatrix &matrix() const { return A_; }
    long order() const { return n_; }
    std::size_t dim() const { return L_.dim(); }

    // A^(k mod n)
    IntMatrix power(long k) const;
    std::vector<Rational> apply(long k, const std::vector<Rational> &x) const;

private:
    GramLattice L_;
    IntMatrix A_;
    long n_ = 1;
};

// Cycle type of A^k from the nullities of A^s - I.
CycleType cycle_type_of(const LatticeAutomorphism &A, long k = 1);

} // namespace orbq
