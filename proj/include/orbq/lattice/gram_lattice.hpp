#pragma once

#include <string>
#include <vector>

#include "orbq/lattice/matrix.hpp"

namespace orbq
{

// Positive definite quadratic space given by its Gram matrix.
class GramLattice
{
public:
    GramLattice() = default;
    // Throws NotSymmetric / NotPositiveDefinite.
    explicit GramLattice(RatMatrix gram);
    static GramLattice from_integers(const std::vector<std::vector<long>> &rows);
    // "d" on the first line, then d rows of integers or p/q.
    static GramLattice parse(const std::string &text);

    std::size_t dim() const { return gram_.rows(); }
    const RatMatrix &gram() const { return gram_; }
    bool is_integral() const;
    bool is_even() const;
    Rational det() const;
    IntMatrix integer_gram() const;

    Rational inner(const std::vector<Rational> &x, const std::vector<Rational> &y) const;
    Rational norm(const std::vector<Rational> &x) const { return inner(x, x); }

    std::string to_string() const;
    friend bool operator==(const GramLattice &a, const GramLattice &b) { return a.gram_ == b.gram_; }

private:
    RatMatrix gram_;
};

GramLattice dual(const GramLattice &L);
GramLattice direct_sum(const GramLattice &a, const GramLattice &b);
// Gram of the lattice with basis rows U (coordinates in L).
GramLattice transform(const GramLattice &L, const IntMatrix &U);

// Rows of `basis` are coordinates in the parent basis.
struct Sublattice
{
    GramLattice parent;
    IntMatrix basis;
    GramLattice lattice;

    static Sublattice make(const GramLattice &parent, const IntMatrix &basis);
    static Sublattice whole(const GramLattice &parent);
    std::size_t rank() const { return basis.rows(); }
    // Parent coordinates of sum_i x_i b_i.
    std::vector<Rational> to_parent(const std::vector<Rational> &x) const;
};

// Homomorphism to Q/Z given by its values on a basis.
struct PhaseCharacter
{
    std::vector<Rational> values;

    static PhaseCharacter make(std::vector<Rational> values);
    static PhaseCharacter trivial(std::size_t rank) { return make(std::vector<Rational>(rank)); }
    long order() const;
    bool is_trivial() const { return order() == 1; }
    Rational operator()(const std::vector<Integer> &x) const;
};

struct ShiftedCoset
{
    GramLattice lattice;
    std::vector<Rational> shift;
};

Sublattice fixed_sublattice(const GramLattice &L, const IntMatrix &A);
// Throws NotAnIsometry unless A is invertible over Z and A^T G A = G.
void check_isometry(const GramLattice &L, const IntMatrix &A);
Sublattice kernel_of_character(const Sublattice &K, const PhaseCharacter &u);

long level_of(const GramLattice &L);
inline long level_of(const Sublattice &K) { return level_of(K.lattice); }

} // namespace orbq
