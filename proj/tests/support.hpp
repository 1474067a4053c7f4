#pragma once

#include <cmath>
#include <map>
#include <random>

#include "orbq/lattice/fixtures.hpp"
#include "orbq/lattice/gram_lattice.hpp"

namespace orbq::testing
{

inline Rational R(long a, long b = 1)
{
    return make_rational(a, b);
}

// Product of random elementary operations.
inline IntMatrix random_unimodular(std::size_t n, std::mt19937 &rng, int steps = 12)
{
    IntMatrix U = IntMatrix::identity(n);
    if (n < 2)
        return U;
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_int_distribution<int> coef(-2, 2);
    for (int s = 0; s < steps; ++s) {
        std::size_t i = pick(rng), j = pick(rng);
        if (i == j)
            continue;
        int c = coef(rng);
        for (std::size_t k = 0; k < n; ++k)
            U(i, k) += c * U(j, k);
    }
    return U;
}

inline GramLattice random_even_lattice(std::size_t max_dim, std::mt19937 &rng)
{
    std::uniform_int_distribution<int> kind(0, 4);
    std::uniform_int_distribution<std::size_t> dim(1, max_dim);
    GramLattice L;
    switch (kind(rng)) {
    case 0:
        L = lattice_an(dim(rng));
        break;
    case 1:
        L = max_dim >= 4 ? lattice_dn(std::max<std::size_t>(4, dim(rng))) : lattice_a1();
        break;
    case 2:
        L = lattice_scaled_identity(dim(rng), 2 * std::uniform_int_distribution<long>(1, 3)(rng));
        break;
    case 3: {
        std::size_t a = std::max<std::size_t>(1, dim(rng) / 2);
        std::size_t n = dim(rng);
        L = n > a ? direct_sum(lattice_an(a), lattice_scaled_identity(n - a, 4)) : lattice_an(a);
        break;
    }
    default: {
        // 2 B B^T for a random nonsingular B
        std::size_t n = dim(rng);
        std::uniform_int_distribution<int> c(-1, 1);
        for (;;) {
            IntMatrix B(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    B(i, j) = (i == j) ? 1 + (c(rng) + 1) / 2 : c(rng) * (j < i);
            RatMatrix g = to_rational(B * B.transpose());
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    g(i, j) *= 2;
            if (determinant(g) != 0) {
                L = GramLattice(g);
                break;
            }
        }
    }
    }
    return transform(L, random_unimodular(L.dim(), rng));
}

// Brute force over a coordinate box; the box must cover the ellipsoid.
inline std::map<Rational, std::uint64_t> naive_counts(const GramLattice &L, const Rational &bound, long box,
                                                      const std::vector<Rational> &shift = {})
{
    std::size_t d = L.dim();
    std::map<Rational, std::uint64_t> out;
    std::vector<long> x(d, -box);
    std::vector<Rational> v(d);
    for (;;) {
        for (std::size_t i = 0; i < d; ++i)
            v[i] = Rational(x[i]) + (shift.empty() ? Rational(0) : shift[i]);
        Rational n = L.norm(v);
        if (n <= bound)
            ++out[n];
        std::size_t k = 0;
        while (k < d && x[k] == box)
            x[k++] = -box;
        if (k == d)
            break;
        ++x[k];
    }
    return out;
}

} // namespace orbq::testing

namespace orbq::testing
{

// |x_i| <= sqrt(bound * (G^-1)_ii) on the ellipsoid.
inline long box_for(const GramLattice &L, const Rational &bound, const std::vector<Rational> &shift = {})
{
    RatMatrix inv = inverse(L.gram());
    double m = 0;
    for (std::size_t i = 0; i < L.dim(); ++i)
        m = std::max(m, inv(i, i).get_d());
    long extra = 1;
    for (const auto &s : shift)
        extra = std::max<long>(extra, 1 + static_cast<long>(std::fabs(s.get_d())));
    return static_cast<long>(std::sqrt(bound.get_d() * m)) + extra;
}

} // namespace orbq::testing

#include "orbq/autlift/automorphism.hpp"

namespace orbq::testing
{

// Reflection in a norm 2 vector r (coordinates): x -> x - <x, r> r.
inline IntMatrix reflection(const GramLattice &L, const std::vector<long> &r)
{
    std::size_t n = L.dim();
    std::vector<Rational> rv(r.begin(), r.end());
    std::vector<Rational> Gr = L.gram().apply(rv);
    IntMatrix A = IntMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            A(i, j) -= Integer(r[i]) * Gr[j].get_num();
    return A;
}

// A random word in the simple reflections of a root lattice.
inline IntMatrix random_weyl_word(const GramLattice &L, std::mt19937 &rng, int max_len = 12)
{
    std::uniform_int_distribution<std::size_t> pick(0, L.dim() - 1);
    std::uniform_int_distribution<int> len(1, max_len);
    IntMatrix A = IntMatrix::identity(L.dim());
    for (int s = len(rng); s > 0; --s)
        A = A * root_reflection(L, pick(rng));
    return A;
}

// The same isometry after the basis change b' = U b.
struct Conjugated
{
    GramLattice lattice;
    IntMatrix matrix;
};

inline Conjugated conjugate(const GramLattice &L, const IntMatrix &A, const IntMatrix &U)
{
    RatMatrix u = to_rational(U);
    RatMatrix a = inverse(u.transpose()) * to_rational(A) * u.transpose();
    return {transform(L, U), to_integer(a)};
}

} // namespace orbq::testing

#include <functional>
#include <stdexcept>

#include "orbq/lattice/enumerate.hpp"

namespace orbq::testing
{

// Four mutually orthogonal roots of E8 whose half sum lies in E8.
inline std::vector<std::vector<long>> orthogonal_frame(const GramLattice &e8)
{
    std::vector<std::vector<long>> roots;
    enumerate_vectors(e8, R(2), {}, [&](const std::vector<long> &x, const Rational &n) {
        if (n == 2)
            roots.push_back(x);
    });
    auto ip = [&](const std::vector<long> &a, const std::vector<long> &b) {
        return e8.inner({a.begin(), a.end()}, {b.begin(), b.end()});
    };
    std::vector<std::vector<long>> pick;
    std::function<bool(std::size_t)> rec = [&](std::size_t from) {
        if (pick.size() == 4) {
            for (std::size_t i = 0; i < 8; ++i) {
                long s = 0;
                for (const auto &r : pick)
                    s += r[i];
                if (s % 2 != 0)
                    return false;
            }
            return true;
        }
        for (std::size_t i = from; i < roots.size(); ++i) {
            bool ok = true;
            for (const auto &r : pick)
                ok = ok && ip(r, roots[i]) == 0;
            if (!ok)
                continue;
            pick.push_back(roots[i]);
            if (rec(i + 1))
                return true;
            pick.pop_back();
        }
        return false;
    };
    if (!rec(0))
        throw std::runtime_error("no orthogonal frame");
    return pick;
}

} // namespace orbq::testing
