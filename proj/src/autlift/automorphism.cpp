#include "orbq/autlift/automorphism.hpp"

#include "orbq/error.hpp"

namespace orbq
{

LatticeAutomorphism::LatticeAutomorphism(GramLattice L, IntMatrix A, long max_order)
    : L_(std::move(L)), A_(std::move(A))
{
    check_isometry(L_, A_);
    IntMatrix I = IntMatrix::identity(L_.dim());
    IntMatrix P = A_;
    n_ = 1;
    while (!(P == I)) {
        if (++n_ > max_order)
            throw Unsupported("automorphism order exceeds " + std::to_string(max_order));
        P = P * A_;
    }
}

IntMatrix LatticeAutomorphism::power(long k) const
{
    k = mod(k, n_);
    IntMatrix out = IntMatrix::identity(dim()), base = A_;
    while (k > 0) {
        if (k & 1)
            out = out * base;
        k >>= 1;
        if (k)
            base = base * base;
    }
    return out;
}

std::vector<Rational> LatticeAutomorphism::apply(long k, const std::vector<Rational> &x) const
{
    return to_rational(power(k)).apply(x);
}

CycleType cycle_type_of(const LatticeAutomorphism &nu, long k)
{
    long n = nu.order();
    long m = n / gcd(n, mod(k, n) == 0 ? n : mod(k, n));
    IntMatrix B = nu.power(k);
    long d = static_cast<long>(nu.dim());
    std::map<long, long> nullity;
    IntMatrix P = IntMatrix::identity(nu.dim());
    IntMatrix I = IntMatrix::identity(nu.dim());
    for (long s = 1; s <= m; ++s) {
        P = P * B;
        if (m % s == 0)
            nullity[s] = d - rank(to_rational(P - I));
    }
    // multiplicity of Phi_t in the characteristic polynomial
    std::map<long, long> phi_mult;
    for (long t : divisors(m)) {
        long s = 0;
        for (long e : divisors(t))
            s += mobius(t / e) * nullity[e];
        if (s % euler_phi(t) != 0)
            throw std::logic_error("inconsistent eigenspace dimensions");
        if (s)
            phi_mult[t] = s / euler_phi(t);
    }
    // Phi_t = prod_{e | t} (x^e - 1)^{mu(t/e)}
    std::map<long, long> b;
    for (const auto &[t, mult] : phi_mult)
        for (long e : divisors(t))
            b[e] += mobius(t / e) * mult;
    CycleType c(b);
    if (c.degree() != d)
        throw std::logic_error("cycle type degree mismatch");
    return c;
}

} // namespace orbq
