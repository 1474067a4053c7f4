#pragma once

#include <complex>
#include <string>
#include <vector>

#include "orbq/qseries/arith.hpp"

namespace orbq
{

// Element of Q(zeta_M) stored in the power basis 1, z, ..., z^{phi(M)-1} with
// z = exp(2 pi i / M).  The order is chosen per value; binary operations embed
// both operands into Q(zeta_lcm).  Rational values always carry order 1.
class Cyclotomic
{
public:
    Cyclotomic();
    Cyclotomic(long v);
    Cyclotomic(const Rational &v);
    Cyclotomic(const Integer &v);

    // zeta_M^k
    static Cyclotomic zeta(long M, long k);
    // e(r) = exp(2 pi i r)
    static Cyclotomic root_of_unity(const Rational &r);
    // Positive square root of a positive rational, written with Gauss sums.
    static Cyclotomic sqrt(const Rational &r);

    long order() const { return order_; }
    const std::vector<Rational> &coeffs() const { return c_; }

    bool is_zero() const;
    bool is_rational() const { return order_ == 1; }
    // Throws NonRationalCoefficient unless is_rational().
    const Rational &to_rational() const;

    Cyclotomic embed(long M) const;
    Cyclotomic inverse() const;
    Cyclotomic conj() const;
    std::complex<double> to_complex() const;
    std::string to_string() const;

    Cyclotomic &operator+=(const Cyclotomic &o);
    Cyclotomic &operator-=(const Cyclotomic &o);
    Cyclotomic &operator*=(const Cyclotomic &o);
    Cyclotomic &operator*=(const Rational &o);
    Cyclotomic operator-() const;

    friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic &b) { return a += b; }
    friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic &b) { return a -= b; }
    friend Cyclotomic operator*(const Cyclotomic &a, const Cyclotomic &b);
    friend Cyclotomic operator/(const Cyclotomic &a, const Cyclotomic &b) { return a * b.inverse(); }
    friend bool operator==(const Cyclotomic &a, const Cyclotomic &b);
    friend bool operator!=(const Cyclotomic &a, const Cyclotomic &b) { return !(a == b); }

private:
    Cyclotomic(long order, std::vector<Rational> c);
    void shrink();

    long order_ = 1;
    std::vector<Rational> c_;
};

// Coefficients of the M-th cyclotomic polynomial, constant term first.
std::vector<long> cyclotomic_polynomial(long M);

} // namespace orbq
