#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace orbq
{

using Integer = mpz_class;
using Rational = mpq_class;

Rational make_rational(long num, long den = 1);
Rational make_rational(const Integer &num, const Integer &den);

// Accepts "p", "-p", "p/q".
Rational parse_rational(std::string_view text);
std::string to_string(const Rational &r);
std::string to_string(const Integer &z);

Integer floor(const Rational &r);
Integer ceil(const Rational &r);
// Representative of r mod 1 in [0, 1).
Rational frac(const Rational &r);
bool is_integer(const Rational &r);

long to_long(const Integer &z);

// Small-integer number theory.
long gcd(long a, long b);
long lcm(long a, long b);
// Returns (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0.
std::tuple<long, long, long> ext_gcd(long a, long b);
// Least nonnegative x with a*x = 1 mod m; m >= 1.
long mod_inverse(long a, long m);
long mod(long a, long m);

std::vector<std::pair<long, int>> factorize(long n);
std::vector<long> divisors(long n);
int mobius(long n);
long euler_phi(long n);
// Index of Gamma_0(m) in SL2(Z): m * prod_{p | m} (1 + 1/p).
long psi_index(long m);
// Kronecker symbol (a / n), n >= 1.
int kronecker(long a, long n);
// Signed squarefree kernel of a nonzero rational (num * den reduced).
long squarefree_label(const Rational &r);

} // namespace orbq
