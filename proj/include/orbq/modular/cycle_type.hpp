#pragma once

#include <map>
#include <string>
#include <string_view>

#include "orbq/qseries/arith.hpp"

namespace orbq
{

// Formal product prod t^{b_t}, i.e. the characteristic polynomial
// prod (x^t - 1)^{b_t}.  Zero exponents are never stored.
class CycleType
{
public:
    CycleType() = default;
    explicit CycleType(const std::map<long, long> &exponents);

    // Accepts "1^-24 2^24", "1^{-24}2^{24}", "[1^{48}2^{-24}]" and "1".
    static CycleType parse(std::string_view text);

    const std::map<long, long> &exponents() const { return b_; }
    long exponent(long t) const;
    bool empty() const { return b_.empty(); }

    // lcm of the t with b_t != 0 (1 for the empty product).
    long order() const;
    long rank() const;
    long degree() const;
    // Weight of the eta quotient, sum b_t / 2.
    Rational weight() const { return make_rational(rank(), 2); }
    // prod t^{b_t}
    Rational discriminant() const;
    // (1/24) sum t b_t: leading exponent of the eta quotient.
    Rational leading_exponent() const { return make_rational(degree(), 24); }

    // "1^-24 2^24"
    std::string to_string() const;
    // "1^{-24}2^{24}"
    std::string to_latex() const;

    CycleType &operator+=(const CycleType &o);
    CycleType operator-() const;
    friend CycleType operator+(CycleType a, const CycleType &b) { return a += b; }
    friend CycleType operator-(const CycleType &a, const CycleType &b) { return a + (-b); }
    friend bool operator==(const CycleType &, const CycleType &) = default;
    friend bool operator<(const CycleType &a, const CycleType &b) { return a.b_ < b.b_; }

private:
    std::map<long, long> b_;
};

// prod_t (t/(t,k))^{(t,k) b_t}
CycleType cycle_power(const CycleType &c, long k);

} // namespace orbq
