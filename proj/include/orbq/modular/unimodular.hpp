#pragma once

#include <string>

namespace orbq
{

struct UnimodularMatrix
{
    long a = 1, b = 0, c = 0, d = 1;

    // Throws std::invalid_argument unless ad - bc = 1.
    static UnimodularMatrix make(long a, long b, long c, long d);
    static UnimodularMatrix identity() { return {}; }
    static UnimodularMatrix S() { return {0, -1, 1, 0}; }
    static UnimodularMatrix T(long k = 1) { return {1, k, 0, 1}; }

    UnimodularMatrix inverse() const { return {d, -b, -c, a}; }
    UnimodularMatrix negated() const { return {-a, -b, -c, -d}; }
    // Representative of +-M with c > 0, or c = 0 and d > 0.
    UnimodularMatrix normalized() const;
    bool in_gamma0(long m) const { return c % m == 0; }
    std::string to_string() const;

    friend UnimodularMatrix operator*(const UnimodularMatrix &x, const UnimodularMatrix &y)
    {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    friend bool operator==(const UnimodularMatrix &, const UnimodularMatrix &) = default;
};

} // namespace orbq
