#include "orbq/modular/unimodular.hpp"

#include <stdexcept>

namespace orbq
{

UnimodularMatrix UnimodularMatrix::make(long a, long b, long c, long d)
{
    if (a * d - b * c != 1)
        throw std::invalid_argument("matrix does not have determinant 1");
    return {a, b, c, d};
}

UnimodularMatrix UnimodularMatrix::normalized() const
{
    if (c < 0 || (c == 0 && d < 0))
        return negated();
    return *this;
}

std::string UnimodularMatrix::to_string() const
{
    return "(" + std::to_string(a) + " " + std::to_string(b) + "; " + std::to_string(c) + " " +
           std::to_string(d) + ")";
}

} // namespace orbq
