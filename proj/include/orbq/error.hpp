#pragma once

#include <stdexcept>
#include <string>

namespace orbq
{

// Every failure raised by the library derives from Error; the kind() string is
// stable and used by the CLI to pick an exit code.
class Error : public std::runtime_error
{
public:
    Error(std::string kind, const std::string &what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind))
    {
    }

    const std::string &kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define ORBQ_DEFINE_ERROR(Name)                                                                    \
    class Name : public Error                                                                      \
    {                                                                                              \
    public:                                                                                        \
        explicit Name(const std::string &what) : Error(#Name, what) {}                             \
    };

// qseries
ORBQ_DEFINE_ERROR(EmptySeries)
ORBQ_DEFINE_ERROR(NonIntegralExponent)
ORBQ_DEFINE_ERROR(NonRationalCoefficient)
ORBQ_DEFINE_ERROR(NonIntegerCoefficient)
// modular
ORBQ_DEFINE_ERROR(NonCoprime)
ORBQ_DEFINE_ERROR(BadDivisor)
ORBQ_DEFINE_ERROR(NotInSpace)
ORBQ_DEFINE_ERROR(InsufficientPrecision)
ORBQ_DEFINE_ERROR(BasisNotFound)
// lattice
ORBQ_DEFINE_ERROR(NotAnIsometry)
ORBQ_DEFINE_ERROR(NotEven)
ORBQ_DEFINE_ERROR(DivergentTail)
ORBQ_DEFINE_ERROR(NotPositiveDefinite)
ORBQ_DEFINE_ERROR(NotSymmetric)
// autlift
ORBQ_DEFINE_ERROR(NonIntegralType)
ORBQ_DEFINE_ERROR(SearchExhausted)
// orbifold
ORBQ_DEFINE_ERROR(MismatchedForms)
ORBQ_DEFINE_ERROR(NonRational)
ORBQ_DEFINE_ERROR(NotType0)
ORBQ_DEFINE_ERROR(BadCentralCharge)
ORBQ_DEFINE_ERROR(NeedsCache)
ORBQ_DEFINE_ERROR(Unsupported)
// cli
ORBQ_DEFINE_ERROR(ParseError)
ORBQ_DEFINE_ERROR(NetworkError)
ORBQ_DEFINE_ERROR(ValidationFailed)

#undef ORBQ_DEFINE_ERROR

} // namespace orbq
