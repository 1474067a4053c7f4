#include "orbq/modular/cycle_type.hpp"

#include <cctype>

#include "orbq/error.hpp"

namespace orbq
{

CycleType::CycleType(const std::map<long, long> &exponents)
{
    for (auto [t, b] : exponents) {
        if (t <= 0)
            throw std::invalid_argument("cycle lengths must be positive");
        if (b != 0)
            b_[t] = b;
    }
}

CycleType CycleType::parse(std::string_view text)
{
    std::map<long, long> out;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == '[' ||
                                   text[i] == ']' || text[i] == ','))
            ++i;
    };
    auto number = [&](bool allow_sign) {
        std::size_t s = i;
        if (allow_sign && i < text.size() && (text[i] == '-' || text[i] == '+'))
            ++i;
        std::size_t digits = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
            ++i;
        if (digits == i)
            throw ParseError("bad cycle type '" + std::string(text) + "' at offset " + std::to_string(s));
        return std::stol(std::string(text.substr(s, i - s)));
    };
    skip();
    while (i < text.size()) {
        long t = number(false);
        long b = 1;
        if (i < text.size() && text[i] == '^') {
            ++i;
            bool brace = i < text.size() && text[i] == '{';
            if (brace)
                ++i;
            b = number(true);
            if (brace) {
                if (i >= text.size() || text[i] != '}')
                    throw ParseError("unbalanced brace in cycle type '" + std::string(text) + "'");
                ++i;
            }
        }
        out[t] += b;
        skip();
    }
    return CycleType(out);
}

long CycleType::exponent(long t) const
{
    auto it = b_.find(t);
    return it == b_.end() ? 0 : it->second;
}

long CycleType::order() const
{
    long n = 1;
    for (auto [t, b] : b_)
        n = lcm(n, t);
    return n;
}

long CycleType::rank() const
{
    long s = 0;
    for (auto [t, b] : b_)
        s += b;
    return s;
}

long CycleType::degree() const
{
    long s = 0;
    for (auto [t, b] : b_)
        s += t * b;
    return s;
}

Rational CycleType::discriminant() const
{
    Integer num = 1, den = 1;
    for (auto [t, b] : b_) {
        Integer p;
        mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(t), static_cast<unsigned long>(std::labs(b)));
        if (b > 0)
            num *= p;
        else
            den *= p;
    }
    return make_rational(num, den);
}

std::string CycleType::to_string() const
{
    if (b_.empty())
        return "1^0";
    std::string s;
    for (auto [t, b] : b_) {
        if (!s.empty())
            s += ' ';
        s += std::to_string(t) + "^" + std::to_string(b);
    }
    return s;
}

std::string CycleType::to_latex() const
{
    std::string s;
    for (auto [t, b] : b_)
        s += std::to_string(t) + "^{" + std::to_string(b) + "}";
    return s.empty() ? "1" : s;
}

CycleType &CycleType::operator+=(const CycleType &o)
{
    for (auto [t, b] : o.b_) {
        long v = (b_[t] += b);
        if (v == 0)
            b_.erase(t);
    }
    return *this;
}

CycleType CycleType::operator-() const
{
    CycleType out = *this;
    for (auto &[t, b] : out.b_)
        b = -b;
    return out;
}

CycleType cycle_power(const CycleType &c, long k)
{
    if (k <= 0)
        throw std::invalid_argument("cycle_power needs k >= 1");
    std::map<long, long> out;
    for (auto [t, b] : c.exponents()) {
        long g = gcd(t, k);
        out[t / g] += g * b;
    }
    return CycleType(out);
}

} // namespace orbq
