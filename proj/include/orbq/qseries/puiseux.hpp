#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orbq/qseries/cyclotomic.hpp"

namespace orbq
{

// Truncated series sum_e c_e q^e with exponents in (1/den) Z.  Coefficients at
// exponents >= trunc are unknown; trunc == nullopt means the series is exact.
// Storage is dense in steps of 1/den starting at start/den.
class PuiseuxSeries
{
public:
    using Trunc = std::optional<Rational>;

    PuiseuxSeries() = default;
    explicit PuiseuxSeries(Trunc trunc) : trunc_(std::move(trunc)) {}
    PuiseuxSeries(const std::map<Rational, Cyclotomic> &terms, Trunc trunc);

    static PuiseuxSeries constant(const Cyclotomic &c, Trunc trunc = std::nullopt);
    static PuiseuxSeries monomial(const Cyclotomic &c, const Rational &e, Trunc trunc = std::nullopt);
    // Series with integral exponents start, start+1, ...
    static PuiseuxSeries from_integers(long start, const std::vector<Integer> &coeffs, Trunc trunc);

    const Trunc &trunc() const { return trunc_; }
    long den() const { return den_; }
    bool empty() const { return c_.empty(); }
    // Lowest stored exponent; for an empty series the truncation point.
    Rational lead_exponent() const;
    Cyclotomic lead_coefficient() const;
    Cyclotomic coefficient(const Rational &e) const;
    std::map<Rational, Cyclotomic> terms() const;
    // Exponent of the highest stored term.
    std::optional<Rational> last_exponent() const;
    bool all_rational() const;

    PuiseuxSeries truncated(const Rational &t) const;
    // q^e -> q^{r e + s}
    PuiseuxSeries rescale(const Rational &r, const Rational &s) const;
    PuiseuxSeries shift(const Rational &s) const { return rescale(Rational(1), s); }
    PuiseuxSeries map_coefficients(const std::function<Cyclotomic(const Rational &, const Cyclotomic &)> &f) const;
    PuiseuxSeries pow(long e, Trunc limit = std::nullopt) const;

    PuiseuxSeries &operator+=(const PuiseuxSeries &o);
    PuiseuxSeries &operator-=(const PuiseuxSeries &o);
    PuiseuxSeries &operator*=(const Cyclotomic &c);
    PuiseuxSeries operator-() const;

    friend PuiseuxSeries operator+(PuiseuxSeries a, const PuiseuxSeries &b) { return a += b; }
    friend PuiseuxSeries operator-(PuiseuxSeries a, const PuiseuxSeries &b) { return a -= b; }
    friend PuiseuxSeries operator*(PuiseuxSeries a, const Cyclotomic &c) { return a *= c; }
    friend PuiseuxSeries operator*(const Cyclotomic &c, PuiseuxSeries a) { return a *= c; }
    friend bool operator==(const PuiseuxSeries &a, const PuiseuxSeries &b);

    std::string to_string(int max_terms = 12) const;

private:
    friend PuiseuxSeries series_mul(const PuiseuxSeries &, const PuiseuxSeries &);
    void normalize();
    PuiseuxSeries with_den(long den) const;

    long den_ = 1;
    long start_ = 0;
    std::vector<Cyclotomic> c_;
    Trunc trunc_;
};

PuiseuxSeries series_mul(const PuiseuxSeries &a, const PuiseuxSeries &b);
inline PuiseuxSeries operator*(const PuiseuxSeries &a, const PuiseuxSeries &b) { return series_mul(a, b); }

// Inverse up to the propagated truncation.  An exact input needs `limit`.
PuiseuxSeries series_invert(const PuiseuxSeries &a, PuiseuxSeries::Trunc limit = std::nullopt);
PuiseuxSeries series_rescale(const PuiseuxSeries &a, const Rational &r, const Rational &s);

struct IntegralSeries
{
    std::map<long, Integer> terms;
    PuiseuxSeries::Trunc trunc;

    Integer coefficient(long e) const
    {
        auto it = terms.find(e);
        return it == terms.end() ? Integer(0) : it->second;
    }
};

// Certifies integral exponents and integer coefficients.
IntegralSeries assert_integral(const PuiseuxSeries &a);

// Pi_{n>=1} (1 - q^n)^e with integral exponents < limit, by the
// J.C.P. Miller power recurrence.
std::vector<Integer> euler_product_power(long e, long limit);

} // namespace orbq
