#include "orbq/qseries/arith.hpp"

#include <cctype>
#include <cstdlib>
#include <stdexcept>
#include <limits>

#include "orbq/error.hpp"

namespace orbq
{

Rational make_rational(long num, long den)
{
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Rational make_rational(const Integer &num, const Integer &den)
{
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Rational parse_rational(std::string_view text)
{
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.pop_back();
    std::size_t start = 0;
    while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start])))
        ++start;
    s = s.substr(start);
    if (s.empty())
        throw ParseError("empty rational");
    if (s[0] == '+')
        s = s.substr(1);
    auto valid = [](const std::string &part) {
        if (part.empty())
            return false;
        std::size_t i = (part[0] == '-') ? 1 : 0;
        if (i == part.size())
            return false;
        for (; i < part.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(part[i])))
                return false;
        return true;
    };
    auto slash = s.find('/');
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid(num) || !valid(den) || den[0] == '-')
        throw ParseError("malformed rational '" + s + "'");
    Integer n(num), d(den);
    if (d == 0)
        throw ParseError("zero denominator in '" + s + "'");
    return make_rational(n, d);
}

std::string to_string(const Rational &r)
{
    return r.get_str();
}

std::string to_string(const Integer &z)
{
    return z.get_str();
}

Integer floor(const Rational &r)
{
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

Integer ceil(const Rational &r)
{
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

Rational frac(const Rational &r)
{
    Rational f = r - Rational(floor(r));
    f.canonicalize();
    return f;
}

bool is_integer(const Rational &r)
{
    return r.get_den() == 1;
}

long to_long(const Integer &z)
{
    if (!z.fits_slong_p())
        throw std::overflow_error("integer does not fit in a machine word: " + z.get_str());
    return z.get_si();
}

long gcd(long a, long b)
{
    a = std::labs(a);
    b = std::labs(b);
    while (b != 0) {
        long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

long lcm(long a, long b)
{
    if (a == 0 || b == 0)
        return 0;
    return std::labs(a / gcd(a, b) * b);
}

std::tuple<long, long, long> ext_gcd(long a, long b)
{
    long old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        long q = old_r / r;
        long tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    if (old_r < 0)
        return {-old_r, -old_s, -old_t};
    return {old_r, old_s, old_t};
}

long mod(long a, long m)
{
    long r = a % m;
    return r < 0 ? r + m : r;
}

long mod_inverse(long a, long m)
{
    if (m == 1)
        return 0;
    auto [g, x, y] = ext_gcd(mod(a, m), m);
    (void)y;
    if (g != 1)
        throw NonCoprime("no inverse of " + std::to_string(a) + " mod " + std::to_string(m));
    return mod(x, m);
}

std::vector<std::pair<long, int>> factorize(long n)
{
    std::vector<std::pair<long, int>> out;
    n = std::labs(n);
    for (long p = 2; p * p <= n; ++p) {
        if (n % p != 0)
            continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (n > 1)
        out.emplace_back(n, 1);
    return out;
}

std::vector<long> divisors(long n)
{
    std::vector<long> small, large;
    for (long d = 1; d * d <= n; ++d) {
        if (n % d != 0)
            continue;
        small.push_back(d);
        if (d * d != n)
            large.push_back(n / d);
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

int mobius(long n)
{
    int mu = 1;
    for (auto [p, e] : factorize(n)) {
        (void)p;
        if (e > 1)
            return 0;
        mu = -mu;
    }
    return mu;
}

long euler_phi(long n)
{
    long phi = n;
    for (auto [p, e] : factorize(n)) {
        (void)e;
        phi = phi / p * (p - 1);
    }
    return phi;
}

long psi_index(long m)
{
    long psi = m;
    for (auto [p, e] : factorize(m)) {
        (void)e;
        psi = psi / p * (p + 1);
    }
    return psi;
}

namespace
{

// Jacobi symbol (a / n) for odd positive n.
int jacobi(long a, long n)
{
    a = mod(a, n);
    int result = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            long r = n % 8;
            if (r == 3 || r == 5)
                result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3)
            result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

} // namespace

int kronecker(long a, long n)
{
    if (n <= 0)
        throw std::invalid_argument("kronecker: n must be positive");
    int result = 1;
    while (n % 2 == 0) {
        n /= 2;
        if (a % 2 == 0)
            return 0;
        long r = mod(a, 8);
        if (r == 3 || r == 5)
            result = -result;
    }
    return result * jacobi(a, n);
}

long squarefree_label(const Rational &r)
{
    if (r == 0)
        throw std::invalid_argument("squarefree_label of zero");
    Integer prod = r.get_num() * r.get_den();
    long sign = prod < 0 ? -1 : 1;
    Integer a = abs(prod);
    long label = 1;
    // Primes here always divide a small level, so trial division is adequate.
    for (long p = 2; a > 1; ++p) {
        if (Integer(p) * p > a) {
            label *= to_long(a);
            break;
        }
        int e = 0;
        while (mpz_divisible_ui_p(a.get_mpz_t(), static_cast<unsigned long>(p))) {
            a /= p;
            ++e;
        }
        if (e % 2 == 1)
            label *= p;
    }
    return sign * label;
}

} // namespace orbq
