#include "orbq/qseries/cyclotomic.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

#include "orbq/error.hpp"

namespace orbq
{

namespace
{

struct Context
{
    long M;
    long phi;
    // red[k] = sparse power-basis coordinates of zeta^k, 0 <= k < M
    std::vector<std::vector<std::pair<int, long>>> red;
};

std::vector<long> poly_mul_binomial(const std::vector<long> &p, long d)
{
    // p * (x^d - 1)
    std::vector<long> out(p.size() + d, 0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        out[i + d] += p[i];
        out[i] -= p[i];
    }
    return out;
}

std::vector<long> poly_div_binomial(const std::vector<long> &p, long d)
{
    // exact quotient p / (x^d - 1)
    std::vector<long> rem = p;
    std::vector<long> q(p.size() - d, 0);
    for (long i = static_cast<long>(p.size()) - 1; i >= d; --i) {
        long c = rem[i];
        q[i - d] = c;
        rem[i] = 0;
        rem[i - d] += c;
    }
    return q;
}

std::shared_ptr<const Context> context(long M)
{
    static std::mutex mu;
    static std::map<long, std::shared_ptr<const Context>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(M);
    if (it != cache.end())
        return it->second;

    auto ctx = std::make_shared<Context>();
    ctx->M = M;
    std::vector<long> phi_poly = cyclotomic_polynomial(M);
    long phi = static_cast<long>(phi_poly.size()) - 1;
    ctx->phi = phi;
    ctx->red.resize(M);
    std::vector<long> v(phi, 0);
    for (long k = 0; k < M; ++k) {
        if (k < phi) {
            std::fill(v.begin(), v.end(), 0);
            v[k] = 1;
        } else {
            long top = v[phi - 1];
            for (long i = phi - 1; i > 0; --i)
                v[i] = v[i - 1];
            v[0] = 0;
            for (long i = 0; i < phi; ++i)
                v[i] -= top * phi_poly[i];
        }
        for (long i = 0; i < phi; ++i)
            if (v[i] != 0)
                ctx->red[k].emplace_back(static_cast<int>(i), v[i]);
    }
    cache.emplace(M, ctx);
    return ctx;
}

} // namespace

std::vector<long> cyclotomic_polynomial(long M)
{
    std::vector<long> num{1}, den{1};
    for (long d : divisors(M)) {
        int mu = mobius(M / d);
        if (mu == 1)
            num = poly_mul_binomial(num, d);
        else if (mu == -1)
            den = poly_mul_binomial(den, d);
    }
    // den is a product of binomials; divide them out one at a time
    for (long d : divisors(M))
        if (mobius(M / d) == -1)
            num = poly_div_binomial(num, d);
    return num;
}

Cyclotomic::Cyclotomic() : order_(1), c_{Rational(0)} {}
Cyclotomic::Cyclotomic(long v) : order_(1), c_{Rational(v)} {}
Cyclotomic::Cyclotomic(const Rational &v) : order_(1), c_{v} {}
Cyclotomic::Cyclotomic(const Integer &v) : order_(1), c_{Rational(v)} {}

Cyclotomic::Cyclotomic(long order, std::vector<Rational> c) : order_(order), c_(std::move(c))
{
    shrink();
}

void Cyclotomic::shrink()
{
    if (order_ == 1)
        return;
    for (std::size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0)
            return;
    order_ = 1;
    c_.resize(1);
}

Cyclotomic Cyclotomic::zeta(long M, long k)
{
    if (M <= 0)
        throw std::invalid_argument("zeta: order must be positive");
    auto ctx = context(M);
    std::vector<Rational> c(ctx->phi);
    for (auto [i, v] : ctx->red[mod(k, M)])
        c[i] = v;
    return Cyclotomic(M, std::move(c));
}

Cyclotomic Cyclotomic::root_of_unity(const Rational &r)
{
    Rational f = frac(r);
    return zeta(to_long(f.get_den()), to_long(f.get_num()));
}

Cyclotomic Cyclotomic::sqrt(const Rational &r)
{
    if (r < 0)
        throw std::invalid_argument("sqrt of a negative rational");
    if (r == 0)
        return Cyclotomic();
    // sqrt(a/b) = sqrt(a*b)/b
    Integer ab = r.get_num() * r.get_den();
    Rational scale(1, r.get_den());
    Integer square_part = 1;
    Cyclotomic out(1);
    auto adjoin = [&](long p) {
        if (p == 2) {
            out *= zeta(8, 1) + zeta(8, -1);
            return;
        }
        Cyclotomic g;
        for (long a = 1; a < p; ++a)
            g += Cyclotomic(kronecker(a, p)) * zeta(p, a);
        out *= (p % 4 == 1) ? g : zeta(4, -1) * g;
    };
    for (long p = 2; ab > 1; ++p) {
        if (Integer(p) * p > ab) {
            adjoin(to_long(ab));
            break;
        }
        int e = 0;
        while (mpz_divisible_ui_p(ab.get_mpz_t(), static_cast<unsigned long>(p))) {
            ab /= p;
            ++e;
        }
        for (int i = 0; i < e / 2; ++i)
            square_part *= p;
        if (e % 2 == 1)
            adjoin(p);
    }
    out *= Rational(square_part) * scale;
    return out;
}

bool Cyclotomic::is_zero() const
{
    for (const auto &x : c_)
        if (x != 0)
            return false;
    return true;
}

const Rational &Cyclotomic::to_rational() const
{
    if (order_ != 1)
        throw NonRationalCoefficient("value " + to_string() + " is not rational");
    return c_[0];
}

Cyclotomic Cyclotomic::embed(long M) const
{
    if (M == order_)
        return *this;
    if (M % order_ != 0)
        throw std::invalid_argument("embed: target order is not a multiple");
    auto ctx = context(M);
    long step = M / order_;
    std::vector<Rational> c(ctx->phi);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0)
            continue;
        for (auto [j, v] : ctx->red[static_cast<long>(i) * step])
            c[j] += c_[i] * v;
    }
    Cyclotomic out;
    out.order_ = M;
    out.c_ = std::move(c);
    return out;
}

Cyclotomic &Cyclotomic::operator+=(const Cyclotomic &o)
{
    if (o.order_ == 1) {
        c_[0] += o.c_[0];
        return *this;
    }
    long M = lcm(order_, o.order_);
    if (M != order_)
        *this = embed(M);
    if (o.order_ == M) {
        for (std::size_t i = 0; i < c_.size(); ++i)
            c_[i] += o.c_[i];
    } else {
        Cyclotomic e = o.embed(M);
        for (std::size_t i = 0; i < c_.size(); ++i)
            c_[i] += e.c_[i];
    }
    shrink();
    return *this;
}

Cyclotomic &Cyclotomic::operator-=(const Cyclotomic &o)
{
    return *this += -o;
}

Cyclotomic Cyclotomic::operator-() const
{
    Cyclotomic out = *this;
    for (auto &x : out.c_)
        x = -x;
    return out;
}

Cyclotomic &Cyclotomic::operator*=(const Rational &o)
{
    for (auto &x : c_)
        x *= o;
    if (o == 0) {
        order_ = 1;
        c_.assign(1, Rational(0));
    }
    return *this;
}

Cyclotomic &Cyclotomic::operator*=(const Cyclotomic &o)
{
    *this = *this * o;
    return *this;
}

Cyclotomic operator*(const Cyclotomic &a, const Cyclotomic &b)
{
    if (a.order_ == 1) {
        Cyclotomic out = b;
        out *= a.c_[0];
        return out;
    }
    if (b.order_ == 1) {
        Cyclotomic out = a;
        out *= b.c_[0];
        return out;
    }
    long M = lcm(a.order_, b.order_);
    const Cyclotomic &x = a.order_ == M ? a : a.embed(M);
    Cyclotomic ytmp;
    if (b.order_ != M)
        ytmp = b.embed(M);
    const Cyclotomic &y = b.order_ == M ? b : ytmp;
    auto ctx = context(M);
    long phi = ctx->phi;
    std::vector<Rational> acc(2 * phi - 1);
    Rational t;
    for (long i = 0; i < phi; ++i) {
        if (x.c_[i] == 0)
            continue;
        for (long j = 0; j < phi; ++j) {
            if (y.c_[j] == 0)
                continue;
            mpq_mul(t.get_mpq_t(), x.c_[i].get_mpq_t(), y.c_[j].get_mpq_t());
            acc[i + j] += t;
        }
    }
    std::vector<Rational> c(phi);
    for (long k = 0; k < 2 * phi - 1; ++k) {
        if (acc[k] == 0)
            continue;
        if (k < phi) {
            c[k] += acc[k];
            continue;
        }
        for (auto [j, v] : ctx->red[k % M])
            c[j] += acc[k] * v;
    }
    return Cyclotomic(M, std::move(c));
}

bool operator==(const Cyclotomic &a, const Cyclotomic &b)
{
    if (a.order_ == b.order_)
        return a.c_ == b.c_;
    long M = lcm(a.order_, b.order_);
    return a.embed(M).c_ == b.embed(M).c_;
}

Cyclotomic Cyclotomic::conj() const
{
    if (order_ == 1)
        return *this;
    Cyclotomic out;
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != 0)
            out += Cyclotomic(c_[i]) * zeta(order_, -static_cast<long>(i));
    return out;
}

Cyclotomic Cyclotomic::inverse() const
{
    if (is_zero())
        throw std::domain_error("inverse of zero cyclotomic number");
    if (order_ == 1)
        return Cyclotomic(Rational(1) / c_[0]);
    int nonzero = 0;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != 0) {
            ++nonzero;
            pos = i;
        }
    if (nonzero == 1) {
        Cyclotomic out = zeta(order_, -static_cast<long>(pos));
        out *= Rational(1) / c_[pos];
        return out;
    }
    // Solve x * this = 1 through the multiplication matrix.
    long phi = static_cast<long>(c_.size());
    std::vector<std::vector<Rational>> mat(phi, std::vector<Rational>(phi + 1));
    for (long j = 0; j < phi; ++j) {
        Cyclotomic col = *this * zeta(order_, j);
        std::vector<Rational> cc = col.embed(order_).c_;
        for (long i = 0; i < phi; ++i)
            mat[i][j] = cc[i];
    }
    mat[0][phi] = 1;
    for (long col = 0; col < phi; ++col) {
        long piv = col;
        while (piv < phi && mat[piv][col] == 0)
            ++piv;
        std::swap(mat[col], mat[piv]);
        Rational inv = Rational(1) / mat[col][col];
        for (long j = col; j <= phi; ++j)
            mat[col][j] *= inv;
        for (long r = 0; r < phi; ++r) {
            if (r == col || mat[r][col] == 0)
                continue;
            Rational f = mat[r][col];
            for (long j = col; j <= phi; ++j)
                mat[r][j] -= f * mat[col][j];
        }
    }
    std::vector<Rational> c(phi);
    for (long i = 0; i < phi; ++i)
        c[i] = mat[i][phi];
    return Cyclotomic(order_, std::move(c));
}

std::complex<double> Cyclotomic::to_complex() const
{
    std::complex<double> z = 0;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0)
            continue;
        double ang = 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(order_);
        z += c_[i].get_d() * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return z;
}

std::string Cyclotomic::to_string() const
{
    if (order_ == 1)
        return c_[0].get_str();
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0)
            continue;
        if (!first)
            os << " + ";
        first = false;
        os << c_[i].get_str();
        if (i > 0)
            os << "*z" << order_ << "^" << i;
    }
    return os.str();
}

} // namespace orbq
