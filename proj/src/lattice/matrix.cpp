#include "orbq/lattice/matrix.hpp"

#include <cmath>
#include <sstream>

namespace orbq
{

RatMatrix to_rational(const IntMatrix &m)
{
    RatMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out(i, j) = Rational(m(i, j));
    return out;
}

IntMatrix to_integer(const RatMatrix &m)
{
    IntMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (!is_integer(m(i, j)))
                throw std::invalid_argument("matrix entry " + m(i, j).get_str() + " is not integral");
            out(i, j) = m(i, j).get_num();
        }
    return out;
}

Rational determinant(const RatMatrix &m)
{
    std::size_t n = m.rows();
    if (n != m.cols())
        throw std::invalid_argument("determinant of a non-square matrix");
    RatMatrix a = m;
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a(p, c) == 0)
            ++p;
        if (p == n)
            return 0;
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(a(p, j), a(c, j));
            det = -det;
        }
        det *= a(c, c);
        for (std::size_t r = c + 1; r < n; ++r) {
            if (a(r, c) == 0)
                continue;
            Rational f = a(r, c) / a(c, c);
            for (std::size_t j = c; j < n; ++j)
                a(r, j) -= f * a(c, j);
        }
    }
    return det;
}

RatMatrix inverse(const RatMatrix &m)
{
    std::size_t n = m.rows();
    RatMatrix a = m, inv = RatMatrix::identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a(p, c) == 0)
            ++p;
        if (p == n)
            throw std::domain_error("singular matrix");
        for (std::size_t j = 0; j < n; ++j) {
            std::swap(a(p, j), a(c, j));
            std::swap(inv(p, j), inv(c, j));
        }
        Rational s = Rational(1) / a(c, c);
        for (std::size_t j = 0; j < n; ++j) {
            a(c, j) *= s;
            inv(c, j) *= s;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a(r, c) == 0)
                continue;
            Rational f = a(r, c);
            for (std::size_t j = 0; j < n; ++j) {
                a(r, j) -= f * a(c, j);
                inv(r, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

long rank(const RatMatrix &m)
{
    RatMatrix a = m;
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
        std::size_t p = r;
        while (p < a.rows() && a(p, c) == 0)
            ++p;
        if (p == a.rows())
            continue;
        for (std::size_t j = 0; j < a.cols(); ++j)
            std::swap(a(p, j), a(r, j));
        for (std::size_t i = r + 1; i < a.rows(); ++i) {
            if (a(i, c) == 0)
                continue;
            Rational f = a(i, c) / a(r, c);
            for (std::size_t j = c; j < a.cols(); ++j)
                a(i, j) -= f * a(r, j);
        }
        ++r;
    }
    return static_cast<long>(r);
}

namespace
{

// Integer row echelon form using unimodular row operations on the first
// `width` columns; returns the number of pivot rows.
std::size_t echelon(IntMatrix &a, std::size_t width)
{
    std::size_t r = 0;
    Integer g, s, t, u, v;
    for (std::size_t c = 0; c < width && r < a.rows(); ++c) {
        for (std::size_t i = r + 1; i < a.rows(); ++i) {
            if (a(i, c) == 0)
                continue;
            if (a(r, c) == 0) {
                for (std::size_t j = 0; j < a.cols(); ++j)
                    std::swap(a(r, j), a(i, j));
                continue;
            }
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a(r, c).get_mpz_t(), a(i, c).get_mpz_t());
            u = a(r, c) / g;
            v = a(i, c) / g;
            for (std::size_t j = 0; j < a.cols(); ++j) {
                Integer x = a(r, j), y = a(i, j);
                a(r, j) = s * x + t * y;
                a(i, j) = u * y - v * x;
            }
        }
        if (a(r, c) != 0)
            ++r;
    }
    return r;
}

} // namespace

IntMatrix hnf(const IntMatrix &rows)
{
    IntMatrix a = rows;
    std::size_t r = echelon(a, a.cols());
    IntMatrix out;
    std::vector<std::size_t> pivots;
    for (std::size_t i = 0; i < r; ++i) {
        std::size_t p = 0;
        while (a(i, p) == 0)
            ++p;
        if (a(i, p) < 0)
            for (std::size_t j = 0; j < a.cols(); ++j)
                a(i, j) = -a(i, j);
        pivots.push_back(p);
    }
    // reduce entries above pivots into [0, pivot)
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t k = 0; k < i; ++k) {
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), a(k, pivots[i]).get_mpz_t(), a(i, pivots[i]).get_mpz_t());
            if (q == 0)
                continue;
            for (std::size_t j = 0; j < a.cols(); ++j)
                a(k, j) -= q * a(i, j);
        }
    for (std::size_t i = 0; i < r; ++i)
        out.append_row(a.row(i));
    if (r == 0)
        out = IntMatrix(0, rows.cols());
    return out;
}

IntMatrix integer_kernel(const IntMatrix &M)
{
    std::size_t m = M.rows(), n = M.cols();
    IntMatrix a(n, m + n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j)
            a(i, j) = M(j, i);
        a(i, m + i) = 1;
    }
    std::size_t r = echelon(a, m);
    IntMatrix ker(0, n);
    for (std::size_t i = r; i < n; ++i) {
        std::vector<Integer> v(n);
        for (std::size_t j = 0; j < n; ++j)
            v[j] = a(i, m + j);
        ker.append_row(v);
    }
    if (ker.rows() == 0)
        return ker;
    return hnf(ker);
}

IntMatrix lll_gram(const IntMatrix &gram)
{
    std::size_t n = gram.rows();
    IntMatrix U = IntMatrix::identity(n);
    IntMatrix G = gram;
    if (n <= 1)
        return U;
    const double delta = 0.99;
    auto gd = [&](std::size_t i, std::size_t j) { return G(i, j).get_d(); };
    std::vector<std::vector<double>> mu(n, std::vector<double>(n));
    std::vector<double> b(n);
    auto gso = [&]() {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                double s = gd(i, j);
                for (std::size_t k = 0; k < j; ++k)
                    s -= mu[i][k] * mu[j][k] * b[k];
                mu[i][j] = s / b[j];
            }
            double s = gd(i, i);
            for (std::size_t k = 0; k < i; ++k)
                s -= mu[i][k] * mu[i][k] * b[k];
            b[i] = s;
        }
    };
    // row_i -= q row_j, applied as E G E^T
    auto reduce = [&](std::size_t i, std::size_t j, const Integer &q) {
        for (std::size_t c = 0; c < n; ++c)
            U(i, c) -= q * U(j, c);
        for (std::size_t c = 0; c < n; ++c)
            G(i, c) -= q * G(j, c);
        for (std::size_t c = 0; c < n; ++c)
            G(c, i) -= q * G(c, j);
    };
    gso();
    std::size_t k = 1;
    long guard = 0;
    while (k < n && guard++ < 1000000) {
        for (std::size_t j = k; j-- > 0;) {
            double m = mu[k][j];
            if (std::fabs(m) > 0.51) {
                long ql = std::lround(m);
                reduce(k, j, Integer(ql));
                for (std::size_t l = 0; l < j; ++l)
                    mu[k][l] -= ql * mu[j][l];
                mu[k][j] -= ql;
            }
        }
        if (b[k] < (delta - mu[k][k - 1] * mu[k][k - 1]) * b[k - 1]) {
            for (std::size_t c = 0; c < n; ++c)
                std::swap(U(k, c), U(k - 1, c));
            for (std::size_t c = 0; c < n; ++c)
                std::swap(G(k, c), G(k - 1, c));
            for (std::size_t c = 0; c < n; ++c)
                std::swap(G(c, k), G(c, k - 1));
            gso();
            k = std::max<std::size_t>(k - 1, 1);
        } else {
            ++k;
        }
    }
    return U;
}

std::string to_string(const IntMatrix &m)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j)
            os << (j ? " " : "") << m(i, j).get_str();
        os << "\n";
    }
    return os.str();
}

} // namespace orbq
