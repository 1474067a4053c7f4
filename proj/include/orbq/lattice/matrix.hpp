#pragma once

#include <string>
#include <vector>

#include "orbq/qseries/arith.hpp"

namespace orbq
{

template <class T>
class Matrix
{
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    static Matrix from_rows(const std::vector<std::vector<T>> &rows)
    {
        Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
        for (std::size_t i = 0; i < m.r_; ++i) {
            if (rows[i].size() != m.c_)
                throw std::invalid_argument("ragged matrix rows");
            for (std::size_t j = 0; j < m.c_; ++j)
                m(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    T &operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const T &operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    std::vector<T> row(std::size_t i) const { return {a_.begin() + i * c_, a_.begin() + (i + 1) * c_}; }
    void set_row(std::size_t i, const std::vector<T> &v)
    {
        for (std::size_t j = 0; j < c_; ++j)
            (*this)(i, j) = v[j];
    }
    void append_row(const std::vector<T> &v)
    {
        if (r_ == 0 && c_ == 0)
            c_ = v.size();
        if (v.size() != c_)
            throw std::invalid_argument("row length mismatch");
        a_.insert(a_.end(), v.begin(), v.end());
        ++r_;
    }

    Matrix transpose() const
    {
        Matrix t(c_, r_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    friend Matrix operator*(const Matrix &x, const Matrix &y)
    {
        if (x.c_ != y.r_)
            throw std::invalid_argument("matrix dimension mismatch");
        Matrix out(x.r_, y.c_);
        for (std::size_t i = 0; i < x.r_; ++i)
            for (std::size_t k = 0; k < x.c_; ++k) {
                if (x(i, k) == 0)
                    continue;
                for (std::size_t j = 0; j < y.c_; ++j)
                    out(i, j) += x(i, k) * y(k, j);
            }
        return out;
    }
    friend Matrix operator-(const Matrix &x, const Matrix &y)
    {
        Matrix out = x;
        for (std::size_t i = 0; i < out.a_.size(); ++i)
            out.a_[i] -= y.a_[i];
        return out;
    }
    friend bool operator==(const Matrix &x, const Matrix &y)
    {
        return x.r_ == y.r_ && x.c_ == y.c_ && x.a_ == y.a_;
    }

    std::vector<T> apply(const std::vector<T> &v) const
    {
        std::vector<T> out(r_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j)
                out[i] += (*this)(i, j) * v[j];
        return out;
    }

private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<T> a_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;

RatMatrix to_rational(const IntMatrix &m);
// Throws if some entry is not an integer.
IntMatrix to_integer(const RatMatrix &m);

Rational determinant(const RatMatrix &m);
RatMatrix inverse(const RatMatrix &m);
long rank(const RatMatrix &m);

// Hermite normal form of the row lattice; zero rows are dropped.
IntMatrix hnf(const IntMatrix &rows);
// Basis (as rows) of {x in Z^n : M x = 0}.
IntMatrix integer_kernel(const IntMatrix &M);

// Unimodular U with U G U^T LLL-reduced (delta = 0.99); G positive definite.
IntMatrix lll_gram(const IntMatrix &gram);

std::string to_string(const IntMatrix &m);

} // namespace orbq
