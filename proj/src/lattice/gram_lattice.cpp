#include "orbq/lattice/gram_lattice.hpp"

#include <sstream>

#include "orbq/error.hpp"

namespace orbq
{

GramLattice::GramLattice(RatMatrix gram) : gram_(std::move(gram))
{
    std::size_t n = gram_.rows();
    if (n != gram_.cols())
        throw NotSymmetric("Gram matrix is not square");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (gram_(i, j) != gram_(j, i))
                throw NotSymmetric("entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
    // exact LDL^T; every pivot must be positive
    RatMatrix a = gram_;
    for (std::size_t c = 0; c < n; ++c) {
        if (a(c, c) <= 0)
            throw NotPositiveDefinite("pivot " + std::to_string(c) + " is " + orbq::to_string(a(c, c)));
        for (std::size_t r = c + 1; r < n; ++r) {
            if (a(r, c) == 0)
                continue;
            Rational f = a(r, c) / a(c, c);
            for (std::size_t j = c; j < n; ++j)
                a(r, j) -= f * a(c, j);
        }
    }
}

GramLattice GramLattice::from_integers(const std::vector<std::vector<long>> &rows)
{
    RatMatrix g(rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size())
            throw NotSymmetric("Gram matrix is not square");
        for (std::size_t j = 0; j < rows.size(); ++j)
            g(i, j) = rows[i][j];
    }
    return GramLattice(std::move(g));
}

GramLattice GramLattice::parse(const std::string &text)
{
    std::istringstream in(text);
    long d;
    if (!(in >> d) || d < 0)
        throw ParseError("expected the dimension on the first line");
    RatMatrix g(d, d);
    for (long i = 0; i < d; ++i)
        for (long j = 0; j < d; ++j) {
            std::string tok;
            if (!(in >> tok))
                throw ParseError("Gram matrix has fewer than " + std::to_string(d * d) + " entries");
            g(i, j) = parse_rational(tok);
        }
    std::string extra;
    if (in >> extra)
        throw ParseError("trailing token '" + extra + "' after Gram matrix");
    return GramLattice(std::move(g));
}

bool GramLattice::is_integral() const
{
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < dim(); ++j)
            if (!orbq::is_integer(gram_(i, j)))
                return false;
    return true;
}

bool GramLattice::is_even() const
{
    if (!is_integral())
        return false;
    for (std::size_t i = 0; i < dim(); ++i)
        if (gram_(i, i).get_num() % 2 != 0)
            return false;
    return true;
}

Rational GramLattice::det() const
{
    return dim() == 0 ? Rational(1) : determinant(gram_);
}

IntMatrix GramLattice::integer_gram() const
{
    return to_integer(gram_);
}

Rational GramLattice::inner(const std::vector<Rational> &x, const std::vector<Rational> &y) const
{
    Rational s = 0;
    for (std::size_t i = 0; i < dim(); ++i) {
        if (x[i] == 0)
            continue;
        Rational t = 0;
        for (std::size_t j = 0; j < dim(); ++j)
            if (y[j] != 0)
                t += gram_(i, j) * y[j];
        s += x[i] * t;
    }
    return s;
}

std::string GramLattice::to_string() const
{
    std::ostringstream os;
    os << dim() << "\n";
    for (std::size_t i = 0; i < dim(); ++i) {
        for (std::size_t j = 0; j < dim(); ++j)
            os << (j ? " " : "") << orbq::to_string(gram_(i, j));
        os << "\n";
    }
    return os.str();
}

GramLattice dual(const GramLattice &L)
{
    if (L.dim() == 0)
        return L;
    return GramLattice(inverse(L.gram()));
}

GramLattice direct_sum(const GramLattice &a, const GramLattice &b)
{
    std::size_t n = a.dim(), m = b.dim();
    RatMatrix g(n + m, n + m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            g(i, j) = a.gram()(i, j);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            g(n + i, n + j) = b.gram()(i, j);
    return GramLattice(std::move(g));
}

GramLattice transform(const GramLattice &L, const IntMatrix &U)
{
    RatMatrix u = to_rational(U);
    return GramLattice(u * L.gram() * u.transpose());
}

Sublattice Sublattice::make(const GramLattice &parent, const IntMatrix &basis)
{
    if (basis.rows() > 0 && basis.cols() != parent.dim())
        throw std::invalid_argument("sublattice basis has the wrong number of columns");
    IntMatrix b = basis.rows() == 0 ? IntMatrix(0, parent.dim()) : basis;
    return Sublattice{parent, b, transform(parent, b)};
}

Sublattice Sublattice::whole(const GramLattice &parent)
{
    return make(parent, IntMatrix::identity(parent.dim()));
}

std::vector<Rational> Sublattice::to_parent(const std::vector<Rational> &x) const
{
    std::vector<Rational> v(parent.dim());
    for (std::size_t i = 0; i < rank(); ++i)
        if (x[i] != 0)
            for (std::size_t j = 0; j < parent.dim(); ++j)
                v[j] += x[i] * Rational(basis(i, j));
    return v;
}

PhaseCharacter PhaseCharacter::make(std::vector<Rational> values)
{
    for (auto &v : values)
        v = frac(v);
    return PhaseCharacter{std::move(values)};
}

long PhaseCharacter::order() const
{
    long m = 1;
    for (const auto &v : values)
        m = lcm(m, to_long(v.get_den()));
    return m;
}

Rational PhaseCharacter::operator()(const std::vector<Integer> &x) const
{
    Rational s = 0;
    for (std::size_t i = 0; i < values.size(); ++i)
        s += values[i] * Rational(x[i]);
    return frac(s);
}

void check_isometry(const GramLattice &L, const IntMatrix &A)
{
    std::size_t n = L.dim();
    if (A.rows() != n || A.cols() != n)
        throw NotAnIsometry("matrix is " + std::to_string(A.rows()) + "x" + std::to_string(A.cols()) +
                            ", lattice has dimension " + std::to_string(n));
    RatMatrix a = to_rational(A);
    if (a.transpose() * L.gram() * a != L.gram())
        throw NotAnIsometry("A^T G A differs from G");
    Rational d = n == 0 ? Rational(1) : determinant(a);
    if (d != 1 && d != -1)
        throw NotAnIsometry("determinant " + orbq::to_string(d) + " is not a unit");
}

Sublattice fixed_sublattice(const GramLattice &L, const IntMatrix &A)
{
    check_isometry(L, A);
    IntMatrix M = A - IntMatrix::identity(L.dim());
    return Sublattice::make(L, integer_kernel(M));
}

Sublattice kernel_of_character(const Sublattice &K, const PhaseCharacter &u)
{
    std::size_t k = K.rank();
    if (u.values.size() != k)
        throw std::invalid_argument("character and sublattice ranks differ");
    long m = u.order();
    if (m == 1)
        return K;
    // sum a_i x_i + m y = 0, then project away y
    IntMatrix M(1, k + 1);
    Integer g = m;
    for (std::size_t i = 0; i < k; ++i) {
        M(0, i) = Rational(u.values[i] * m).get_num();
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), M(0, i).get_mpz_t());
    }
    M(0, k) = m;
    IntMatrix ker = integer_kernel(M);
    IntMatrix gens(0, k);
    for (std::size_t r = 0; r < ker.rows(); ++r) {
        auto row = ker.row(r);
        row.pop_back();
        gens.append_row(row);
    }
    IntMatrix coords = hnf(gens);
    if (coords.rows() != k)
        throw std::logic_error("kernel of a character lost rank");
    Sublattice out = Sublattice::make(K.parent, coords * K.basis);
    // the image is the cyclic group generated by the values, of order m / g
    Integer image = Integer(m) / g;
    if (out.lattice.det() != K.lattice.det() * Rational(image * image))
        throw std::logic_error("kernel determinant law violated");
    return out;
}

long level_of(const GramLattice &L)
{
    if (!L.is_even())
        throw NotEven("level requires an even lattice");
    if (L.dim() == 0)
        return 1;
    RatMatrix inv = inverse(L.gram());
    long N = 1;
    for (std::size_t i = 0; i < L.dim(); ++i)
        for (std::size_t j = 0; j < L.dim(); ++j) {
            Rational v = i == j ? inv(i, j) / 2 : inv(i, j);
            N = lcm(N, to_long(v.get_den()));
        }
    return N;
}

} // namespace orbq
