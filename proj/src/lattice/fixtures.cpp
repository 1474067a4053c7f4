#include "orbq/lattice/fixtures.hpp"

#include <cctype>
#include <optional>

#include "orbq/error.hpp"

namespace orbq
{

GramLattice lattice_a1()
{
    return GramLattice::from_integers({{2}});
}

GramLattice lattice_a2()
{
    return lattice_an(2);
}

GramLattice lattice_d4()
{
    return lattice_dn(4);
}

GramLattice lattice_an(std::size_t n)
{
    std::vector<std::vector<long>> g(n, std::vector<long>(n));
    for (std::size_t i = 0; i < n; ++i) {
        g[i][i] = 2;
        if (i + 1 < n)
            g[i][i + 1] = g[i + 1][i] = -1;
    }
    return GramLattice::from_integers(g);
}

GramLattice lattice_dn(std::size_t n)
{
    if (n < 4)
        throw Unsupported("D_n needs n >= 4");
    std::vector<std::vector<long>> g(n, std::vector<long>(n));
    for (std::size_t i = 0; i < n; ++i)
        g[i][i] = 2;
    for (std::size_t i = 0; i + 2 < n; ++i)
        g[i][i + 1] = g[i + 1][i] = -1;
    // fork at node n-3
    g[n - 3][n - 1] = g[n - 1][n - 3] = -1;
    return GramLattice::from_integers(g);
}

GramLattice lattice_e8()
{
    // chain 0-1-2-3-4-5-6 with node 7 attached to node 4
    std::vector<std::vector<long>> g(8, std::vector<long>(8));
    for (int i = 0; i < 8; ++i)
        g[i][i] = 2;
    for (int i = 0; i < 6; ++i)
        g[i][i + 1] = g[i + 1][i] = -1;
    g[4][7] = g[7][4] = -1;
    return GramLattice::from_integers(g);
}

GramLattice lattice_scaled_identity(std::size_t n, long k)
{
    std::vector<std::vector<long>> g(n, std::vector<long>(n));
    for (std::size_t i = 0; i < n; ++i)
        g[i][i] = k;
    return GramLattice::from_integers(g);
}

std::vector<std::vector<int>> golay_generators()
{
    // g(x) = x^11 + x^10 + x^6 + x^5 + x^4 + x^2 + 1 generates the cyclic [23,12,7] code
    const int gpoly[12] = {1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1};
    std::vector<std::vector<int>> rows;
    for (int s = 0; s < 12; ++s) {
        std::vector<int> r(24, 0);
        for (int k = 0; k < 12; ++k)
            r[s + k] = gpoly[k];
        int parity = 0;
        for (int k = 0; k < 23; ++k)
            parity ^= r[k];
        r[23] = parity;
        rows.push_back(r);
    }
    return rows;
}

IntMatrix leech_basis()
{
    static const IntMatrix cached = [] {
        IntMatrix gens(0, 24);
        for (const auto &c : golay_generators()) {
            std::vector<Integer> v(24);
            for (int i = 0; i < 24; ++i)
                v[i] = 2 * c[i];
            gens.append_row(v);
        }
        for (int i = 1; i < 24; ++i) {
            std::vector<Integer> v(24);
            v[0] = 4;
            v[i] = 4;
            gens.append_row(v);
        }
        {
            std::vector<Integer> v(24);
            v[1] = 4;
            v[2] = 4;
            gens.append_row(v);
        }
        {
            std::vector<Integer> v(24, Integer(1));
            v[0] = -3;
            gens.append_row(v);
        }
        IntMatrix B = hnf(gens);
        IntMatrix gram = B * B.transpose();
        IntMatrix U = lll_gram(gram);
        return IntMatrix(U * B);
    }();
    return cached;
}

GramLattice lattice_leech()
{
    IntMatrix B = leech_basis();
    RatMatrix g = to_rational(B * B.transpose());
    for (std::size_t i = 0; i < 24; ++i)
        for (std::size_t j = 0; j < 24; ++j)
            g(i, j) /= 8;
    return GramLattice(g);
}

namespace
{

GramLattice single(std::string name)
{
    std::string up;
    for (char c : name)
        up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (up == "LEECH")
        return lattice_leech();
    if (up == "E8")
        return lattice_e8();
    if (up.size() >= 2 && (up[0] == 'A' || up[0] == 'D')) {
        std::size_t n = std::stoul(up.substr(1));
        return up[0] == 'A' ? lattice_an(n) : lattice_dn(n);
    }
    throw Unsupported("unknown lattice name '" + name + "'");
}

} // namespace

GramLattice named_lattice(const std::string &name)
{
    std::optional<GramLattice> out;
    std::size_t pos = 0;
    while (pos <= name.size()) {
        std::size_t plus = name.find('+', pos);
        std::string part = name.substr(pos, plus == std::string::npos ? std::string::npos : plus - pos);
        long mult = 1;
        if (auto caret = part.find('^'); caret != std::string::npos) {
            mult = std::stol(part.substr(caret + 1));
            part = part.substr(0, caret);
        }
        GramLattice base;
        try {
            base = single(part);
        } catch (const std::invalid_argument &) {
            throw Unsupported("unknown lattice name '" + name + "'");
        }
        for (long k = 0; k < mult; ++k)
            out = out ? direct_sum(*out, base) : base;
        if (plus == std::string::npos)
            break;
        pos = plus + 1;
    }
    if (!out)
        throw Unsupported("empty lattice name");
    return *out;
}

IntMatrix root_reflection(const GramLattice &L, std::size_t k)
{
    std::size_t n = L.dim();
    if (L.gram()(k, k) != 2)
        throw Unsupported("reflection needs a norm 2 basis vector");
    IntMatrix A = IntMatrix::identity(n);
    for (std::size_t j = 0; j < n; ++j)
        A(k, j) -= L.gram()(k, j).get_num();
    return A;
}

IntMatrix block_sum(const IntMatrix &a, const IntMatrix &b)
{
    std::size_t n = a.rows(), m = b.rows();
    IntMatrix out(n + m, n + m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out(i, j) = a(i, j);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            out(n + i, n + j) = b(i, j);
    return out;
}

} // namespace orbq
