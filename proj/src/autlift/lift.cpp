#include "orbq/autlift/lift.hpp"

#include <algorithm>
#include <set>

#include "orbq/error.hpp"
#include "orbq/lattice/theta.hpp"

namespace orbq
{

namespace
{

std::vector<Rational> row_of(const IntMatrix &B, std::size_t i)
{
    std::vector<Rational> v(B.cols());
    for (std::size_t j = 0; j < B.cols(); ++j)
        v[j] = Rational(B(i, j));
    return v;
}

long denominator_order(const std::vector<Rational> &values)
{
    long m = 1;
    for (const auto &v : values)
        m = lcm(m, to_long(frac(v).get_den()));
    return m;
}

} // namespace

std::vector<Rational> fixed_projection(const LatticeAutomorphism &nu, const std::vector<Rational> &x)
{
    std::vector<Rational> sum(nu.dim());
    RatMatrix A = to_rational(nu.matrix());
    std::vector<Rational> cur = x;
    for (long i = 0; i < nu.order(); ++i) {
        for (std::size_t j = 0; j < sum.size(); ++j)
            sum[j] += cur[j];
        cur = A.apply(cur);
    }
    for (auto &v : sum)
        v /= nu.order();
    return sum;
}

LiftSpec LiftSpec::standard(const LatticeAutomorphism &nu)
{
    LiftSpec s{nu, std::vector<Rational>(nu.dim()), 1};
    s.hat_order = lift_order(s);
    return s;
}

LiftSpec LiftSpec::with_beta(const LatticeAutomorphism &nu, const std::vector<Rational> &beta)
{
    if (beta.size() != nu.dim())
        throw std::invalid_argument("beta has " + std::to_string(beta.size()) + " entries, lattice dimension is " +
                                    std::to_string(nu.dim()));
    LiftSpec s{nu, fixed_projection(nu, beta), 1};
    s.hat_order = lift_order(s);
    return s;
}

bool LiftSpec::is_standard() const
{
    return std::all_of(beta.begin(), beta.end(), [](const Rational &v) { return v == 0; });
}

bool has_order_doubling(const LatticeAutomorphism &nu)
{
    long n = nu.order();
    if (n % 2 != 0)
        return false;
    // the parity of <a, nu^{n/2} a> is additive, so a basis decides it
    IntMatrix H = nu.power(n / 2);
    const GramLattice &L = nu.lattice();
    for (std::size_t i = 0; i < nu.dim(); ++i) {
        auto e = row_of(IntMatrix::identity(nu.dim()), i);
        Rational v = L.inner(e, to_rational(H).apply(e));
        if (!is_integer(v / 2))
            return true;
    }
    return false;
}

long lift_order(const LiftSpec &spec)
{
    const LatticeAutomorphism &nu = spec.base;
    long n = nu.order();
    const GramLattice &L = nu.lattice();
    std::vector<Rational> chi(nu.dim());
    RatMatrix H = to_rational(nu.power(n / 2));
    for (std::size_t i = 0; i < nu.dim(); ++i) {
        auto e = row_of(IntMatrix::identity(nu.dim()), i);
        chi[i] = L.inner(spec.beta, e) * n;
        if (n % 2 == 0)
            chi[i] += L.inner(e, H.apply(e)) / 2;
    }
    return n * denominator_order(chi);
}

PhaseCharacter w_on_fixed(const LiftSpec &spec, long k, const Sublattice &fixed)
{
    const LatticeAutomorphism &nu = spec.base;
    long n = nu.order();
    const GramLattice &L = nu.lattice();
    bool sign = n % 2 == 0 && k % 2 == 0;
    RatMatrix H = to_rational(nu.power(k / 2));
    std::vector<Rational> vals(fixed.rank());
    for (std::size_t r = 0; r < fixed.rank(); ++r) {
        auto b = row_of(fixed.basis, r);
        vals[r] = L.inner(spec.beta, b) * k;
        if (sign)
            vals[r] += L.inner(b, H.apply(b)) / 2;
    }
    return PhaseCharacter::make(vals);
}

PhaseCharacter w_on_fixed(const LiftSpec &spec, long k)
{
    return w_on_fixed(spec, k, fixed_sublattice(spec.base.lattice(), spec.base.power(k)));
}

std::vector<PowerProfile> power_profile(const LiftSpec &spec)
{
    std::vector<PowerProfile> out;
    for (long k = 0; k < spec.hat_order; ++k) {
        Sublattice f = fixed_sublattice(spec.base.lattice(), spec.base.power(k));
        PhaseCharacter w = w_on_fixed(spec, k, f);
        out.push_back(PowerProfile{k, cycle_type_of(spec.base, k), f, w});
    }
    return out;
}

Rational conformal_weight(const CycleType &c, const Rational &central_charge, const Rational &min_norm)
{
    Rational s = 0;
    for (const auto &[t, b] : c.exponents())
        s += make_rational(b, t);
    return central_charge / 24 - s / 24 + min_norm / 2;
}

Rational conformal_weight(const LiftSpec &spec)
{
    const LatticeAutomorphism &nu = spec.base;
    Sublattice K = fixed_sublattice(nu.lattice(), nu.matrix());
    Rational m = 0;
    if (K.rank() > 0) {
        // beta in the dual basis of L^nu has coordinates <beta, b_j>
        std::vector<Rational> y(K.rank());
        for (std::size_t j = 0; j < K.rank(); ++j)
            y[j] = nu.lattice().inner(spec.beta, row_of(K.basis, j));
        m = min_norm_coset({dual(K.lattice), y});
    }
    return conformal_weight(cycle_type_of(nu, 1), Rational(static_cast<long>(nu.dim())), m);
}

long orbifold_type(const Rational &rho, long N)
{
    Rational t = rho * N * N;
    if (!is_integer(t))
        throw NonIntegralType("N^2 rho = " + to_string(t) + " for N = " + std::to_string(N) + ", rho = " +
                              to_string(rho));
    return mod(to_long(t.get_num() % N), N);
}

long orbifold_type(const LiftSpec &spec)
{
    return orbifold_type(conformal_weight(spec), spec.hat_order);
}

std::vector<LiftSpec> suggest_type0_beta(const LatticeAutomorphism &nu, const std::vector<long> &multipliers,
                                         std::size_t max_candidates)
{
    Sublattice K = fixed_sublattice(nu.lattice(), nu.matrix());
    if (K.rank() == 0)
        throw Unsupported("the fixed-point sublattice is zero, only the standard lift exists");
    std::size_t k = K.rank();
    RatMatrix dual_in_ambient = inverse(K.lattice.gram()) * to_rational(K.basis);

    std::vector<LiftSpec> found;
    std::set<std::vector<Rational>> seen;
    std::size_t tried = 0;
    auto consider = [&](const std::vector<Rational> &y) {
        if (!seen.insert(y).second)
            return;
        ++tried;
        std::vector<Rational> beta(nu.dim());
        for (std::size_t j = 0; j < k; ++j)
            if (y[j] != 0)
                for (std::size_t i = 0; i < nu.dim(); ++i)
                    beta[i] += y[j] * dual_in_ambient(j, i);
        LiftSpec s = LiftSpec::with_beta(nu, beta);
        try {
            if (orbifold_type(s) == 0)
                found.push_back(s);
        } catch (const NonIntegralType &) {
        }
    };
    consider(std::vector<Rational>(k));
    for (long r : multipliers) {
        std::vector<long> c(k, 0);
        for (;;) {
            std::size_t i = 0;
            while (i < k && c[i] == r - 1)
                c[i++] = 0;
            if (i == k)
                break;
            ++c[i];
            if (tried >= max_candidates)
                break;
            std::vector<Rational> y(k);
            for (std::size_t j = 0; j < k; ++j)
                y[j] = make_rational(c[j], r);
            consider(y);
        }
    }
    if (found.empty())
        throw SearchExhausted("no type 0 lift among " + std::to_string(tried) + " candidates");
    std::stable_sort(found.begin(), found.end(),
                     [](const LiftSpec &a, const LiftSpec &b) { return a.hat_order < b.hat_order; });
    return found;
}

std::string lift_classification(const LiftSpec &spec)
{
    if (!spec.is_standard())
        return "Non-standard lift";
    return has_order_doubling(spec.base) ? "Standard lift with order doubling" : "Standard lift without order doubling";
}

} // namespace orbq
