#include "orbq/orbifold/assembly.hpp"

#include <chrono>
#include <future>
#include <random>

#include "orbq/error.hpp"
#include "orbq/lattice/theta_cache.hpp"
#include "orbq/modular/eta.hpp"

namespace orbq
{

namespace
{

FormSpace constant_space()
{
    FormSpace s;
    s.basis.push_back(BasisForm());
    return s;
}

std::optional<std::pair<FormSpace, std::vector<Rational>>> try_fit(const PuiseuxSeries &f, long level, long k,
                                                                   long chi)
{
    // the incremental search stops as soon as f lies in the span
    try {
        return fit_by_search(f, level, k, chi);
    } catch (const BasisNotFound &) {
    } catch (const NotInSpace &) {
    }
    try {
        FormSpace space = basis_for_space(level, k, chi);
        return std::make_pair(space, fit_in_basis(f, space));
    } catch (const BasisNotFound &) {
    } catch (const NotInSpace &) {
    }
    return std::nullopt;
}

// gamma in Gamma_0(m) built from T and the lower unipotent.
UnimodularMatrix random_gamma0(long m, std::mt19937 &rng)
{
    std::uniform_int_distribution<long> d(-3, 3);
    UnimodularMatrix lower{1, 0, m, 1};
    UnimodularMatrix g = UnimodularMatrix::T(d(rng));
    for (int r = 0; r < 2; ++r) {
        long e = d(rng);
        UnimodularMatrix p = e >= 0 ? lower : lower.inverse();
        for (long i = 0; i < std::abs(e); ++i)
            g = g * p;
        g = g * UnimodularMatrix::T(d(rng));
    }
    return g;
}

UnimodularMatrix completion(long c, long d)
{
    auto [g, x, y] = ext_gcd(d, c); // x d + y c = 1
    (void)g;
    return {x, -y, c, d};
}

} // namespace

NumeratorFit fit_numerator(const OrbifoldSource &src, long t, const Rational &trunc)
{
    long N = src.hat_order();
    long m = N / t;
    long r = long(src.fixed_rank(t));
    long c = src.central_charge();
    Rational shift = make_rational(c, 24);

    NumeratorFit out;
    if (r == 0) {
        out.dt = compute_Dt(src, t, trunc + shift, trunc);
        out.space = constant_space();
        out.coefficients = {Rational(euler_phi(m))};
        return out;
    }
    if (r % 2 != 0)
        throw Unsupported("fixed lattice of nu^" + std::to_string(t) + " has odd rank " + std::to_string(r));
    long k = r / 2;

    std::vector<long> levels;
    long chi = 1;
    if (!src.spec()) {
        levels.push_back(1);
    } else {
        const auto &K = src.fixed(t);
        Rational disc = K.lattice.det();
        if (k % 2)
            disc = -disc;
        chi = squarefree_label(disc);
        levels.push_back(lcm(level_of(K.lattice), m));
        long kl = m;
        for (long d : divisors(m))
            if (mobius(d) != 0)
                kl = lcm(kl, level_of(kernel_of_character(K, PhaseCharacter::make([&] {
                                          auto v = src.w(t).values;
                                          for (auto &x : v)
                                              x *= d;
                                          return v;
                                      }()))
                                          .lattice));
        if (kl != levels.back())
            levels.push_back(kl);
    }

    for (long level : levels) {
        long B = sturm_bound(level, k);
        Rational ntrunc = trunc + shift;
        if (ntrunc < B + 1)
            ntrunc = B + 1;
        out.dt = compute_Dt(src, t, ntrunc, trunc);
        if (auto fit = try_fit(out.dt.numerator, level, k, chi)) {
            out.space = fit->first;
            out.coefficients = fit->second;
            return out;
        }
    }
    throw NotInSpace("D_" + std::to_string(t) + " numerator of weight " + std::to_string(k) +
                     " did not fit at level " + std::to_string(levels.back()));
}

PuiseuxSeries transformed_Dt(const OrbifoldSource &src, long t, const FormSpace &space,
                             const std::vector<Rational> &coeffs, const UnimodularMatrix &R, const Rational &trunc)
{
    CycleType C = src.cycle(t);
    PuiseuxSeries sum{PuiseuxSeries::Trunc(trunc)};
    for (std::size_t i = 0; i < space.basis.size(); ++i) {
        if (coeffs[i] == 0)
            continue;
        const BasisForm &b = space.basis[i];
        TransformedEtaQuotient f = transform_eta_quotient(b.eta - C, R);
        if (f.automorphy_weight + 4 * b.e4_power != 0)
            throw MismatchedForms("basis form " + b.to_string() + " does not have weight " + to_string(C.weight()));
        PuiseuxSeries s = expand_transformed(f, trunc);
        if (b.e4_power > 0) {
            Rational et = trunc - f.leading_exponent();
            s = series_mul(s, eisenstein_e4(et).pow(b.e4_power, et)).truncated(trunc);
        }
        sum += s * Cyclotomic(coeffs[i]);
    }
    return sum * zm_character(R, src.central_charge()).inverse();
}

CtResult compute_Ct(const OrbifoldSource &src, long t, const Rational &trunc, const CtOptions &opts)
{
    long N = src.hat_order();
    CtResult out;
    out.t = t;
    out.m = N / t;
    if (t == N) {
        out.value = untwisted_trace(src, 0, trunc).value;
        out.space = constant_space();
        out.coefficients = {Rational(1)};
        return out;
    }
    NumeratorFit fit = fit_numerator(src, t, trunc);
    out.space = fit.space;
    out.coefficients = fit.coefficients;

    std::vector<UnimodularMatrix> reps = coset_reps_gamma0(out.m);
    if (opts.randomize_seed) {
        std::mt19937 rng(*opts.randomize_seed + unsigned(t));
        for (auto &R : reps)
            R = random_gamma0(out.m, rng) * R;
    }
    out.cosets = reps.size();

    std::vector<PuiseuxSeries> images(reps.size());
    unsigned threads = std::max(1u, default_threads());
    if (threads > 1 && reps.size() > 1) {
        std::vector<std::future<PuiseuxSeries>> fs;
        for (const auto &R : reps)
            fs.push_back(std::async(std::launch::async, [&, R] {
                return transformed_Dt(src, t, out.space, out.coefficients, R, trunc);
            }));
        for (std::size_t i = 0; i < fs.size(); ++i)
            images[i] = fs[i].get();
    } else {
        for (std::size_t i = 0; i < reps.size(); ++i)
            images[i] = transformed_Dt(src, t, out.space, out.coefficients, reps[i], trunc);
    }

    out.value = PuiseuxSeries(PuiseuxSeries::Trunc(trunc));
    for (std::size_t i = 0; i < reps.size(); ++i) {
        out.value += images[i];
        // the coset of S carries the nu-hat^t twisted sector
        UnimodularMatrix q = reps[i] * UnimodularMatrix::S().inverse();
        if (q.c % out.m == 0 && !images[i].empty())
            out.sector_exponent = images[i].lead_exponent();
    }
    if (!out.value.all_rational())
        throw NonRational("C_" + std::to_string(t) + " keeps irrational coefficients: " + out.value.to_string());
    return out;
}

std::map<long, Integer> extract_dims(const PuiseuxSeries &ch, long c)
{
    std::map<long, Integer> dims;
    Rational shift = make_rational(c, 24);
    for (long k = 0;; ++k) {
        Rational e = Rational(k) - shift;
        if (!ch.trunc() || e >= *ch.trunc())
            break;
        Cyclotomic v = ch.coefficient(e);
        if (!v.is_rational() || !is_integer(v.to_rational()))
            throw NonIntegerCoefficient("dimension at weight " + std::to_string(k) + " is " + v.to_string());
        dims[k] = v.to_rational().get_num();
        if (k > 1000)
            break;
    }
    return dims;
}

OrbifoldReport orbifold_character(const OrbifoldSource &src, long trunc_weight, const CtOptions &opts)
{
    auto start = std::chrono::steady_clock::now();
    auto &cache = ThetaCache::instance();
    auto [h0, m0] = cache.hits_and_misses();

    if (src.spec()) {
        const auto &L = src.spec()->base.lattice();
        if (!L.is_even() || L.det() != 1)
            throw Unsupported("orbifold characters need an even unimodular lattice");
    }
    OrbifoldReport rep;
    rep.central_charge = src.central_charge();
    rep.hat_order = src.hat_order();
    rep.cycle = src.cycle();
    rep.conformal_weight = src.conformal_weight();
    rep.type = src.type();
    rep.trunc_weight = trunc_weight;
    if (src.spec())
        rep.classification = lift_classification(*src.spec());
    else
        rep.classification = "fixed-point-free (cycle type only)";
    if (rep.type != 0)
        throw NotType0("lift of order " + std::to_string(rep.hat_order) + " has type " + std::to_string(rep.type) +
                       " (rho = " + to_string(rep.conformal_weight) + ")");

    long N = rep.hat_order;
    long c = rep.central_charge;
    Rational shift = make_rational(c, 24);
    Rational trunc = Rational(trunc_weight) - shift;

    PuiseuxSeries sum{PuiseuxSeries::Trunc(trunc)};
    for (long t : divisors(N)) {
        CtResult ct = compute_Ct(src, t, trunc, opts);
        sum += ct.value;
        if (t == N)
            rep.sector_weights[t] = 0;
        else if (ct.sector_exponent)
            rep.sector_weights[t] = *ct.sector_exponent + shift;
        rep.pieces.push_back(std::move(ct));
    }
    rep.character = sum * Cyclotomic(make_rational(1, N));
    rep.integral = assert_integral(rep.character.shift(shift));
    for (const auto &[e, v] : rep.integral.terms)
        if (v < 0)
            throw NonIntegerCoefficient("negative coefficient " + to_string(v) + " at weight " + std::to_string(e));
    rep.dims = extract_dims(rep.character, c);
    if (rep.dims[0] != 1)
        throw NonIntegerCoefficient("vacuum space has dimension " + to_string(rep.dims[0]));

    auto [h1, m1] = cache.hits_and_misses();
    rep.cache_hits = h1 - h0;
    rep.cache_misses = m1 - m0;
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

std::map<std::pair<long, long>, PuiseuxSeries> twisted_traces(const OrbifoldSource &src, const Rational &trunc)
{
    long N = src.hat_order();
    std::map<long, NumeratorFit> fits;
    for (long t : divisors(N)) {
        if (t == N)
            continue;
        if (src.spec() && src.fixed_rank(t) > 0 && src.w(t).order() > 2)
            throw Unsupported("twisted traces need w_" + std::to_string(t) + " of order at most 2");
        fits.emplace(t, fit_numerator(src, t, trunc));
    }
    PuiseuxSeries T00 = untwisted_trace(src, 0, trunc).value;

    std::map<std::pair<long, long>, PuiseuxSeries> out;
    for (long i = 0; i < N; ++i)
        for (long j = 0; j < N; ++j) {
            long t = gcd(gcd(i, j), N);
            if (t == N) {
                out[{i, j}] = T00;
                continue;
            }
            long m = N / t;
            long c = (i / t) % m, d = (j / t) % m;
            if (c == 0)
                c = m;
            while (gcd(c, d) != 1)
                d += m;
            UnimodularMatrix M = completion(c, d);
            const auto &f = fits.at(t);
            out[{i, j}] = transformed_Dt(src, t, f.space, f.coefficients, M, trunc) *
                          Cyclotomic(make_rational(1, euler_phi(m)));
        }
    return out;
}

std::map<std::pair<long, long>, PuiseuxSeries> module_characters(const OrbifoldSource &src, long trunc_weight)
{
    if (src.type() != 0)
        throw NotType0("module characters need a type 0 lift");
    long N = src.hat_order();
    Rational trunc = Rational(trunc_weight) - make_rational(src.central_charge(), 24);
    auto T = twisted_traces(src, trunc);
    std::map<std::pair<long, long>, PuiseuxSeries> out;
    for (long i = 0; i < N; ++i)
        for (long j = 0; j < N; ++j) {
            PuiseuxSeries s{PuiseuxSeries::Trunc(trunc)};
            for (long k = 0; k < N; ++k)
                s += T.at({i, k}) * Cyclotomic::zeta(N, mod(-j * k, N));
            out[{i, j}] = s * Cyclotomic(make_rational(1, N));
        }
    return out;
}

} // namespace orbq
