#include <filesystem>
#include <iostream>
#include <iterator>
#include <map>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "orbq/autlift/lift.hpp"
#include "orbq/cli/fetch.hpp"
#include "orbq/cli/io.hpp"
#include "orbq/cli/job.hpp"
#include "orbq/error.hpp"
#include "orbq/lattice/enumerate.hpp"
#include "orbq/lattice/theta_cache.hpp"
#include "orbq/cli/report.hpp"

using namespace orbq;
using nlohmann::json;

namespace
{

bool g_json = false;

void emit(const json &j, const std::string &text)
{
    if (g_json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

int lattice_info(const std::string &path)
{
    GramLattice L = cli::resolve_lattice(path);
    json j;
    j["dim"] = L.dim();
    j["det"] = to_string(L.det());
    j["integral"] = L.is_integral();
    j["even"] = L.is_even();
    j["unimodular"] = L.is_integral() && L.det() == 1;
    std::string text = fmt::format("dim {}\ndet {}\nintegral {}\neven {}\nunimodular {}\n", L.dim(),
                                   to_string(L.det()), L.is_integral(), L.is_even(), L.is_integral() && L.det() == 1);
    if (L.is_even()) {
        j["level"] = level_of(L);
        text += fmt::format("level {}\n", level_of(L));
    }
    if (L.dim() > 0 && L.is_integral()) {
        // double the bound until a nonzero vector shows up
        std::map<Rational, std::uint64_t> shells;
        for (Rational bound = 2;; bound *= 2) {
            shells = cached_enumerate(L, bound).totals();
            if (shells.size() > 1)
                break;
        }
        Rational mn = std::next(shells.begin())->first;
        std::string theta;
        for (const auto &[n, v] : shells)
            theta += fmt::format(" {}:{}", to_string(n), v);
        j["min_norm"] = to_string(mn);
        j["shells"] = theta.substr(1);
        text += fmt::format("min norm {}\nshells (norm:count){}\n", to_string(mn), theta);
    }
    emit(j, text);
    return 0;
}

int aut_analyze(const std::string &gram, const std::string &aut, const std::vector<std::string> &beta_text)
{
    GramLattice L = cli::resolve_lattice(gram);
    LatticeAutomorphism nu(L, cli::resolve_automorphism(aut, L.dim()));
    LiftSpec spec = LiftSpec::standard(nu);
    if (!beta_text.empty()) {
        auto beta = cli::parse_rational_list(beta_text);
        if (beta.size() != L.dim())
            throw ValidationFailed("beta needs " + std::to_string(L.dim()) + " entries");
        spec = LiftSpec::with_beta(nu, beta);
    }
    json j;
    std::string text;
    j["order"] = nu.order();
    j["cycle_type"] = cycle_type_of(nu).to_string();
    j["order_doubling"] = has_order_doubling(nu);
    j["lift_order"] = spec.hat_order;
    j["classification"] = lift_classification(spec);
    text += fmt::format("order {}\ncycle type {}\norder doubling {}\nlift order {}\nclassification {}\n", nu.order(),
                        cycle_type_of(nu).to_string(), has_order_doubling(nu), spec.hat_order,
                        lift_classification(spec));
    if (!spec.is_standard()) {
        std::string b;
        for (const auto &x : spec.beta)
            b += (b.empty() ? "" : " ") + to_string(x);
        j["beta"] = b;
        text += "beta (projected) " + b + "\n";
    }
    Rational rho = conformal_weight(spec);
    long type = -1;
    try {
        type = orbifold_type(spec);
    } catch (const NonIntegralType &) {
    }
    j["conformal_weight"] = to_string(rho);
    j["type"] = type;
    text += fmt::format("conformal weight {}\ntype {}\n", to_string(rho), type < 0 ? "not integral" : std::to_string(type));
    json powers = json::array();
    for (const auto &p : power_profile(spec)) {
        powers.push_back({{"k", p.k},
                          {"cycle_type", p.cycle.to_string()},
                          {"fixed_rank", p.fixed.rank()},
                          {"w_order", p.w.order()}});
        text += fmt::format("  nu^{}: {}, fixed rank {}, w order {}\n", p.k, p.cycle.to_string(), p.fixed.rank(),
                            p.w.order());
    }
    j["powers"] = powers;
    if (type != 0) {
        try {
            auto found = suggest_type0_beta(nu);
            json sug = json::array();
            text += "type 0 shifts:\n";
            for (std::size_t i = 0; i < found.size() && i < 3; ++i) {
                std::string b;
                for (const auto &x : found[i].beta)
                    b += (b.empty() ? "" : " ") + to_string(x);
                sug.push_back({{"beta", b}, {"lift_order", found[i].hat_order}});
                text += fmt::format("  beta = {} (lift order {})\n", b, found[i].hat_order);
            }
            j["suggested_beta"] = sug;
        } catch (const Error &e) {
            text += std::string("no type 0 shift: ") + e.what() + "\n";
            j["suggested_beta"] = json::array();
        }
    }
    emit(j, text);
    return 0;
}

int run(const std::string &path, long trunc_weight)
{
    cli::JobSpec job = cli::load_job(path);
    if (trunc_weight > 0)
        job.trunc_weight = trunc_weight;
    cli::JobOutcome out = cli::run_job(job);
    if (out.exit_code != 0) {
        std::cerr << "error: " << out.message << "\n";
        return out.exit_code;
    }
    const auto &r = *out.report;
    if (g_json) {
        json j = cli::report_json(r, out.context);
        j["seconds"] = r.seconds;
        j["cache_hits"] = r.cache_hits;
        j["cache_misses"] = r.cache_misses;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << cli::report_text(r, out.context);
        std::cout << fmt::format("time {:.2f} s, theta cache hits {}, misses {}\n", r.seconds, r.cache_hits,
                                 r.cache_misses);
    }
    return 0;
}

int fetch(const std::string &name, bool refresh)
{
    auto ref = cli::catalogue_ref(name);
    auto path = cli::fetch_lattice(ref, refresh);
    emit(json{{"name", name}, {"path", path.string()}}, fmt::format("{} -> {}\n", name, path.string()));
    return 0;
}

int cache_ls()
{
    auto &c = ThetaCache::instance();
    json arr = json::array();
    std::string text;
    if (!c.directory())
        text += "no cache directory (set ORBQ_CACHE_DIR)\n";
    for (const auto &e : c.list()) {
        arr.push_back({{"file", e.file},
                       {"bound", to_string(e.bound)},
                       {"bytes", e.bytes},
                       {"valid", e.valid},
                       {"preimage", e.preimage}});
        text += fmt::format("{}  bound {}  {} bytes{}\n", std::filesystem::path(e.file).filename().string(), to_string(e.bound), e.bytes,
                            e.valid ? "" : "  (invalid)");
    }
    emit(arr, text);
    return 0;
}

int cache_gc(bool all)
{
    std::size_t n = ThetaCache::instance().gc(all);
    emit(json{{"removed", n}}, fmt::format("removed {} files\n", n));
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"orbq: characters of cyclic orbifolds of lattice vertex algebras"};
    app.require_subcommand(1);
    unsigned jobs = 0;
    long trunc_weight = 0;
    app.add_flag("--json", g_json, "machine readable output");
    app.add_option("--jobs", jobs, "enumeration threads");
    app.add_option("--trunc-weight", trunc_weight, "compute dims below this weight (run)")->check(CLI::PositiveNumber);

    std::string gram, aut, job_path, name;
    std::vector<std::string> beta;
    bool refresh = false, all = false;

    auto *lattice = app.add_subcommand("lattice", "lattice utilities");
    lattice->require_subcommand(1);
    auto *info = lattice->add_subcommand("info", "dimension, determinant, level, first shells");
    info->add_option("gram", gram, "Gram file or fixture:NAME")->required();

    auto *autc = app.add_subcommand("aut", "automorphism utilities");
    autc->require_subcommand(1);
    auto *analyze = autc->add_subcommand("analyze", "cycle type, lift order, conformal weight, type");
    analyze->add_option("gram", gram, "Gram file or fixture:NAME")->required();
    analyze->add_option("aut", aut, "matrix file, identity or minus_identity")->required();
    analyze->add_option("--beta", beta, "shift in lattice coordinates")->expected(1, -1);

    auto *runc = app.add_subcommand("run", "run a job file");
    runc->add_option("job", job_path, "job JSON")->required()->check(CLI::ExistingFile);

    auto *fetchc = app.add_subcommand("fetch", "download a catalogue lattice");
    fetchc->add_option("name", name, "P48n, P48p, P48q, P48m or Gamma72")->required();
    fetchc->add_flag("--refresh", refresh, "ignore the local copy");

    auto *cache = app.add_subcommand("cache", "theta cache");
    cache->require_subcommand(1);
    auto *ls = cache->add_subcommand("ls", "list entries");
    auto *gc = cache->add_subcommand("gc", "remove temporaries and unreadable entries");
    gc->add_flag("--all", all, "remove every entry");

    CLI11_PARSE(app, argc, argv);
    if (jobs > 0)
        set_default_threads(jobs);

    try {
        if (info->parsed())
            return lattice_info(gram);
        if (analyze->parsed())
            return aut_analyze(gram, aut, beta);
        if (runc->parsed())
            return run(job_path, trunc_weight);
        if (fetchc->parsed())
            return fetch(name, refresh);
        if (ls->parsed())
            return cache_ls();
        if (gc->parsed())
            return cache_gc(all);
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::exit_code_for(e);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::kFailure;
    }
    return cli::kFailure;
}
