#include "orbq/cli/job.hpp"

#include "orbq/cli/io.hpp"
#include "orbq/error.hpp"
#include "orbq/lattice/theta_cache.hpp"

namespace fs = std::filesystem;

namespace orbq::cli
{

int exit_code_for(const Error &e)
{
    const std::string &k = e.kind();
    if (k == "NotType0")
        return kNotType0;
    if (k == "NeedsCache")
        return kNeedsCache;
    if (k == "NetworkError")
        return kNetwork;
    if (k == "ValidationFailed" || k == "ParseError" || k == "NotSymmetric" || k == "NotPositiveDefinite" ||
        k == "NotEven" || k == "NotAnIsometry")
        return kValidation;
    return kFailure;
}

JobSpec parse_job(const nlohmann::json &j, const fs::path &base)
{
    if (!j.is_object())
        throw ParseError("job must be a JSON object");
    static const std::vector<std::string> known = {"lattice",   "automorphism", "beta",   "cycle_type",
                                                   "extremal_theta", "trunc_weight", "cache_dir", "report",
                                                   "report_json"};
    for (const auto &[key, value] : j.items()) {
        (void)value;
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ParseError("unknown job field '" + key + "'");
    }
    JobSpec s;
    s.base = base;
    try {
        s.lattice = j.at("lattice").get<std::string>();
        s.automorphism = j.value("automorphism", s.automorphism);
        if (j.contains("beta")) {
            for (const auto &b : j.at("beta"))
                s.beta.push_back(b.is_string() ? b.get<std::string>() : b.dump());
        }
        s.cycle_type = j.value("cycle_type", "");
        s.extremal_theta = j.value("extremal_theta", false);
        s.trunc_weight = j.value("trunc_weight", 4L);
        s.cache_dir = j.value("cache_dir", "");
        s.report = j.value("report", "");
        s.report_json = j.value("report_json", "");
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("job: ") + e.what());
    }
    if (s.trunc_weight < 1)
        throw ValidationFailed("trunc_weight must be at least 1");
    return s;
}

JobSpec load_job(const fs::path &path)
{
    std::string text = read_file(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return parse_job(j, path.parent_path());
}

nlohmann::json to_json(const JobSpec &s)
{
    nlohmann::json j;
    j["lattice"] = s.lattice;
    j["automorphism"] = s.automorphism;
    if (!s.beta.empty())
        j["beta"] = s.beta;
    if (!s.cycle_type.empty())
        j["cycle_type"] = s.cycle_type;
    if (s.extremal_theta)
        j["extremal_theta"] = true;
    j["trunc_weight"] = s.trunc_weight;
    if (!s.cache_dir.empty())
        j["cache_dir"] = s.cache_dir;
    if (!s.report.empty())
        j["report"] = s.report;
    if (!s.report_json.empty())
        j["report_json"] = s.report_json;
    return j;
}

OrbifoldSource build_source(const JobSpec &job, RunContext *ctx)
{
    RunContext local;
    RunContext &c = ctx ? *ctx : local;
    c.lattice = job.lattice;
    const std::string ext = "extremal:";
    if (job.lattice.rfind(ext, 0) == 0) {
        long d = std::stol(job.lattice.substr(ext.size()));
        if (job.cycle_type.empty())
            throw ValidationFailed("an extremal:" + std::to_string(d) + " job needs a cycle_type");
        CycleType C = CycleType::parse(job.cycle_type);
        if (C.degree() != d)
            throw ValidationFailed("cycle type " + C.to_string() + " has degree " + std::to_string(C.degree()) +
                                   ", not " + std::to_string(d));
        c.automorphism = "fixed-point-free, cycle type " + C.to_string();
        return OrbifoldSource::fixed_point_free(C);
    }
    GramLattice L = resolve_lattice(job.lattice, job.base);
    IntMatrix A = resolve_automorphism(job.automorphism, L.dim(), job.base);
    LatticeAutomorphism nu(L, A);
    c.automorphism = job.automorphism;
    if (!job.cycle_type.empty() && CycleType::parse(job.cycle_type) != cycle_type_of(nu))
        throw ValidationFailed("automorphism has cycle type " + cycle_type_of(nu).to_string() + ", job says " +
                               job.cycle_type);
    LiftSpec spec = LiftSpec::standard(nu);
    if (!job.beta.empty()) {
        auto beta = parse_rational_list(job.beta);
        if (beta.size() != L.dim())
            throw ValidationFailed("beta has " + std::to_string(beta.size()) + " entries, lattice dimension is " +
                                   std::to_string(L.dim()));
        spec = LiftSpec::with_beta(nu, beta);
        std::string b;
        for (const auto &x : spec.beta)
            b += (b.empty() ? "" : " ") + to_string(x);
        c.beta = b;
    }
    return OrbifoldSource::from_lift(spec, job.extremal_theta);
}

JobOutcome run_job(const JobSpec &job)
{
    JobOutcome out;
    try {
        if (!job.cache_dir.empty()) {
            fs::path d = job.cache_dir;
            if (d.is_relative() && !job.base.empty())
                d = job.base / d;
            ThetaCache::instance().set_directory(d);
        }
        OrbifoldSource src = build_source(job, &out.context);
        out.classification = src.spec() ? lift_classification(*src.spec()) : "fixed-point-free (cycle type only)";
        OrbifoldReport r = orbifold_character(src, job.trunc_weight);
        auto target = [&](const std::string &p) {
            fs::path q = p;
            return q.is_relative() && !job.base.empty() ? job.base / q : q;
        };
        if (!job.report.empty())
            write_file_atomic(target(job.report), report_text(r, out.context));
        if (!job.report_json.empty())
            write_file_atomic(target(job.report_json), report_json(r, out.context).dump(2) + "\n");
        out.report = std::move(r);
    } catch (const Error &e) {
        out.exit_code = exit_code_for(e);
        out.message = e.what();
    } catch (const std::exception &e) {
        out.exit_code = kFailure;
        out.message = e.what();
    }
    return out;
}

} // namespace orbq::cli
