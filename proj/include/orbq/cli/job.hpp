#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "orbq/cli/report.hpp"
#include "orbq/error.hpp"

namespace orbq::cli
{

enum ExitCode : int
{
    kOk = 0,
    kFailure = 1,
    kNotType0 = 2,
    kNeedsCache = 3,
    kValidation = 4,
    kNetwork = 5,
};

int exit_code_for(const Error &e);

// {lattice, automorphism, beta?, cycle_type?, extremal_theta?, trunc_weight,
//  cache_dir?, report?, report_json?}.  "lattice": "extremal:48" together with
// "cycle_type" describes a fixed-point-free action known only by its cycle type.
struct JobSpec
{
    std::string lattice;
    std::string automorphism = "identity";
    std::vector<std::string> beta;
    std::string cycle_type;
    bool extremal_theta = false;
    long trunc_weight = 4;
    std::string cache_dir;
    std::string report;
    std::string report_json;
    // directory that relative paths refer to
    std::filesystem::path base;
};

JobSpec parse_job(const nlohmann::json &j, const std::filesystem::path &base = {});
JobSpec load_job(const std::filesystem::path &path);
nlohmann::json to_json(const JobSpec &job);

struct JobOutcome
{
    int exit_code = kOk;
    std::string message;
    std::string classification;
    std::optional<OrbifoldReport> report;
    RunContext context;
};

// Builds the orbifold source from a job.
OrbifoldSource build_source(const JobSpec &job, RunContext *ctx = nullptr);

// Runs the pipeline and writes the requested report files.  Never throws for
// library errors; they are mapped to exit codes.
JobOutcome run_job(const JobSpec &job);

} // namespace orbq::cli
