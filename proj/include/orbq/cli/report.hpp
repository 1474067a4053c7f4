#pragma once

#include <string>

#include "json.hpp"
#include "orbq/orbifold/assembly.hpp"

namespace orbq::cli
{

struct RunContext
{
    std::string lattice;
    std::string automorphism;
    std::string beta;
};

// "q^{-2} + 48q^{-1} + 1224 + O(q)"; zero terms between the leading one and the
// tail are printed as 0q^k so the table layout can be compared directly.
std::string format_character(const PuiseuxSeries &ch, long c);

// Only deterministic content; timing and cache counters stay out.
std::string report_text(const OrbifoldReport &r, const RunContext &ctx);
nlohmann::json report_json(const OrbifoldReport &r, const RunContext &ctx);

} // namespace orbq::cli
