#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "orbq/lattice/gram_lattice.hpp"

namespace orbq::cli
{

struct CatalogueRef
{
    std::string name;
    std::size_t dim = 0;
    // "{name}" is replaced by the lattice name
    std::string url_template;
    std::filesystem::path local_path;
};

// Known extremal lattices (P48n, P48p, P48q, P48m, Gamma72).  The URL template
// comes from ORBQ_CATALOGUE_URL when set; files land in <cache>/catalogue.
CatalogueRef catalogue_ref(const std::string &name, const std::optional<std::filesystem::path> &cache_dir = {});

// Even, det 1, the advertised dimension, and minimal norm >= 2 + 2 floor(d/24)
// when the enumeration is small enough.  Throws ValidationFailed.
struct ValidationSummary
{
    bool min_norm_checked = false;
};
ValidationSummary validate_catalogue_lattice(const GramLattice &L, std::size_t dim);

// Accepts the canonical format or any text holding exactly d^2 integers
// (optionally preceded by d).
GramLattice parse_catalogue_text(const std::string &text, std::size_t dim);

// Uses the local copy when present (validated again), otherwise downloads it.
// Throws NetworkError or ValidationFailed.
std::filesystem::path fetch_lattice(const CatalogueRef &ref, bool refresh = false);

} // namespace orbq::cli
