#include "orbq/cli/fetch.hpp"

#include <cstdlib>
#include <regex>

#include "httplib.h"
#include "orbq/cli/io.hpp"
#include "orbq/error.hpp"
#include "orbq/lattice/enumerate.hpp"
#include "orbq/orbifold/traces.hpp"

namespace fs = std::filesystem;

namespace orbq::cli
{

namespace
{

const char *kDefaultTemplate = "https://www.math.rwth-aachen.de/~Gabriele.Nebe/LATTICES/{name}.gram";

std::size_t known_dim(const std::string &name)
{
    if (name == "P48n" || name == "P48p" || name == "P48q" || name == "P48m")
        return 48;
    if (name == "Gamma72")
        return 72;
    return 0;
}

} // namespace

CatalogueRef catalogue_ref(const std::string &name, const std::optional<fs::path> &cache_dir)
{
    CatalogueRef r;
    r.name = name;
    r.dim = known_dim(name);
    if (r.dim == 0)
        throw ValidationFailed("unknown catalogue lattice '" + name + "'");
    const char *env = std::getenv("ORBQ_CATALOGUE_URL");
    r.url_template = env && *env ? env : kDefaultTemplate;
    fs::path dir = cache_dir ? *cache_dir : fs::path(std::getenv("ORBQ_CACHE_DIR") ? std::getenv("ORBQ_CACHE_DIR") : ".orbq-cache");
    r.local_path = dir / "catalogue" / (name + ".gram");
    return r;
}

ValidationSummary validate_catalogue_lattice(const GramLattice &L, std::size_t dim)
{
    ValidationSummary s;
    if (L.dim() != dim)
        throw ValidationFailed("dimension " + std::to_string(L.dim()) + " != " + std::to_string(dim));
    if (!L.is_even())
        throw ValidationFailed("lattice is not even");
    if (L.det() != 1)
        throw ValidationFailed("det " + to_string(L.det()) + " != 1");
    long min = 2 + 2 * long(dim / 24);
    Rational below(min - 2);
    if (dim <= 48 && estimated_vector_count(L, below) < 1e4) {
        NormCounts c = enumerate_by_norm(L, below);
        for (const auto &[n, v] : c.counts)
            if (n > 0)
                throw ValidationFailed("vector of norm " + to_string(n) + " below the extremal bound " +
                                       std::to_string(min));
        s.min_norm_checked = true;
    }
    return s;
}

GramLattice parse_catalogue_text(const std::string &text, std::size_t dim)
{
    try {
        GramLattice L = parse_gram_text(text, "catalogue");
        if (L.dim() == dim)
            return L;
    } catch (const Error &) {
    }
    std::vector<long> ints;
    static const std::regex num(R"(-?\d+)");
    for (auto it = std::sregex_iterator(text.begin(), text.end(), num); it != std::sregex_iterator(); ++it)
        ints.push_back(std::stol(it->str()));
    std::size_t d2 = dim * dim;
    std::size_t off;
    if (ints.size() == d2)
        off = 0;
    else if (ints.size() == d2 + 1 && ints[0] == long(dim))
        off = 1;
    else
        throw ValidationFailed("catalogue text holds " + std::to_string(ints.size()) + " integers, expected " +
                               std::to_string(d2));
    RatMatrix g(dim, dim);
    for (std::size_t k = 0; k < d2; ++k)
        g(k / dim, k % dim) = Rational(ints[off + k]);
    try {
        return GramLattice(g);
    } catch (const Error &e) {
        throw ValidationFailed(e.what());
    }
}

fs::path fetch_lattice(const CatalogueRef &ref, bool refresh)
{
    if (!refresh && fs::exists(ref.local_path)) {
        GramLattice L = [&] {
            try {
                return parse_gram_file(ref.local_path);
            } catch (const Error &e) {
                throw ValidationFailed(e.what());
            }
        }();
        validate_catalogue_lattice(L, ref.dim);
        return ref.local_path;
    }
    std::string url = std::regex_replace(ref.url_template, std::regex(R"(\{name\})"), ref.name);
    static const std::regex parts(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(url, m, parts))
        throw NetworkError("malformed URL " + url);
    std::string host = m[1].str(), path = m[2].matched ? m[2].str() : "/";
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (host.rfind("https://", 0) == 0)
        throw NetworkError("built without TLS support, cannot fetch " + url);
#endif
    httplib::Client client(host);
    client.set_connection_timeout(10);
    client.set_read_timeout(60);
    client.set_follow_location(true);
    auto res = client.Get(path);
    if (!res)
        throw NetworkError("cannot reach " + url + ": " + httplib::to_string(res.error()));
    if (res->status != 200)
        throw NetworkError(url + " returned HTTP " + std::to_string(res->status));
    GramLattice L = parse_catalogue_text(res->body, ref.dim);
    validate_catalogue_lattice(L, ref.dim);
    write_file_atomic(ref.local_path, write_gram(L));
    return ref.local_path;
}

} // namespace orbq::cli
