#include "orbq/lattice/theta_cache.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>
#include <unistd.h>

namespace orbq
{

namespace fs = std::filesystem;

namespace
{

std::uint64_t fnv1a(const std::string &s)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

NormCounts restrict_to(const NormCounts &c, const Rational &bound)
{
    NormCounts out;
    out.phase_order = c.phase_order;
    for (const auto &[n, v] : c.counts)
        if (n <= bound)
            out.counts.emplace(n, v);
    return out;
}

struct Parsed
{
    std::string preimage;
    Rational bound;
    NormCounts counts;
};

std::optional<Parsed> read_file(const fs::path &file)
{
    std::ifstream in(file);
    if (!in)
        return std::nullopt;
    Parsed p;
    std::string line;
    bool have_key = false, have_bound = false;
    try {
        while (std::getline(in, line)) {
            if (line.empty())
                continue;
            if (line[0] == '#') {
                std::istringstream h(line.substr(1));
                std::string tag;
                h >> tag;
                if (tag == "key") {
                    std::getline(h >> std::ws, p.preimage);
                    have_key = true;
                } else if (tag == "bound") {
                    std::string b;
                    h >> b;
                    p.bound = parse_rational(b);
                    have_bound = true;
                } else if (tag == "phase_order") {
                    h >> p.counts.phase_order;
                }
                continue;
            }
            std::istringstream row(line);
            std::string n;
            row >> n;
            std::vector<std::uint64_t> v(p.counts.phase_order);
            for (auto &c : v)
                if (!(row >> c))
                    return std::nullopt;
            p.counts.counts[parse_rational(n)] = v;
        }
    } catch (const std::exception &) {
        return std::nullopt;
    }
    if (!have_key || !have_bound)
        return std::nullopt;
    return p;
}

} // namespace

ThetaCache::ThetaCache()
{
    if (const char *env = std::getenv("ORBQ_CACHE_DIR"); env && *env)
        dir_ = fs::path(env);
}

ThetaCache &ThetaCache::instance()
{
    static ThetaCache cache;
    return cache;
}

void ThetaCache::set_directory(std::optional<fs::path> dir)
{
    std::lock_guard<std::mutex> lock(mu_);
    dir_ = std::move(dir);
}

std::optional<fs::path> ThetaCache::directory() const
{
    std::lock_guard<std::mutex> lock(mu_);
    return dir_;
}

void ThetaCache::clear_memory()
{
    std::lock_guard<std::mutex> lock(mu_);
    memory_.clear();
}

std::string ThetaCache::preimage(const GramLattice &L, const EnumerateOptions &opts)
{
    std::ostringstream os;
    os << "gram[" << L.dim() << "]=";
    for (std::size_t i = 0; i < L.dim(); ++i)
        for (std::size_t j = i; j < L.dim(); ++j)
            os << to_string(L.gram()(i, j)) << ',';
    os << ";shift=";
    for (const auto &v : opts.shift)
        os << to_string(frac(v)) << ',';
    os << ";phase=";
    if (opts.phase)
        for (const auto &v : opts.phase->values)
            os << to_string(v) << ',';
    return os.str();
}

std::string ThetaCache::key(const std::string &preimage)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(preimage)));
    return buf;
}

std::optional<NormCounts> ThetaCache::lookup(const std::string &pre, const Rational &bound)
{
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = memory_.find(pre); it != memory_.end() && it->second.bound >= bound)
        return restrict_to(it->second.counts, bound);
    if (!dir_)
        return std::nullopt;
    auto parsed = read_file(*dir_ / (key(pre) + ".theta"));
    if (!parsed || parsed->preimage != pre || parsed->bound < bound)
        return std::nullopt;
    memory_[pre] = Entry{parsed->bound, parsed->counts};
    return restrict_to(parsed->counts, bound);
}

void ThetaCache::store(const std::string &pre, const Rational &bound, const NormCounts &counts)
{
    std::lock_guard<std::mutex> lock(mu_);
    auto &e = memory_[pre];
    if (e.counts.counts.empty() || e.bound < bound)
        e = Entry{bound, counts};
    if (!dir_)
        return;
    std::error_code ec;
    fs::create_directories(*dir_, ec);
    fs::path final_path = *dir_ / (key(pre) + ".theta");
    std::ostringstream tmpname;
    tmpname << key(pre) << ".tmp." << ::getpid() << "." << std::hash<std::thread::id>{}(std::this_thread::get_id());
    fs::path tmp = *dir_ / tmpname.str();
    {
        std::ofstream out(tmp);
        if (!out)
            return; // an unwritable cache only costs time
        out << "# key " << pre << "\n# bound " << to_string(bound) << "\n# phase_order " << counts.phase_order
            << "\n";
        for (const auto &[n, v] : counts.counts) {
            out << to_string(n);
            for (auto c : v)
                out << ' ' << c;
            out << '\n';
        }
    }
    fs::rename(tmp, final_path, ec);
    if (ec)
        fs::remove(tmp, ec);
}

std::vector<CacheEntryInfo> ThetaCache::list() const
{
    std::vector<CacheEntryInfo> out;
    auto dir = directory();
    if (!dir || !fs::is_directory(*dir))
        return out;
    for (const auto &de : fs::directory_iterator(*dir)) {
        if (!de.is_regular_file())
            continue;
        CacheEntryInfo info;
        info.file = de.path().filename().string();
        info.bytes = de.file_size();
        auto parsed = de.path().extension() == ".theta" ? read_file(de.path()) : std::nullopt;
        if (parsed) {
            info.preimage = parsed->preimage;
            info.bound = parsed->bound;
        } else {
            info.valid = false;
        }
        out.push_back(info);
    }
    std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) { return a.file < b.file; });
    return out;
}

std::size_t ThetaCache::gc(bool everything)
{
    std::size_t removed = 0;
    for (const auto &e : list()) {
        if (!everything && e.valid)
            continue;
        std::error_code ec;
        if (fs::remove(*directory() / e.file, ec))
            ++removed;
    }
    if (everything)
        clear_memory();
    return removed;
}

NormCounts cached_enumerate(const GramLattice &L, const Rational &bound, const EnumerateOptions &opts)
{
    auto &cache = ThetaCache::instance();
    std::string pre = ThetaCache::preimage(L, opts);
    if (auto hit = cache.lookup(pre, bound)) {
        cache.count(true);
        return *hit;
    }
    cache.count(false);
    NormCounts c = enumerate_by_norm(L, bound, opts);
    cache.store(pre, bound, c);
    return c;
}

} // namespace orbq
