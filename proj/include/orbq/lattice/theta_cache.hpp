#pragma once

#include <atomic>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "orbq/lattice/enumerate.hpp"

namespace orbq
{

struct CacheEntryInfo
{
    std::string file;
    std::string preimage;
    Rational bound;
    std::uintmax_t bytes = 0;
    bool valid = true;
};

// Enumeration results keyed by a hash of (Gram, shift, phase).  Entries computed
// at a larger bound answer smaller requests.  Memory first, then the directory
// from ORBQ_CACHE_DIR when set.
class ThetaCache
{
public:
    static ThetaCache &instance();

    void set_directory(std::optional<std::filesystem::path> dir);
    std::optional<std::filesystem::path> directory() const;
    void clear_memory();

    static std::string preimage(const GramLattice &L, const EnumerateOptions &opts);
    static std::string key(const std::string &preimage);

    std::optional<NormCounts> lookup(const std::string &preimage, const Rational &bound);
    void store(const std::string &preimage, const Rational &bound, const NormCounts &counts);

    std::vector<CacheEntryInfo> list() const;
    // Counters for cached_enumerate since the last reset.
    std::pair<std::size_t, std::size_t> hits_and_misses() const { return {hits_, misses_}; }
    void count(bool hit) { (hit ? hits_ : misses_)++; }
    void reset_counters() { hits_ = misses_ = 0; }
    // Removes temporaries and unreadable entries (all entries with `everything`).
    std::size_t gc(bool everything);

private:
    ThetaCache();
    struct Entry
    {
        Rational bound;
        NormCounts counts;
    };
    mutable std::mutex mu_;
    std::optional<std::filesystem::path> dir_;
    std::unordered_map<std::string, Entry> memory_;
    std::atomic<std::size_t> hits_{0}, misses_{0};
};

// enumerate_by_norm through the cache.
NormCounts cached_enumerate(const GramLattice &L, const Rational &bound, const EnumerateOptions &opts = {});

} // namespace orbq
