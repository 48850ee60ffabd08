#pragma once

// Append-only scan cache. One record per line:
//   p TAB n TAB s_p TAB good TAB sing TAB skipped TAB h0 TAB image_size
// preceded by a header line naming the surface hash the records belong to.
// finalize() rewrites the file sorted by (n, p) with duplicates collapsed.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ellrank/trace_engine.hpp"

namespace ellrank {

inline std::string format_cache_line(const TowerTraceRecord& r) {
  std::ostringstream os;
  os << r.trace.p << '\t' << r.n << '\t' << r.trace.s_p << '\t' << r.trace.fibers_good << '\t'
     << r.trace.fibers_singular << '\t' << r.trace.fibers_skipped << '\t' << r.h0 << '\t' << r.image_size;
  return os.str();
}

inline TowerTraceRecord parse_cache_line(const std::string& line) {
  std::istringstream is(line);
  TowerTraceRecord r;
  if (!(is >> r.trace.p >> r.n >> r.trace.s_p >> r.trace.fibers_good >> r.trace.fibers_singular >>
        r.trace.fibers_skipped >> r.h0 >> r.image_size))
    throw InputError("malformed scan cache line: '" + line + "'");
  std::string extra;
  if (is >> extra) throw InputError("malformed scan cache line (extra fields): '" + line + "'");
  return r;
}

class ScanCache {
 public:
  using Key = std::pair<u64, u64>;  // (n, p)

  ScanCache(std::filesystem::path path, std::uint64_t surface_hash) : path_(std::move(path)), hash_(surface_hash) {
    std::ifstream in(path_);
    if (!in) return;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (line.front() == '#') {
        if (line != header()) throw InputError("scan cache '" + path_.string() + "' belongs to a different surface");
        header_seen = true;
        continue;
      }
      if (!header_seen) throw InputError("scan cache '" + path_.string() + "' has no header line");
      auto r = parse_cache_line(line);
      records_[{r.n, r.trace.p}] = r;
    }
  }

  bool exists_on_disk() const { return std::filesystem::exists(path_); }

  std::optional<TowerTraceRecord> find(u64 n, u64 p) const {
    auto it = records_.find({n, p});
    if (it == records_.end()) return std::nullopt;
    return it->second;
  }

  // Records at level n, ascending in p.
  std::vector<TowerTraceRecord> level(u64 n) const {
    std::vector<TowerTraceRecord> out;
    for (auto it = records_.lower_bound({n, 0}); it != records_.end() && it->first.first == n; ++it)
      out.push_back(it->second);
    return out;
  }

  void put(const TowerTraceRecord& r) {
    auto [it, inserted] = records_.insert_or_assign({r.n, r.trace.p}, r);
    (void)it;
    (void)inserted;
    const bool fresh = !std::filesystem::exists(path_);
    std::ofstream out(path_, std::ios::app);
    if (!out) throw InputError("cannot write scan cache '" + path_.string() + "'");
    if (fresh) out << header() << '\n';
    out << format_cache_line(r) << '\n';
  }

  void finalize() const {
    std::ofstream out(path_, std::ios::trunc);
    if (!out) throw InputError("cannot write scan cache '" + path_.string() + "'");
    out << header() << '\n';
    for (const auto& [key, r] : records_) out << format_cache_line(r) << '\n';
  }

  std::size_t size() const { return records_.size(); }

 private:
  std::string header() const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "# ellrank scan cache surface=%016" PRIx64, hash_);
    return buf;
  }

  std::filesystem::path path_;
  std::uint64_t hash_;
  std::map<Key, TowerTraceRecord> records_;
};

}  // namespace ellrank
