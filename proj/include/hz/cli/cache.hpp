#pragma once

#include <filesystem>
#include <string>

#include "hz/geom/classes.hpp"
#include "hz/geom/schottky.hpp"

namespace hz::cli {

// Content-addressed store of class tables, one file per (group hash, n_max);
// format in docs/cache-format.md. A file that fails to parse or whose
// checksum does not match is a miss and gets overwritten.
class ClassTableCache {
 public:
  explicit ClassTableCache(std::filesystem::path root) : root_(std::move(root)) {}

  // HZ_CACHE_DIR, else $XDG_CACHE_HOME/hzeta, else $HOME/.cache/hzeta,
  // else ./.hzeta-cache.
  static std::filesystem::path default_root();

  struct Lookup {
    geom::ClassTable table;
    bool hit = false;
    bool persisted = false;  // false when the store could not be written
    std::string warning;     // CacheUnwritable diagnostic, if any
  };

  Lookup get(const geom::SchottkyData& group, int n_max, int threads = 0) const;

  std::filesystem::path path_for(const std::string& group_hash, int n_max) const;
  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
};

std::string serialize_table(const geom::ClassTable& table);
// Returns false when the text is not a complete, well-formed table.
bool parse_table(const std::string& text, geom::ClassTable& table);

}  // namespace hz::cli
