#include "hz/cli/cache.hpp"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "hz/error.hpp"
#include "hz/geom/group_io.hpp"
#include "hz/geom/word.hpp"

namespace hz::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kMagic = "hzeta-classes";
constexpr int kFormatVersion = 1;

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string body_of(const geom::ClassTable& t) {
  std::string body;
  body.reserve(t.records.size() * 64);
  for (const auto& r : t.records) {
    body += geom::to_string(r.canonical_word);
    body += ' ' + std::to_string(r.power) + ' ' + g17(r.length) + ' ' + g17(r.primitive_length) + ' ' +
            std::to_string(r.sign) + '\n';
  }
  return body;
}

}  // namespace

fs::path ClassTableCache::default_root() {
  if (const char* dir = std::getenv("HZ_CACHE_DIR"); dir && *dir) return dir;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return fs::path(xdg) / "hzeta";
  if (const char* home = std::getenv("HOME"); home && *home) return fs::path(home) / ".cache" / "hzeta";
  return ".hzeta-cache";
}

fs::path ClassTableCache::path_for(const std::string& group_hash, int n_max) const {
  return root_ / (group_hash + "-n" + std::to_string(n_max) + ".classes");
}

std::string serialize_table(const geom::ClassTable& t) {
  const std::string body = body_of(t);
  std::ostringstream head;
  head << kMagic << ' ' << kFormatVersion << ' ' << t.group_hash << ' ' << t.rank << ' ' << t.n_max << ' '
       << t.records.size() << ' ' << fnv1a_hex(body) << '\n';
  return head.str() + body;
}

bool parse_table(const std::string& text, geom::ClassTable& out) {
  const auto eol = text.find('\n');
  if (eol == std::string::npos) return false;
  std::istringstream head(text.substr(0, eol));
  std::string magic, hash, checksum;
  int version = 0, rank = 0, n_max = 0;
  std::size_t count = 0;
  if (!(head >> magic >> version >> hash >> rank >> n_max >> count >> checksum)) return false;
  if (magic != kMagic || version != kFormatVersion || rank < 1 || n_max < 1) return false;
  const std::string body = text.substr(eol + 1);
  if (fnv1a_hex(body) != checksum) return false;

  geom::ClassTable t;
  t.group_hash = hash;
  t.rank = rank;
  t.n_max = n_max;
  t.counts.assign(static_cast<std::size_t>(n_max) + 1, 0);
  t.records.reserve(count);
  std::istringstream lines(body);
  std::string word;
  try {
    geom::ConjClassRecord r;
    while (lines >> word >> r.power >> r.length >> r.primitive_length >> r.sign) {
      r.canonical_word = geom::parse_word(word);
      const std::size_t n = r.canonical_word.size();
      if (n == 0 || n > static_cast<std::size_t>(n_max) || r.power < 1 || n % r.power != 0) return false;
      r.primitive_root.letters.assign(r.canonical_word.letters.begin(),
                                      r.canonical_word.letters.begin() + static_cast<std::ptrdiff_t>(n / r.power));
      ++t.counts[n];
      t.records.push_back(r);
    }
  } catch (const Error&) {
    return false;
  }
  if (!lines.eof() || t.records.size() != count) return false;
  out = std::move(t);
  return true;
}

ClassTableCache::Lookup ClassTableCache::get(const geom::SchottkyData& group, int n_max, int threads) const {
  Lookup res;
  const std::string hash = geom::content_hash(group);
  const fs::path file = path_for(hash, n_max);
  {
    std::ifstream in(file, std::ios::binary);
    if (in) {
      std::ostringstream buf;
      buf << in.rdbuf();
      geom::ClassTable t;
      if (parse_table(buf.str(), t) && t.group_hash == hash && t.n_max == n_max && t.rank == group.rank()) {
        res.table = std::move(t);
        res.hit = true;
        res.persisted = true;
        return res;
      }
    }
  }
  geom::EnumerationOptions opt;
  opt.threads = threads;
  res.table = geom::enumerate_classes(group, n_max, opt);
  res.table.group_hash = hash;

  // Write a sibling temp file and rename it over the target, so readers
  // never see a partial table.
  std::error_code ec;
  fs::create_directories(root_, ec);
  const fs::path tmp = file.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (out) out << serialize_table(res.table);
    if (!out || !out.good()) ec = std::make_error_code(std::errc::io_error);
  }
  if (!ec) fs::rename(tmp, file, ec);
  if (ec) {
    fs::remove(tmp, ec);
    res.warning = std::string(to_string(ErrorKind::CacheUnwritable)) + ": cannot write " + file.string() +
                  "; continuing with the in-memory table (set --cache-dir or HZ_CACHE_DIR)";
    return res;
  }
  res.persisted = true;
  return res;
}

}  // namespace hz::cli
