#include "hz/geom/classes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hz/error.hpp"
#include "hz/numeric.hpp"

namespace hz::geom {

double ClassTable::length_rate() const {
  double rate = std::numeric_limits<double>::infinity();
  for (const auto& r : records) rate = std::min(rate, r.length / static_cast<double>(r.word_length()));
  return rate;
}

double ClassTable::min_length() const { return records.empty() ? 0.0 : records.front().length; }

std::size_t ClassTable::primitive_count() const {
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const auto& r) { return r.is_primitive(); }));
}

double projected_class_count(int rank, int n_max) {
  double total = 0.0;
  for (int n = 1; n <= n_max; ++n) total += cyclically_reduced_count(rank, n) / n;
  return total;
}

namespace {

// True when `w` is strictly smaller than none of its rotations.
bool is_rotation_minimal(const std::vector<Letter>& w) {
  const std::size_t n = w.size();
  for (std::size_t r = 1; r < n; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      const Letter x = w[(i + r) % n];
      if (x < w[i]) return false;
      if (x > w[i]) break;
    }
  }
  return true;
}

ConjClassRecord record_from_canonical(std::vector<Letter> letters, const MobiusMap& m) {
  ConjClassRecord rec;
  rec.canonical_word.letters = std::move(letters);
  const std::size_t p = rec.canonical_word.primitive_period();
  rec.primitive_root.letters.assign(rec.canonical_word.letters.begin(),
                                    rec.canonical_word.letters.begin() + static_cast<std::ptrdiff_t>(p));
  rec.power = static_cast<int>(rec.canonical_word.size() / p);
  const double tr = m.trace();
  rec.length = length_from_trace(tr);
  rec.primitive_length = rec.length / rec.power;
  rec.sign = tr < 0.0 ? -1 : 1;
  return rec;
}

// Depth-first generation of rotation-minimal cyclically reduced words that
// start with the given prefix.
void enumerate_block(const SchottkyData& group, int n_max, const std::vector<Letter>& prefix,
                     std::vector<ConjClassRecord>& out) {
  const auto& letters = group.letters();
  std::vector<Letter> word = prefix;
  std::vector<MobiusMap> mats;
  MobiusMap m;
  for (Letter x : prefix) {
    m = m * group.letter_matrix(x);
    mats.push_back(m);
  }
  const Letter first = prefix.front();

  auto emit = [&] {
    if (word.size() >= 2 && word.front() == -word.back()) return;
    if (!is_rotation_minimal(word)) return;
    out.push_back(record_from_canonical(word, mats.back()));
  };

  // Explicit stack of next-letter indices.
  std::vector<std::size_t> next;
  emit();
  if (static_cast<int>(word.size()) >= n_max) return;
  next.push_back(0);
  while (!next.empty()) {
    std::size_t& idx = next.back();
    if (idx >= letters.size()) {
      next.pop_back();
      if (word.size() > prefix.size()) {
        word.pop_back();
        mats.pop_back();
      }
      continue;
    }
    const Letter x = letters[idx++];
    // Rotation-minimal words never contain a letter below the first one.
    if (x < first || x == -word.back()) continue;
    word.push_back(x);
    mats.push_back(mats.back() * group.letter_matrix(x));
    emit();
    if (static_cast<int>(word.size()) < n_max) {
      next.push_back(0);
    } else {
      word.pop_back();
      mats.pop_back();
    }
  }
}

}  // namespace

ClassTable enumerate_classes(const SchottkyData& group, int n_max, const EnumerationOptions& options) {
  if (n_max < 1) throw Error(ErrorKind::InputError, "n_max must be >= 1");
  const double projected = projected_class_count(group.rank(), n_max);
  if (projected > options.record_budget) {
    std::ostringstream os;
    os << "projected " << projected << " classes (sum over n <= " << n_max
       << " of ((2r-1)^n + 1 + (r-1)(1+(-1)^n))/n, r = " << group.rank() << ") exceeds the budget of "
       << options.record_budget;
    throw Error(ErrorKind::CapacityExceeded, os.str());
  }

  // Blocks keyed by the first two letters (or one for n_max = 1).
  std::vector<std::vector<Letter>> prefixes;
  for (Letter a : group.letters()) {
    if (n_max == 1) {
      prefixes.push_back({a});
      continue;
    }
    prefixes.push_back({a});  // the length-1 word itself
    for (Letter b : group.letters()) {
      if (b == -a || b < a) continue;
      prefixes.push_back({a, b});
    }
  }

  const int threads = options.threads > 0 ? options.threads : concurrency();
  auto blocks = parallel_map(prefixes.size(), threads, [&](std::size_t i) {
    std::vector<ConjClassRecord> recs;
    if (prefixes[i].size() == 1 && n_max > 1) {
      // Only the single-letter word; longer words belong to two-letter blocks.
      MobiusMap m = group.letter_matrix(prefixes[i][0]);
      recs.push_back(record_from_canonical(prefixes[i], m));
    } else {
      enumerate_block(group, n_max, prefixes[i], recs);
    }
    return recs;
  });

  ClassTable table;
  table.rank = group.rank();
  table.n_max = n_max;
  table.counts.assign(static_cast<std::size_t>(n_max) + 1, 0);
  for (auto& b : blocks) {
    for (auto& r : b) {
      ++table.counts[r.word_length()];
      table.records.push_back(std::move(r));
    }
  }
  std::sort(table.records.begin(), table.records.end(), [](const ConjClassRecord& x, const ConjClassRecord& y) {
    if (x.length != y.length) return x.length < y.length;
    return x.canonical_word < y.canonical_word;
  });
  return table;
}

ConjClassRecord make_class_record(const Word& w, const SchottkyData& group) {
  const Word c = w.cyclically_reduced().canonical_rotation();
  if (c.empty()) throw Error(ErrorKind::InputError, "the identity has no conjugacy-class record");
  return record_from_canonical(c.letters, word_matrix(c, group));
}

}  // namespace hz::geom
