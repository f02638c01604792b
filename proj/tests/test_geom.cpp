#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "hz/error.hpp"
#include "hz/geom/classes.hpp"
#include "hz/geom/group_io.hpp"
#include "hz/geom/hyperbolic.hpp"
#include "hz/geom/mobius.hpp"
#include "hz/geom/schottky.hpp"
#include "hz/geom/word.hpp"

using namespace hz;
using namespace hz::geom;
using hz::testing::rel_diff;

namespace {

double max_entry(const MobiusMap& m) {
  return std::max({std::abs(m.a), std::abs(m.b), std::abs(m.c), std::abs(m.d)});
}

double matrix_rel_diff(const MobiusMap& x, const MobiusMap& y) {
  const double d = std::max({std::abs(x.a - y.a), std::abs(x.b - y.b), std::abs(x.c - y.c), std::abs(x.d - y.d)});
  return d / std::max(max_entry(x), max_entry(y));
}

Word random_reduced_word(std::mt19937_64& rng, int rank, int length) {
  std::uniform_int_distribution<int> pick(1, 2 * rank);
  Word w;
  while (static_cast<int>(w.size()) < length) {
    int v = pick(rng);
    Letter x = static_cast<Letter>(v <= rank ? v : -(v - rank));
    if (!w.empty() && w.letters.back() == -x) continue;
    w.letters.push_back(x);
  }
  return w;
}

// All reduced words of length exactly n.
std::vector<Word> all_reduced_words(int rank, int n) {
  std::vector<Word> out{Word{}};
  for (int k = 0; k < n; ++k) {
    std::vector<Word> next;
    for (const auto& w : out) {
      for (int v = -rank; v <= rank; ++v) {
        if (v == 0) continue;
        Letter x = static_cast<Letter>(v);
        if (!w.empty() && w.letters.back() == -x) continue;
        Word u = w;
        u.letters.push_back(x);
        next.push_back(u);
      }
    }
    out = std::move(next);
  }
  return out;
}

// Brute-force conjugacy classes: every reduced word of length <= n,
// cyclically reduced, rotated to its minimal form, de-duplicated.
std::set<Word> brute_force_classes(int rank, int n) {
  std::set<Word> out;
  for (int len = 1; len <= n; ++len) {
    for (const auto& w : all_reduced_words(rank, len)) {
      Word c = w.cyclically_reduced();
      if (c.empty()) continue;
      Word best = c;
      for (std::size_t r = 1; r < c.size(); ++r) {
        Word rot;
        rot.letters.assign(c.letters.begin() + static_cast<long>(r), c.letters.end());
        rot.letters.insert(rot.letters.end(), c.letters.begin(), c.letters.begin() + static_cast<long>(r));
        best = std::min(best, rot);
      }
      out.insert(best);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("hyperbolic distance examples") {
  CHECK(hyperbolic_distance({0, 1}, {0, 1}) == doctest::Approx(0.0));
  CHECK(hyperbolic_distance({0, 1}, {0, std::exp(1.0)}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(hyperbolic_distance({0, 1}, {1, 1}) == doctest::Approx(0.9624236501192069).epsilon(1e-13));
  CHECK(cosh_distance({0, 1}, {1, 1}) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(hyperbolic_distance({0.3, 2}, {-1, 0.5}) == doctest::Approx(hyperbolic_distance({-1, 0.5}, {0.3, 2})));
  CHECK_THROWS_AS(hyperbolic_distance({0, 0}, {0, 1}), hz::Error);
  try {
    hyperbolic_distance({1, -1}, {0, 1});
  } catch (const hz::Error& e) {
    CHECK(e.kind() == ErrorKind::NonInteriorPoint);
  }
}

TEST_CASE("distance to a geodesic") {
  // The unit half-circle seen from 2i: the nearest point is i, at distance log 2.
  CHECK(distance_to_geodesic({0, 2}, 0.0, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(distance_to_geodesic({0, 1}, 0.0, 1.0) == doctest::Approx(0.0));
}

TEST_CASE("Mobius maps: trace conjugation invariance and determinant") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const MobiusMap g{3.0, 1.0, 2.0, 1.0};
  REQUIRE(g.det() == doctest::Approx(1.0));
  for (int k = 0; k < 50; ++k) {
    double a = u(rng), b = u(rng), c = u(rng);
    if (std::abs(a) < 0.1) a = 0.5;
    const double d = (1.0 + b * c) / a;
    const MobiusMap m{a, b, c, d};
    const MobiusMap conj = m * g * m.inverse();
    CHECK(conj.trace() == doctest::Approx(g.trace()).epsilon(1e-10));
    CHECK(std::abs(conj.det() - 1.0) <= 1e-12);
  }
}

TEST_CASE("length from the attracting fixed point multiplier") {
  const auto thin = hz::testing::thin2();
  std::mt19937_64 rng(11);
  for (int k = 0; k < 40; ++k) {
    Word w = random_reduced_word(rng, 2, 1 + k % 5).cyclically_reduced();
    if (w.empty()) continue;
    const MobiusMap m = word_matrix(w, thin);
    const auto fp = m.attracting_fixed_point();
    REQUIRE(fp);
    const double from_derivative = -std::log(std::abs(m.derivative(*fp)));
    CHECK(std::abs(from_derivative - m.translation_length()) <= 1e-9 * std::max(1.0, m.translation_length()));
  }
}

TEST_CASE("build_schottky: cylinder template") {
  const auto cyl = hz::testing::cylinder(2.0);
  REQUIRE(cyl.rank() == 1);
  const auto& g = cyl.generators()[0];
  CHECK(g.trace() == doctest::Approx(2.0 * std::cosh(1.0)).epsilon(1e-15));
  CHECK(g.translation_length() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(cyl.report().ok());
  // Axis point is displaced by exactly the translation length.
  const cplx x = cyl.base_point();
  CHECK(hyperbolic_distance(x, g.apply(x)) == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("build_schottky: validation failures") {
  // Touching intervals: spacing 2, half-width 1.
  try {
    build_schottky(symmetric_spec(2, 2.0, 1.0));
    FAIL("expected OverlappingIntervals");
  } catch (const hz::Error& e) {
    CHECK(e.kind() == ErrorKind::OverlappingIntervals);
  }
  // Parabolic generator with otherwise disjoint intervals.
  GroupSpec spec;
  spec.rank = 1;
  spec.generators = {MobiusMap{1.0, 1.0, 0.0, 1.0}};
  spec.intervals = {{{1.0, 2.0}, {-2.0, -1.0}}};
  try {
    build_schottky(spec);
    FAIL("expected NonHyperbolicGenerator");
  } catch (const hz::Error& e) {
    CHECK(e.kind() == ErrorKind::NonHyperbolicGenerator);
  }
  // A hyperbolic generator that does not pair the given intervals.
  spec.generators = {MobiusMap{2.0, 0.0, 0.0, 0.5}};
  try {
    build_schottky(spec);
    FAIL("expected InvalidGroup");
  } catch (const hz::Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidGroup);
  }
}

TEST_CASE("symmetric template validates and pairs its intervals") {
  const auto g = build_schottky(symmetric_spec(2, 2.0, 0.3));
  CHECK(g.report().ok());
  for (const auto& m : g.generators()) CHECK(m.is_hyperbolic());
  CHECK(g.in_fundamental_domain(g.base_point()));
  // Reduction lands in the closed domain and preserves orbit membership.
  const cplx deep = word_matrix(parse_word("1,2,-1"), g).apply(g.base_point());
  CHECK_FALSE(g.in_fundamental_domain(deep));
  const cplx back = g.reduce_to_domain(deep);
  CHECK(std::abs(back - g.base_point()) < 1e-9);
}

TEST_CASE("words: composition consistency and inverses") {
  const auto g = hz::testing::thin2();
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    const Word w = random_reduced_word(rng, 2, 1 + k % 10);
    const MobiusMap l = word_matrix(w, g);
    const MobiusMap r = word_matrix_right(w, g);
    CHECK(matrix_rel_diff(l, r) <= 1e-10);
    CHECK(matrix_rel_diff(word_matrix(w.inverse(), g), l.inverse()) <= 1e-10);
    CHECK(w.is_reduced());
  }
  // Short words keep unit determinant to 1e-12.
  for (int k = 0; k < 50; ++k) {
    const MobiusMap m = word_matrix(random_reduced_word(rng, 2, 1 + k % 2), g);
    CHECK(std::abs(m.det() - 1.0) <= 1e-12);
  }
  CHECK(Word{{1, -1, 2}}.reduced() == Word{{2}});
  CHECK(Word{{1, 2, -1}}.cyclically_reduced() == Word{{2}});
  CHECK(parse_word(to_string(Word{{-2, 1, 1}})) == Word{{-2, 1, 1}});
}

TEST_CASE("necklace canonicalisation is rotation invariant and minimal") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 300; ++k) {
    Word w = random_reduced_word(rng, 3, 1 + k % 9).cyclically_reduced();
    if (w.empty()) continue;
    const Word c = w.canonical_rotation();
    for (std::size_t r = 0; r < w.size(); ++r) {
      Word rot;
      rot.letters.assign(w.letters.begin() + static_cast<long>(r), w.letters.end());
      rot.letters.insert(rot.letters.end(), w.letters.begin(), w.letters.begin() + static_cast<long>(r));
      CHECK(rot.canonical_rotation() == c);
      CHECK(c <= rot);
    }
  }
}

TEST_CASE("reduced and cyclically reduced word counts") {
  for (int n = 1; n <= 6; ++n) {
    const auto words = all_reduced_words(2, n);
    CHECK(static_cast<double>(words.size()) == reduced_word_count(2, n));
    const auto cyc = std::count_if(words.begin(), words.end(), [](const Word& w) { return w.is_cyclically_reduced(); });
    CHECK(static_cast<double>(cyc) == cyclically_reduced_count(2, n));
  }
}

TEST_CASE("enumerate_classes: cylinder and rank-2 examples") {
  const auto cyl = hz::testing::cylinder(2.0);
  const auto t = enumerate_classes(cyl, 3);
  REQUIRE(t.records.size() == 6);
  std::set<Word> words;
  for (const auto& r : t.records) words.insert(r.canonical_word);
  for (int m : {1, 2, 3}) {
    CHECK(words.count(Word{{1}}.power(m)) == 1);
    CHECK(words.count(Word{{1}}.power(-m)) == 1);
  }
  for (const auto& r : t.records) {
    CHECK(r.length == doctest::Approx(2.0 * r.power).epsilon(1e-12));
    if (r.canonical_word == Word{{1, 1}}) {
      CHECK(r.power == 2);
      CHECK(r.primitive_root == Word{{1}});
    }
  }

  const auto thin = hz::testing::thin2();
  const auto t1 = enumerate_classes(thin, 1);
  CHECK(t1.records.size() == 4);
  for (const auto& r : t1.records) CHECK(r.is_primitive());
}

TEST_CASE("class table equals brute-force enumeration for n <= 6") {
  const auto thin = hz::testing::thin2();
  for (int n = 1; n <= 6; ++n) {
    const auto table = enumerate_classes(thin, n);
    std::set<Word> got;
    for (const auto& r : table.records) got.insert(r.canonical_word);
    CHECK(got.size() == table.records.size());
    CHECK(got == brute_force_classes(2, n));
  }
  // Rank 2, n_max = 4 against the brute-force oracle over <= 160 words.
  CHECK(enumerate_classes(thin, 4).records.size() == brute_force_classes(2, 4).size());
}

TEST_CASE("class table invariants") {
  const auto thin = hz::testing::thin2();
  const auto table = enumerate_classes(thin, 8);
  std::map<Word, const ConjClassRecord*> by_word;
  for (const auto& r : table.records) by_word[r.canonical_word] = &r;

  // Sum of periods over classes of length n = number of cyclically reduced words.
  std::vector<double> sequences(9, 0.0);
  for (const auto& r : table.records) sequences[r.word_length()] += static_cast<double>(r.period());
  for (int n = 1; n <= 8; ++n) CHECK(sequences[n] == cyclically_reduced_count(2, n));

  const double min_gen = thin.min_translation_length();
  for (const auto& r : table.records) {
    // Inverse class with identical data.
    const Word inv = r.canonical_word.inverse().canonical_rotation();
    REQUIRE(by_word.count(inv) == 1);
    const auto* ri = by_word[inv];
    CHECK(std::abs(ri->length - r.length) <= 1e-9 * r.length);
    CHECK(ri->sign == r.sign);
    CHECK(ri->power == r.power);
    // Powers scale length.
    if (r.power > 1) {
      const auto& root = *by_word.at(r.primitive_root);
      CHECK(std::abs(r.length - r.power * root.length) <= 1e-9 * r.length);
      CHECK(r.sign == (r.power % 2 == 0 ? 1 : root.sign));
    }
    CHECK(r.length >= min_gen * (1.0 - 1e-12));
    CHECK(r.canonical_word == r.primitive_root.power(r.power));
  }
  CHECK(std::is_sorted(table.records.begin(), table.records.end(), [](const auto& x, const auto& y) {
    return x.length < y.length || (x.length == y.length && x.canonical_word < y.canonical_word);
  }));
}

TEST_CASE("class enumeration is independent of the worker count") {
  const auto thin = hz::testing::thin2();
  EnumerationOptions one;
  one.threads = 1;
  EnumerationOptions four;
  four.threads = 4;
  const auto a = enumerate_classes(thin, 9, one);
  const auto b = enumerate_classes(thin, 9, four);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].canonical_word == b.records[i].canonical_word);
    CHECK(a.records[i].length == b.records[i].length);
  }
}

TEST_CASE("capacity budget") {
  const auto thin = hz::testing::thin2();
  EnumerationOptions tiny;
  tiny.record_budget = 100.0;
  try {
    enumerate_classes(thin, 10, tiny);
    FAIL("expected CapacityExceeded");
  } catch (const hz::Error& e) {
    CHECK(e.kind() == ErrorKind::CapacityExceeded);
  }
}

TEST_CASE("group file round trip and content hash") {
  const auto spec = load_group_spec(hz::testing::fixture_dir() / "thin2.json");
  const auto g = build_schottky(spec);
  const auto text = group_to_json(g);
  const auto g2 = build_schottky(parse_group_spec(text));
  CHECK(content_hash(g) == content_hash(g2));
  CHECK(content_hash(g) != content_hash(hz::testing::cylinder()));
  CHECK_THROWS_AS(parse_group_spec("{not json"), hz::Error);
  CHECK_THROWS_AS(parse_group_spec(R"({"rank": 1, "intervals": [{"plus": ["1", "x"], "minus": ["-2", "-1"]}]})"),
                  hz::Error);
}
