#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hz/geom/schottky.hpp"
#include "hz/geom/word.hpp"

namespace hz::geom {

// One conjugacy class of the free group: the canonical (rotation-minimal,
// cyclically reduced) word w = root^power with its geodesic data.
struct ConjClassRecord {
  Word canonical_word;
  Word primitive_root;
  int power = 1;
  double length = 0.0;            // 2 arccosh(|tr|/2)
  double primitive_length = 0.0;  // length / power
  int sign = 1;                   // sign of the trace in SL(2,R)

  // vol(Gamma_gamma \ G_gamma) for the centraliser of a hyperbolic element.
  double weight() const { return primitive_length; }
  std::size_t word_length() const { return canonical_word.size(); }
  // Number of distinct cyclic rotations of the canonical word.
  std::size_t period() const { return primitive_root.size(); }
  bool is_primitive() const { return power == 1; }
};

struct ClassTable {
  std::string group_hash;
  int rank = 0;
  int n_max = 0;
  // Sorted by (length, canonical_word).
  std::vector<ConjClassRecord> records;
  // counts[n] = number of classes with word length n (counts[0] unused).
  std::vector<std::size_t> counts;

  // min over records of length / word_length: linear length growth rate.
  double length_rate() const;
  double min_length() const;
  std::size_t primitive_count() const;
};

struct EnumerationOptions {
  // Upper bound on the projected number of records.
  double record_budget = 2.0e7;
  int threads = 0;  // 0: process default
};

// Projected class count sum_{n<=n_max} (#cyclically reduced words of length n)/n.
double projected_class_count(int rank, int n_max);

// One record per conjugacy class with canonical word length <= n_max. Throws
// CapacityExceeded when the projection exceeds the budget.
ClassTable enumerate_classes(const SchottkyData& group, int n_max, const EnumerationOptions& options = {});

// Builds a record for an arbitrary word (cyclically reduced and canonicalised
// first). The empty class is rejected.
ConjClassRecord make_class_record(const Word& w, const SchottkyData& group);

}  // namespace hz::geom
