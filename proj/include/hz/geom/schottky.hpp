#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hz/conventions.hpp"
#include "hz/geom/mobius.hpp"

namespace hz::geom {

// A letter is +i for generator g_i and -i for its inverse, 1 <= i <= rank.
using Letter = std::int8_t;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double center() const { return 0.5 * (lo + hi); }
  double radius() const { return 0.5 * (hi - lo); }
  bool contains_open(double x) const { return x > lo && x < hi; }
};

// Generator g_i maps the exterior of `minus` onto the interior of `plus`.
struct IntervalPair {
  Interval plus;
  Interval minus;
};

struct CylinderTemplate {
  double length = 2.0;
};

// 2r intervals of half-width `half_width` centred at (j - (2r-1)/2) * spacing;
// interval j pairs with interval j + r (minus side first).
struct SymmetricTemplate {
  int rank = 2;
  double spacing = 2.0;
  double half_width = 0.3;
};

struct GroupSpec {
  int rank = 0;
  std::vector<MobiusMap> generators;
  std::vector<IntervalPair> intervals;
  std::optional<cplx> base_point;
  std::optional<CylinderTemplate> cylinder;
  std::optional<SymmetricTemplate> symmetric;
};

struct ValidationReport {
  std::vector<std::pair<std::string, bool>> checks;

  bool ok() const;
  std::string summary() const;
};

// Validated convex-cocompact Schottky group in the upper half-plane. All
// intervals lie in R (none contains infinity); the fundamental domain is the
// exterior of the 2r half-disks over the intervals.
class SchottkyData {
 public:
  int rank() const { return rank_; }
  const std::vector<MobiusMap>& generators() const { return generators_; }
  const std::vector<IntervalPair>& intervals() const { return intervals_; }
  cplx base_point() const { return base_point_; }
  const ValidationReport& report() const { return report_; }
  bool is_cylinder() const { return cylinder_; }

  // Matrix of a single letter.
  const MobiusMap& letter_matrix(Letter x) const;

  // Interval (half-disk footprint) whose interior is the image of the
  // fundamental domain under the letter: plus side for +i, minus for -i.
  const Interval& letter_interval(Letter x) const;

  // Letters in the canonical order -r < ... < -1 < 1 < ... < r.
  const std::vector<Letter>& letters() const { return letters_; }

  // True when z lies outside every open half-disk.
  bool in_fundamental_domain(cplx z) const;

  // Applies generators until z lands in the closed fundamental domain;
  // returns the reduced point.
  cplx reduce_to_domain(cplx z) const;

  double min_translation_length() const;

  friend SchottkyData build_schottky(const GroupSpec& spec);

 private:
  int rank_ = 0;
  std::vector<MobiusMap> generators_;
  std::vector<MobiusMap> inverse_generators_;
  std::vector<IntervalPair> intervals_;
  std::vector<Letter> letters_;
  cplx base_point_{0.0, 1.0};
  ValidationReport report_;
  bool cylinder_ = false;
};

// Builds and validates a group from explicit data or one of the templates.
// Throws OverlappingIntervals, NonHyperbolicGenerator or InvalidGroup.
SchottkyData build_schottky(const GroupSpec& spec);

GroupSpec cylinder_spec(double length);
GroupSpec symmetric_spec(int rank, double spacing, double half_width);

// Schottky generator pairing the half-disk over `minus` with the one over
// `plus`: z -> c+ - r+ r- / (z - c-), scaled to unit determinant.
MobiusMap pairing_map(const Interval& minus, const Interval& plus);

}  // namespace hz::geom
