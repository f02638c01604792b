#include "hz/geom/schottky.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hz/error.hpp"

namespace hz::geom {

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.second; });
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& [name, passed] : checks) os << (passed ? "[ok]   " : "[FAIL] ") << name << '\n';
  return os.str();
}

MobiusMap pairing_map(const Interval& minus, const Interval& plus) {
  const double cm = minus.center();
  const double cp = plus.center();
  const double rm = minus.radius();
  const double rp = plus.radius();
  const double s = std::sqrt(rm * rp);
  return MobiusMap{cp / s, (-cp * cm - rp * rm) / s, 1.0 / s, -cm / s};
}

GroupSpec cylinder_spec(double length) {
  GroupSpec spec;
  spec.rank = 1;
  spec.cylinder = CylinderTemplate{length};
  return spec;
}

GroupSpec symmetric_spec(int rank, double spacing, double half_width) {
  GroupSpec spec;
  spec.rank = rank;
  spec.symmetric = SymmetricTemplate{rank, spacing, half_width};
  return spec;
}

namespace {

bool close_rel(double x, double y, double tol) { return std::abs(x - y) <= tol * std::max(1.0, std::abs(y)); }

void expand_templates(GroupSpec& spec, bool& is_cylinder) {
  if (spec.cylinder) {
    const double len = spec.cylinder->length;
    if (!(len > 0.0)) throw Error(ErrorKind::InvalidGroup, "cylinder template needs a positive translation length");
    const double c = std::cosh(0.5 * len);
    IntervalPair pair{{c - 1.0, c + 1.0}, {-c - 1.0, -c + 1.0}};
    spec.rank = 1;
    spec.intervals = {pair};
    spec.generators = {pairing_map(pair.minus, pair.plus)};
    // The axis of the generator is the half-circle of radius sinh(len/2).
    if (!spec.base_point) spec.base_point = cplx(0.0, std::sinh(0.5 * len));
    is_cylinder = true;
    return;
  }
  if (spec.symmetric) {
    const auto& t = *spec.symmetric;
    if (t.rank < 1) throw Error(ErrorKind::InvalidGroup, "symmetric template needs rank >= 1");
    if (!(t.spacing > 0.0) || !(t.half_width > 0.0)) {
      throw Error(ErrorKind::InvalidGroup, "symmetric template needs positive spacing and half_width");
    }
    const int n = 2 * t.rank;
    std::vector<Interval> iv;
    for (int j = 0; j < n; ++j) {
      const double c = (j - 0.5 * (n - 1)) * t.spacing;
      iv.push_back({c - t.half_width, c + t.half_width});
    }
    spec.rank = t.rank;
    spec.intervals.clear();
    spec.generators.clear();
    for (int i = 0; i < t.rank; ++i) {
      IntervalPair pair{iv[i + t.rank], iv[i]};
      spec.intervals.push_back(pair);
      spec.generators.push_back(pairing_map(pair.minus, pair.plus));
    }
    return;
  }
  if (spec.generators.empty() && !spec.intervals.empty()) {
    for (const auto& p : spec.intervals) spec.generators.push_back(pairing_map(p.minus, p.plus));
  }
}

}  // namespace

SchottkyData build_schottky(const GroupSpec& input) {
  GroupSpec spec = input;
  bool is_cylinder = false;
  expand_templates(spec, is_cylinder);

  const int r = spec.rank;
  if (r < 1) throw Error(ErrorKind::InvalidGroup, "rank must be >= 1");
  if (static_cast<int>(spec.generators.size()) != r || static_cast<int>(spec.intervals.size()) != r) {
    throw Error(ErrorKind::InvalidGroup, "rank " + std::to_string(r) + " requires " + std::to_string(r) +
                                             " generators and interval pairs");
  }

  ValidationReport report;

  // Closed intervals, pairwise disjoint.
  std::vector<Interval> all;
  for (const auto& p : spec.intervals) {
    all.push_back(p.plus);
    all.push_back(p.minus);
  }
  bool well_formed = std::all_of(all.begin(), all.end(), [](const Interval& i) {
    return std::isfinite(i.lo) && std::isfinite(i.hi) && i.lo < i.hi;
  });
  report.checks.emplace_back("intervals are finite with lo < hi", well_formed);
  if (!well_formed) throw Error(ErrorKind::InvalidGroup, "interval with lo >= hi or non-finite endpoint");

  std::sort(all.begin(), all.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  bool disjoint = true;
  std::string clash;
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (!(all[i - 1].hi < all[i].lo)) {
      disjoint = false;
      std::ostringstream os;
      os << "[" << all[i - 1].lo << ", " << all[i - 1].hi << "] meets [" << all[i].lo << ", " << all[i].hi << "]";
      clash = os.str();
      break;
    }
  }
  report.checks.emplace_back("closed intervals pairwise disjoint", disjoint);
  if (!disjoint) throw Error(ErrorKind::OverlappingIntervals, clash);

  for (int i = 0; i < r; ++i) {
    const auto& g = spec.generators[i];
    const auto& p = spec.intervals[i];
    const std::string tag = "generator " + std::to_string(i + 1);

    const bool unimodular = std::abs(g.det() - 1.0) <= 1e-12;
    report.checks.emplace_back(tag + " has unit determinant", unimodular);
    if (!unimodular) throw Error(ErrorKind::InvalidGroup, tag + " determinant is " + std::to_string(g.det()));

    const bool hyperbolic = g.is_hyperbolic();
    report.checks.emplace_back(tag + " is hyperbolic (|tr| > 2)", hyperbolic);
    if (!hyperbolic) {
      throw Error(ErrorKind::NonHyperbolicGenerator, tag + " has trace " + std::to_string(g.trace()));
    }

    const auto e1 = g.apply_boundary(p.minus.lo);
    const auto e2 = g.apply_boundary(p.minus.hi);
    bool endpoints = e1 && e2;
    if (endpoints) {
      const double lo = std::min(*e1, *e2);
      const double hi = std::max(*e1, *e2);
      endpoints = close_rel(lo, p.plus.lo, 1e-9) && close_rel(hi, p.plus.hi, 1e-9);
    }
    report.checks.emplace_back(tag + " maps the minus endpoints onto the plus endpoints", endpoints);

    const auto at_inf = g.apply_boundary(std::nullopt);
    const auto outside = g.apply_boundary(p.minus.lo - p.minus.radius());
    const bool exterior = at_inf && outside && p.plus.contains_open(*at_inf) && p.plus.contains_open(*outside);
    report.checks.emplace_back(tag + " maps the exterior of minus into the interior of plus", exterior);
    if (!endpoints || !exterior) {
      throw Error(ErrorKind::InvalidGroup, tag + " does not pair its intervals");
    }
  }

  SchottkyData out;
  out.rank_ = r;
  out.generators_ = spec.generators;
  for (const auto& g : spec.generators) out.inverse_generators_.push_back(g.inverse());
  out.intervals_ = spec.intervals;
  for (int i = r; i >= 1; --i) out.letters_.push_back(static_cast<Letter>(-i));
  for (int i = 1; i <= r; ++i) out.letters_.push_back(static_cast<Letter>(i));
  out.cylinder_ = is_cylinder;

  const cplx base = spec.base_point.value_or(cplx(0.0, 1.0));
  if (!(base.imag() > 0.0)) throw Error(ErrorKind::NonInteriorPoint, "base point must lie in the upper half-plane");
  out.base_point_ = base;
  const bool base_in_domain = out.in_fundamental_domain(base);
  report.checks.emplace_back("base point lies in the fundamental domain", base_in_domain);
  if (!base_in_domain) throw Error(ErrorKind::InvalidGroup, "base point is inside a half-disk");
  out.report_ = report;
  return out;
}

const MobiusMap& SchottkyData::letter_matrix(Letter x) const {
  return x > 0 ? generators_[x - 1] : inverse_generators_[-x - 1];
}

const Interval& SchottkyData::letter_interval(Letter x) const {
  return x > 0 ? intervals_[x - 1].plus : intervals_[-x - 1].minus;
}

bool SchottkyData::in_fundamental_domain(cplx z) const {
  for (const auto& p : intervals_) {
    for (const Interval* iv : {&p.plus, &p.minus}) {
      if (std::norm(z - iv->center()) < iv->radius() * iv->radius()) return false;
    }
  }
  return true;
}

cplx SchottkyData::reduce_to_domain(cplx z) const {
  for (int iter = 0; iter < 100000; ++iter) {
    bool moved = false;
    for (int i = 0; i < rank_ && !moved; ++i) {
      const auto& p = intervals_[i];
      if (std::norm(z - p.plus.center()) < p.plus.radius() * p.plus.radius()) {
        z = inverse_generators_[i].apply(z);
        moved = true;
      } else if (std::norm(z - p.minus.center()) < p.minus.radius() * p.minus.radius()) {
        z = generators_[i].apply(z);
        moved = true;
      }
    }
    if (!moved) return z;
  }
  throw Error(ErrorKind::NonInteriorPoint, "point too close to the limit set to reduce into the fundamental domain");
}

double SchottkyData::min_translation_length() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& g : generators_) m = std::min(m, g.translation_length());
  return m;
}

}  // namespace hz::geom
