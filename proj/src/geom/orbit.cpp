#include "hz/geom/orbit.hpp"

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "hz/error.hpp"
#include "hz/geom/hyperbolic.hpp"
#include "hz/numeric.hpp"

namespace hz::geom {

namespace {

// Image under m of the geodesic over `iv`, as (center, radius).
std::pair<double, double> image_geodesic(const MobiusMap& m, const Interval& iv) {
  const double e1 = *m.apply_boundary(iv.lo);
  const double e2 = *m.apply_boundary(iv.hi);
  return {0.5 * (e1 + e2), 0.5 * std::abs(e1 - e2)};
}

double lower_bound(const MobiusMap& m, const Interval& iv, cplx x) {
  const auto [c, r] = image_geodesic(m, iv);
  if (std::norm(x - c) <= r * r) return 0.0;
  return distance_to_geodesic(x, c, r);
}

struct Node {
  MobiusMap m;
  Letter last;
  std::size_t next;
};

}  // namespace

OrbitSumResult orbit_sum(const SchottkyData& group, cplx x, const std::function<double(double)>& kernel,
                         double tail_cut, const OrbitSumOptions& options) {
  if (!(x.imag() > 0.0)) throw Error(ErrorKind::NonInteriorPoint, "orbit_sum needs a point in the upper half-plane");
  x = group.reduce_to_domain(x);

  const auto& letters = group.letters();
  std::optional<std::mt19937_64> rng;
  if (options.verify_prune) rng.emplace(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto verify = [&](const MobiusMap& prefix, Letter first) {
    std::uniform_int_distribution<std::size_t> pick(0, letters.size() - 1);
    for (int trial = 0; trial < 4; ++trial) {
      MobiusMap m = prefix * group.letter_matrix(first);
      Letter last = first;
      const int extra = static_cast<int>(pick(*rng) % 5);
      for (int k = 0; k < extra; ++k) {
        Letter y = letters[pick(*rng)];
        if (y == -last) continue;
        m = m * group.letter_matrix(y);
        last = y;
      }
      if (hyperbolic_distance_unchecked(x, m.apply(x)) <= tail_cut) {
        throw Error(ErrorKind::PruneBoundViolated, "a pruned subtree contains an element within tail_cut");
      }
    }
  };

  OrbitSumResult res;
  CompensatedSum sum;
  std::vector<Node> stack;
  stack.push_back({MobiusMap::identity(), 0, 0});
  while (!stack.empty()) {
    Node& top = stack.back();
    if (top.next >= letters.size()) {
      stack.pop_back();
      continue;
    }
    const Letter b = letters[top.next++];
    if (top.last != 0 && b == -top.last) continue;
    if (lower_bound(top.m, group.letter_interval(b), x) > tail_cut) {
      ++res.pruned;
      if (options.verify_prune && unit(*rng) < options.verify_fraction) verify(top.m, b);
      continue;
    }
    const MobiusMap child = top.m * group.letter_matrix(b);
    ++res.visited;
    const double d = hyperbolic_distance_unchecked(x, child.apply(x));
    if (d <= tail_cut) {
      sum.add(kernel(d));
      ++res.terms;
    }
    stack.push_back({child, b, 0});
  }
  res.value = sum.value();
  return res;
}

}  // namespace hz::geom
