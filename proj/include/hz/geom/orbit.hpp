#pragma once

#include <cstdint>
#include <functional>

#include "hz/geom/schottky.hpp"

namespace hz::geom {

struct OrbitSumOptions {
  // Re-check a random sample of pruned subtrees by descending random
  // extensions; a violation throws PruneBoundViolated.
  bool verify_prune = false;
  double verify_fraction = 0.25;
  std::uint64_t seed = 0x5eed;
};

struct OrbitSumResult {
  double value = 0.0;
  std::size_t terms = 0;    // group elements with d(x, gx) <= tail_cut
  std::size_t visited = 0;  // word-tree nodes expanded
  std::size_t pruned = 0;
};

// Sum over g != 1 of kernel(d(x, g x)) restricted to d(x, g x) <= tail_cut.
//
// x is first moved into the fundamental domain F (the sum is invariant under
// x -> h x). Words are expanded depth first in canonical letter order. For
// x in F every extension of w by a word starting with b maps x into the
// half-plane w(D_b) bounded by the geodesic w(C_b), so
//   d(x, w b ... x) >= d(x, w(C_b)),
// which is evaluated exactly from the image endpoints; a subtree is pruned
// when that distance exceeds tail_cut. Terms are added in traversal order
// with compensated summation, so the result is deterministic.
OrbitSumResult orbit_sum(const SchottkyData& group, cplx x, const std::function<double(double)>& kernel,
                         double tail_cut, const OrbitSumOptions& options = {});

}  // namespace hz::geom
