#pragma once

#include <cstdint>
#include <vector>

#include "hz/conventions.hpp"
#include "hz/zeta/determinant.hpp"

namespace hz::zeta {

// A zero mu of Z(lambda) = d_N(lambda + 1/2).
struct Resonance {
  cplx mu;
  int order = 1;          // winding number of the isolating contour
  double abs_det = 0.0;   // |d_N(mu + 1/2)| after refinement
  double isolation = 0.0; // radius of the verifying circle
  bool verified = true;   // false when subdivision hit max_depth first
};

struct ZeroSearchOptions {
  int grid_re = 6;
  int grid_im = 6;
  double tol = 1e-10;  // Newton step tolerance
  int max_depth = 12;  // subdivision levels below a grid cell
  int retries = 3;     // jittered grids after ContourThroughZero
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
  int threads = 0;
};

struct ZeroSearchResult {
  std::vector<Resonance> zeros;  // sorted by (|mu|, Im mu)
  int total_winding = 0;         // around the whole rectangle
  int jitter_retries = 0;
};

// Zeros in the lambda-rectangle [lo.re, hi.re] x [lo.im, hi.im] by the
// argument principle on a grid of cells, refined by Newton with the cell's
// winding as multiplicity. The rectangle must lie where d_N converges
// (NonDecaying is checked at its corners) and its boundary must avoid zeros.
ZeroSearchResult zero_search(const Determinant& det, cplx lo, cplx hi, const ZeroSearchOptions& options = {});

struct ResidueCheck {
  cplx residue;             // (1/2 pi i) contour integral of L on the circle
  long nearest = 0;
  double defect = 0.0;      // |residue - nearest|
  double quadrature_change = 0.0;  // change from halving the node count
  int order_mu = 0;         // zeros of Z inside the circle about mu
  int order_minus_mu = 0;   // zeros of Z inside the mirrored circle about -mu
  bool consistent = false;  // nearest == order_mu - order_minus_mu
};

// Residue of L(lambda) = Z'/Z(lambda) + Z'/Z(-lambda) at mu by the
// trapezoidal rule on |lambda - mu| = radius (determinant method), checked
// against the two argument-principle counts.
ResidueCheck residue_check(const Determinant& det, cplx mu, double radius, int points = 256);

}  // namespace hz::zeta
