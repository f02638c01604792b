#include <cmath>
#include <functional>

#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "fixtures.hpp"
#include "hz/error.hpp"
#include "hz/geom/domain_quadrature.hpp"
#include "hz/geom/hyperbolic.hpp"
#include "hz/geom/orbit.hpp"
#include "hz/trace/test_function.hpp"

using namespace hz;
using namespace hz::geom;
using hz::testing::rel_diff;

namespace {

// All reduced words up to max_len, by plain recursion.
void brute_orbit(const SchottkyData& g, const MobiusMap& m, Letter last, int depth, int max_len, cplx x,
                 std::vector<double>& out) {
  if (depth == max_len) return;
  for (Letter b : g.letters()) {
    if (last != 0 && b == -last) continue;
    const MobiusMap child = m * g.letter_matrix(b);
    out.push_back(hyperbolic_distance(x, child.apply(x)));
    brute_orbit(g, child, b, depth + 1, max_len, x, out);
  }
}

}  // namespace

TEST_CASE("orbit sum on the cylinder axis") {
  const double ell = 2.0;
  const auto g = hz::testing::cylinder(ell);
  const cplx x = g.base_point();
  const auto heat = trace::RadialTestFunction::heat(1.0);
  const double cut = 20.5;
  const auto res = orbit_sum(g, x, [&](double d) { return heat.kernel(d); }, cut);
  double expect = 0.0;
  for (int n = 1; n * ell <= cut; ++n) expect += 2.0 * heat.kernel(n * ell);
  CHECK(res.terms == 20);
  CHECK(rel_diff(res.value, expect) < 1e-14);
}

TEST_CASE("orbit sum of the zero kernel vanishes") {
  const auto g = hz::testing::thin2();
  const auto res = orbit_sum(g, cplx(0.1, 1.3), [](double) { return 0.0; }, 10.0);
  CHECK(res.value == 0.0);
  CHECK(res.terms > 0);
}

TEST_CASE("orbit sum agrees with brute force over short words") {
  const auto g = hz::testing::thin2();
  for (cplx x : {g.base_point(), cplx(0.2, 0.9), cplx(-0.35, 1.6)}) {
    const cplx xr = g.reduce_to_domain(x);
    // Cut below every distance reached by a length-8 word; pruning then keeps
    // the sum inside words of length <= 7.
    std::vector<double> d7;
    brute_orbit(g, MobiusMap::identity(), 0, 0, 7, xr, d7);
    double min8 = 1e300;
    std::function<void(const MobiusMap&, Letter, int)> rec = [&](const MobiusMap& m, Letter last, int depth) {
      for (Letter b : g.letters()) {
        if (last != 0 && b == -last) continue;
        const MobiusMap child = m * g.letter_matrix(b);
        if (depth + 1 == 8)
          min8 = std::min(min8, hyperbolic_distance(xr, child.apply(xr)));
        else
          rec(child, b, depth + 1);
      }
    };
    rec(MobiusMap::identity(), 0, 0);
    const double cut = min8 - 1e-9;
    const trace::KernelTable heat(trace::RadialTestFunction::heat(1.0), 0.5, cut + 1.0);
    auto kernel = [&](double r) { return heat(r); };
    double expect = 0.0;
    std::size_t count = 0;
    for (double r : d7)
      if (r <= cut) {
        expect += kernel(r);
        ++count;
      }
    const auto res = orbit_sum(g, x, kernel, cut);
    CHECK(res.terms == count);
    CHECK(rel_diff(res.value, expect) < 1e-8);
  }
}

TEST_CASE("orbit sum grows with the cut and prune verification holds") {
  const auto g = hz::testing::thin2();
  auto kernel = [](double r) { return std::exp(-r); };
  double prev = 0.0;
  std::size_t prev_terms = 0;
  OrbitSumOptions opt;
  opt.verify_prune = true;
  opt.verify_fraction = 1.0;
  for (double cut : {4.0, 8.0, 12.0, 16.0}) {
    const auto res = orbit_sum(g, cplx(0.05, 1.1), kernel, cut, opt);
    CHECK(res.value >= prev);
    CHECK(res.terms >= prev_terms);
    CHECK(res.pruned > 0);
    prev = res.value;
    prev_terms = res.terms;
  }
}

TEST_CASE("orbit sum rejects boundary points") {
  const auto g = hz::testing::thin2();
  CHECK_THROWS_AS(orbit_sum(g, cplx(0.3, 0.0), [](double) { return 1.0; }, 1.0), hz::Error);
}

TEST_CASE("domain quadrature: disk inside the cylinder strip") {
  const auto g = hz::testing::cylinder(2.0);
  const auto res = domain_quadrature(g, [](cplx) { return 1.0; }, 1.0);
  CHECK(rel_diff(res.value, disk_area(1.0)) < 1e-10);
  CHECK(std::abs(res.value - 2.0 * kPi * (std::cosh(1.0) - 1.0)) < 1e-10);
}

TEST_CASE("domain quadrature: cylinder strip against Fermi coordinates") {
  const auto g = hz::testing::cylinder(2.0);
  for (double R : {2.0, 4.0}) {
    const auto res = domain_quadrature(g, [](cplx) { return 1.0; }, R);
    // Area of {|u| <= 1} intersected with the disk: 2 sinh v_max(u), cosh v_max = cosh R / cosh u.
    const double expect = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [R](double u) {
          const double q = std::cosh(R) / std::cosh(u);
          return 2.0 * std::sqrt(q * q - 1.0);
        },
        -1.0, 1.0, 15, 1e-13);
    CHECK(rel_diff(res.value, expect) < 1e-9);
  }
}

TEST_CASE("domain quadrature: zero integrand and radial test function") {
  const auto g = hz::testing::thin2();
  CHECK(domain_quadrature(g, [](cplx) { return 0.0; }, 3.0).value == 0.0);

  // Coarse midpoint grid in the half-plane as an independent reference.
  const cplx p = g.base_point();
  auto f = [p](cplx z) { return std::exp(-2.0 * hyperbolic_distance(p, z)); };
  const double R = 3.0;
  const auto res = domain_quadrature(g, [&](cplx z) { return f(z); }, R);

  const int nx = 1200, ny = 1200;
  const double x0 = -8.0, x1 = 8.0, ly0 = std::log(1e-3), ly1 = std::log(40.0);
  const double hx = (x1 - x0) / nx, hl = (ly1 - ly0) / ny;
  double grid = 0.0;
  for (int i = 0; i < nx; ++i) {
    const double x = x0 + (i + 0.5) * hx;
    for (int j = 0; j < ny; ++j) {
      const double y = std::exp(ly0 + (j + 0.5) * hl);
      const cplx z(x, y);
      if (!g.in_fundamental_domain(z) || hyperbolic_distance(p, z) > R) continue;
      grid += f(z) * hx * hl / y;  // dx dy / y^2 with dy = y dlog y
    }
  }
  CHECK(rel_diff(res.value, grid) < 2e-3);
  CHECK(res.tail_estimate > 0.0);
}

TEST_CASE("domain quadrature flags a dominant funnel tail") {
  const auto g = hz::testing::cylinder(2.0);
  DomainQuadratureOptions opt;
  opt.tail_tol = 1e-6;
  CHECK_THROWS_AS(domain_quadrature(g, [](cplx) { return 1.0; }, 3.0, opt), hz::Error);
}
