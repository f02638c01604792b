#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "hz/error.hpp"
#include "hz/geom/classes.hpp"
#include "hz/geom/schottky.hpp"
#include "hz/zeta/contour.hpp"
#include "hz/zeta/determinant.hpp"
#include "hz/zeta/resonance.hpp"
#include "hz/zeta/zeta.hpp"

using namespace hz;
using namespace hz::zeta;
using hz::testing::rel_diff;

namespace {

const SigmaCharacter triv = SigmaCharacter::trivial();

const geom::ClassTable& cylinder_table() {
  static const auto t = geom::enumerate_classes(testing::cylinder(2.0), 12);
  return t;
}

const geom::ClassTable& thin2_table() {
  static const auto t = geom::enumerate_classes(testing::thin2(), 12);
  return t;
}

double thin2_delta() {
  static const double d = critical_exponent(thin2_table(), 12).delta;
  return d;
}

// prod_{k>=0} (1 - e^{-(s+k) l})^2, straight multiplication.
cplx cylinder_closed_form(cplx s, double l = 2.0) {
  cplx p = 1.0;
  for (int k = 0; k < 200; ++k) {
    const cplx f = 1.0 - std::exp(-(s + static_cast<double>(k)) * l);
    p *= f * f;
  }
  return p;
}

bool kind_of(const std::function<void()>& fn, ErrorKind expected) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind() == expected;
  }
  return false;
}

}  // namespace

TEST_CASE("cylinder zeta product matches the direct product") {
  const auto z = zeta_product(cylinder_table(), triv, 0.5, 0.0);
  CHECK(rel_diff(z.value.real(), cylinder_closed_form(1.0).real()) < 1e-9);
  CHECK(std::abs(z.value.imag()) < 1e-15);
  CHECK(std::abs(z.value.real() - 0.716385019597069) < 5e-7);
  CHECK(z.tail_bound < 1e-15);
}

TEST_CASE("product refuses the divergent half-plane and reports a tail") {
  const double delta = thin2_delta();
  CHECK(kind_of([&] { zeta_product(thin2_table(), triv, delta - 0.5, delta); }, ErrorKind::OutsideConvergence));
  CHECK(kind_of([&] { log_deriv_zeta(thin2_table(), triv, -0.3, delta); }, ErrorKind::OutsideConvergence));
  const auto near = zeta_product(thin2_table(), triv, cplx(-0.2, 1.0), delta);
  const auto far = zeta_product(thin2_table(), triv, cplx(0.5, 1.0), delta);
  CHECK(near.tail_bound > far.tail_bound);
  ProductOptions strict;
  strict.tail_tol = 1e-14;
  CHECK(kind_of([&] { zeta_product(thin2_table(), triv, cplx(-0.2, 1.0), delta, strict); }, ErrorKind::TailTooLarge));
}

TEST_CASE("log-derivative: cylinder series, decay and finite differences") {
  // Two primitive classes g, g^-1 with l0 = 2 at s = 3/2.
  double expect = 0.0;
  for (int m = 1; m < 60; ++m) expect += 4.0 * std::exp(-3.0 * m) / -std::expm1(-2.0 * m);
  const auto ld = log_deriv_zeta(cylinder_table(), triv, 1.0, 0.0);
  CHECK(rel_diff(ld.value.real(), expect) < 1e-13);
  CHECK(std::abs(log_deriv_zeta(cylinder_table(), triv, 40.0, 0.0).value) < 1e-30);

  const double delta = thin2_delta();
  const double h = 1e-4;
  for (cplx lam : {cplx(0.1, 0.0), cplx(0.3, 2.0), cplx(-0.1, 0.7)}) {
    const cplx up = std::log(zeta_product(thin2_table(), triv, lam + h, delta).value);
    const cplx down = std::log(zeta_product(thin2_table(), triv, lam - h, delta).value);
    const cplx fd = (up - down) / (2.0 * h);
    const cplx exact = log_deriv_zeta(thin2_table(), triv, lam, delta).value;
    CHECK(std::abs(fd - exact) < 1e-7 * std::max(1.0, std::abs(exact)));
  }
}

TEST_CASE("transfer traces: closed forms") {
  const auto tr = transfer_trace_table(cylinder_table(), triv, 1.0, 10);
  CHECK(rel_diff(static_cast<double>(tr.t[0][1].real()), 0.313035285499331) < 1e-12);
  for (int n = 1; n <= 10; ++n) {
    const double expect = 2.0 * std::exp(-2.0 * n) / -std::expm1(-2.0 * n);
    CHECK(rel_diff(static_cast<double>(tr.t[0][n].real()), expect) < 1e-13);
  }
  // Rank 2, n = 1: the four generator letters.
  const auto g = testing::thin2();
  const cplx s(0.7, 0.4);
  cplx t1 = 0.0;
  for (const auto& m : g.generators()) {
    const double l = 2.0 * std::acosh(std::abs(m.a + m.d) / 2.0);
    t1 += 2.0 * std::exp(-s * l) / -std::expm1(-l);
  }
  const auto tt = transfer_trace_table(thin2_table(), triv, s, 3);
  CHECK(std::abs(cplx(tt.t[0][1].real(), tt.t[0][1].imag()) - t1) < 1e-14);
}

TEST_CASE("determinant: cylinder product, empty operator, decay diagnostics") {
  const Determinant det(cylinder_table(), triv, 12);
  const auto e = det.expand(1.0, 0, true);
  CHECK(rel_diff(e.value[0].real(), cylinder_closed_form(1.0).real()) < 1e-10);

  TraceTable empty;
  empty.N = 8;
  empty.t[0].assign(9, 0.0);
  const auto one = dynamical_determinant(empty);
  CHECK(one.value[0] == cplx(1.0, 0.0));

  CHECK(kind_of([&] { det.expand(-3.0, 0, true); }, ErrorKind::NonDecaying));

  // log|c_n| falls off faster than linearly in the convergent half-plane.
  for (const auto* table : {&cylinder_table(), &thin2_table()}) {
    const Determinant d(*table, triv, 12);
    const auto x = d.expand(cplx(0.6, 1.0));
    auto lc = [&](int n) { return std::log(static_cast<double>(std::abs(x.c[0][n]))); };
    for (int n = 1; n <= 9; ++n) CHECK(lc(n + 1) < lc(n));
    CHECK((lc(9) - lc(6)) / 3.0 < (lc(5) - lc(2)) / 3.0);
  }
}

TEST_CASE("product and determinant agree in the overlap half-plane") {
  const double delta = thin2_delta();
  const Determinant det(thin2_table(), triv, 12);
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> re(0.15, 1.5), im(-5.0, 5.0);
  for (int i = 0; i < 20; ++i) {
    const cplx lam(re(rng), im(rng));
    const cplx p = zeta_product(thin2_table(), triv, lam, delta).value;
    const cplx d = det.zeta(lam).value;
    CHECK(std::abs(p - d) / std::abs(p) < 1e-8);
    // log Z against -sum t_n / n over the same table.
    const auto tr = det.traces(to_s(lam));
    cplx series = 0.0;
    for (int n = 1; n <= 12; ++n) series -= cplx(tr.t[0][n].real(), tr.t[0][n].imag()) / static_cast<double>(n);
    CHECK(std::abs(std::log(p) - series) < 1e-8);
    // Conjugation symmetry.
    CHECK(std::abs(det.zeta(std::conj(lam)).value - std::conj(d)) < 1e-14);
  }
}

TEST_CASE("critical exponent") {
  const auto cyl = critical_exponent(cylinder_table(), 12);
  CHECK(std::abs(cyl.delta) < 1e-10);
  CHECK(cyl.multiplicity == 2);
  CHECK(std::abs(cyl.delta_gamma + 0.5) < 1e-10);

  const auto thin = critical_exponent(thin2_table(), 12);
  CHECK(thin.multiplicity == 1);
  CHECK(thin.delta < 0.3);
  CHECK(thin.delta > 0.0);
  CHECK(std::abs(thin.delta - thin.poincare) < 1e-6);
  CHECK(thin.poincare_lo <= thin.poincare_hi);
  // Value recorded in the fixture file.
  CHECK(std::abs(thin.delta - 0.240039382427112) < 1e-12);

  const auto shrunk = critical_exponent(geom::enumerate_classes(testing::thin2_shrunk(), 12), 12);
  CHECK(shrunk.delta < thin.delta);

  // A table whose traces never vanish on [s_lo, 1]: no real zero.
  CHECK(kind_of([&] { critical_exponent(thin2_table(), 12, 0.5); }, ErrorKind::NoZeroInBracket));
}

TEST_CASE("L_gamma: closed form, evenness, reality, dual path") {
  const double l = 2.0;
  for (double xi : {0.0, 0.4, 1.3, 5.0}) {
    double expect = 0.0;
    for (int m = 1; m < 80; ++m) {
      expect += 4.0 * l * std::cos(m * l * xi) * std::exp(-0.5 * m * l) / -std::expm1(-m * l);
    }
    const cplx L = L_gamma_product(cylinder_table(), triv, cplx(0.0, xi), 0.0);
    CHECK(std::abs(L.real() - expect) < 1e-12 * std::max(1.0, std::abs(expect)));
    CHECK(std::abs(L.imag()) < 1e-10);
  }
  const double delta = thin2_delta();
  const auto& tab = thin2_table();
  CHECK(L_gamma_product(tab, triv, 0.0, delta) == 2.0 * log_deriv_zeta(tab, triv, 0.0, delta).value);
  for (cplx lam : {cplx(0.1, 0.3), cplx(-0.2, 2.0), cplx(0.0, 7.0)}) {
    CHECK(L_gamma_product(tab, triv, lam, delta) == L_gamma_product(tab, triv, -lam, delta));
  }
  CHECK(std::abs(L_gamma_product(tab, triv, cplx(0.0, 3.3), delta).imag()) < 1e-10);

  // On the critical line the product converges like e^{-(1/2 - delta) l}; a
  // thinner group than thin2 gets there at word length 12.
  const auto thin = geom::enumerate_classes(geom::build_schottky(geom::symmetric_spec(2, 2, 0.1)), 12);
  const double thin_delta = critical_exponent(thin, 12).delta;
  const cplx a = L_gamma_product(thin, triv, cplx(0.0, 0.2), thin_delta);
  const cplx b = L_gamma_determinant(Determinant(thin, triv, 12), cplx(0.0, 0.2));
  CHECK(std::abs(a - b) / std::abs(a) < 1e-7);

  const Determinant det(tab, triv, 12);

  CHECK(kind_of([&] { L_gamma_product(tab, triv, 0.3, delta); }, ErrorKind::StripViolation));
  CHECK(kind_of([&] { L_gamma_determinant(det, cplx(delta - 0.5 + 1e-9, 0.0)); }, ErrorKind::NearZeroOfZ));
}

TEST_CASE("winding numbers of simple functions") {
  auto cube = [](cplx z) { return (z - 0.1) * (z - 0.1) * (z + cplx(0.0, 0.3)); };
  CHECK(winding_number(cube, rectangle({-1.0, -1.0}, {1.0, 1.0})) == 3);
  CHECK(winding_number(cube, rectangle({-1.0, 0.05}, {1.0, 1.0})) == 0);
  CHECK(winding_on_circle(cube, 0.1, 0.05) == 2);
  CHECK(kind_of([&] { winding_number(cube, rectangle({0.1, -1.0}, {1.0, 1.0})); }, ErrorKind::ContourThroughZero));
}

TEST_CASE("zero search on the cylinder finds the double zeros") {
  const Determinant det(cylinder_table(), triv, 12);
  const auto r = zero_search(det, {-1.2, -4.0}, {0.3, 4.0});
  REQUIRE(r.zeros.size() == 3);
  int orders = 0;
  for (const auto& z : r.zeros) {
    CHECK(z.order == 2);
    CHECK(z.verified);
    CHECK(std::abs(z.mu.real() + 0.5) < 1e-6);
    const double m = z.mu.imag() / kPi;
    CHECK(std::abs(m - std::round(m)) < 1e-6);
    CHECK(std::abs(det.value(to_s(z.mu))) < 1e-10);
    orders += z.order;
  }
  CHECK(orders == r.total_winding);
  CHECK(std::abs(r.zeros[0].mu.imag()) < 1e-6);

  const auto none = zero_search(det, {1.0, -3.0}, {2.0, 3.0});
  CHECK(none.zeros.empty());
  CHECK(none.total_winding == 0);
}

TEST_CASE("zero search on thin2: bookkeeping and real symmetry") {
  const Determinant det(thin2_table(), triv, 12);
  ZeroSearchOptions opt;
  opt.grid_re = 4;
  opt.grid_im = 4;
  const auto r = zero_search(det, {-0.58, -1.0}, {0.2, 1.0}, opt);
  int orders = 0;
  for (const auto& z : r.zeros) {
    orders += z.order;
    CHECK(z.verified);
    if (std::abs(z.mu.imag()) > 1e-6) {
      // The mirror image is in the list as well.
      bool mirrored = false;
      for (const auto& w : r.zeros) mirrored = mirrored || std::abs(w.mu - std::conj(z.mu)) < 1e-7;
      CHECK(mirrored);
    }
  }
  CHECK(orders == r.total_winding);
  REQUIRE(r.zeros.size() >= 3);
  CHECK(std::abs(r.zeros[0].mu - cplx(thin2_delta() - 0.5, 0.0)) < 1e-9);
}

TEST_CASE("residues of L are integers matching the argument principle") {
  const Determinant cyl(cylinder_table(), triv, 12);
  const auto at_zero = residue_check(cyl, -0.5, 0.3);
  CHECK(at_zero.nearest == 2);
  CHECK(at_zero.defect < 1e-10);
  CHECK(at_zero.order_mu == 2);
  CHECK(at_zero.order_minus_mu == 0);
  CHECK(at_zero.consistent);
  // Its mirror: Z(-lambda) vanishes at lambda = 1/2.
  const auto mirror = residue_check(cyl, 0.5, 0.3);
  CHECK(mirror.nearest == -2);
  CHECK(mirror.consistent);

  const auto empty = residue_check(cyl, cplx(0.2, 1.0), 0.3);
  CHECK(std::abs(empty.residue) < 1e-6);
  CHECK(empty.nearest == 0);
}

TEST_CASE("functional equation defect") {
  CHECK(functional_equation_defect(cylinder_table(), triv, 0.0, 0.0) == 0.0);
  CHECK(functional_equation_defect(cylinder_table(), triv, 0.3, 0.0) < 1e-8);
  const double delta = thin2_delta();
  CHECK(functional_equation_defect(thin2_table(), triv, 0.1, delta) < 1e-6);
  CHECK(functional_equation_defect(thin2_table(), triv, cplx(0.0, 0.1), delta) < 1e-6);
  CHECK(kind_of([&] { functional_equation_defect(thin2_table(), triv, 0.3, delta); }, ErrorKind::StripViolation));
}

TEST_CASE("sign character") {
  CHECK(parse_sigma("sign").parity == 1);
  CHECK(parse_sigma("0").parity == 0);
  CHECK(kind_of([] { parse_sigma("odd"); }, ErrorKind::InputError));
  // Every cylinder class has positive trace, so both characters agree there.
  const auto a = zeta_product(cylinder_table(), SigmaCharacter::sign(), cplx(0.4, 0.2), 0.0).value;
  const auto b = zeta_product(cylinder_table(), triv, cplx(0.4, 0.2), 0.0).value;
  CHECK(a == b);
}
