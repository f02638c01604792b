#include "hz/cli/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "hz/error.hpp"
#include "hz/trace/traces.hpp"
#include "hz/zeta/determinant.hpp"
#include "hz/zeta/resonance.hpp"
#include "hz/zeta/zeta.hpp"

namespace hz::cli {

namespace {

const zeta::SigmaCharacter kTrivial = zeta::SigmaCharacter::trivial();

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Runs `body`, timing it and turning a library error into a failed result.
CheckResult timed(int criterion, std::string name, double tolerance, const std::function<void(CheckResult&)>& body) {
  CheckResult r;
  r.criterion = criterion;
  r.name = std::move(name);
  r.tolerance = tolerance;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const Error& e) {
    r.passed = false;
    r.value = INFINITY;
    r.detail = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

Fixture make_fixture(std::string name, const geom::GroupSpec& spec, int n_max, int order,
                     const geom::ClassTable* table) {
  Fixture fx{std::move(name), spec, geom::build_schottky(spec), {}, 0.0, order};
  fx.table = table ? *table : geom::enumerate_classes(fx.group, n_max);
  fx.delta = zeta::critical_exponent(fx.table, std::min(order, fx.table.n_max)).delta;
  return fx;
}

std::vector<CheckResult> check_closed_form(const Fixture& fx) {
  if (!fx.cylinder()) return {};
  const double l = fx.spec.cylinder->length;
  return {timed(1, fx.name + ": product vs direct product at lambda = 1/2", 1e-9, [&](CheckResult& r) {
    double direct = 1.0;
    for (int k = 0; k < 400; ++k) direct *= std::pow(-std::expm1(-(1.0 + k) * l), 2);
    const auto z = zeta::zeta_product(fx.table, kTrivial, 0.5, fx.delta);
    r.value = rel(z.value, cplx(direct, 0.0));
    r.passed = r.value <= r.tolerance;
    r.detail = "Z(1/2) = " + fmt(z.value.real()) + ", direct " + fmt(direct);
  })};
}

std::vector<CheckResult> check_overlap(const Fixture& fx, int points) {
  return {timed(2, fx.name + ": product vs determinant at " + std::to_string(points) + " points", 1e-8,
                [&](CheckResult& r) {
                  const zeta::Determinant det(fx.table, kTrivial, fx.order);
                  std::mt19937_64 rng(20240611);
                  const double lo = fx.delta - 0.5 + 0.41;
                  std::uniform_real_distribution<double> re(lo, 1.5), im(-5.0, 5.0);
                  double worst = 0.0;
                  for (int i = 0; i < points; ++i) {
                    const cplx lam(re(rng), im(rng));
                    const auto p = zeta::zeta_product(fx.table, kTrivial, lam, fx.delta).value;
                    worst = std::max(worst, rel(det.zeta(lam).value, p));
                  }
                  r.value = worst;
                  r.passed = worst <= r.tolerance;
                  r.detail = "Re lambda in [" + fmt(lo) + ", 1.5], N = " + std::to_string(fx.order);
                })};
}

std::vector<CheckResult> check_critical_exponent(const Fixture& fx) {
  std::vector<CheckResult> out;
  if (fx.cylinder()) {
    out.push_back(timed(3, fx.name + ": delta = 0", 1e-10, [&](CheckResult& r) {
      r.value = std::abs(fx.delta);
      r.passed = r.value <= r.tolerance;
      r.detail = "delta = " + fmt(fx.delta);
    }));
    return out;
  }
  out.push_back(timed(3, fx.name + ": determinant root vs Poincare divergence", 1e-6, [&](CheckResult& r) {
    const auto ce = zeta::critical_exponent(fx.table, fx.order);
    r.value = std::abs(ce.delta - ce.poincare);
    r.passed = r.value <= r.tolerance;
    r.detail = "delta " + fmt(ce.delta) + ", Poincare " + fmt(ce.poincare) + " in [" + fmt(ce.poincare_lo) + ", " +
               fmt(ce.poincare_hi) + "]";
  }));
  if (fx.spec.symmetric) {
    out.push_back(timed(3, fx.name + ": delta decreases when intervals shrink", 0.0, [&](CheckResult& r) {
      auto spec = fx.spec;
      spec.symmetric->half_width *= 0.75;
      const auto shrunk = geom::enumerate_classes(geom::build_schottky(spec), fx.table.n_max);
      const double d = zeta::critical_exponent(shrunk, fx.order).delta;
      r.value = d - fx.delta;
      r.passed = d < fx.delta;
      r.detail = "half_width x 0.75: delta " + fmt(fx.delta) + " -> " + fmt(d);
    }));
  }
  return out;
}

std::vector<CheckResult> check_residues(const Fixture& fx, int count, double radius) {
  std::vector<CheckResult> out;
  const zeta::Determinant det(fx.table, kTrivial, fx.order);
  std::vector<zeta::Resonance> zeros;
  auto search = timed(4, fx.name + ": zero search", 0.0, [&](CheckResult& r) {
    zeta::ZeroSearchOptions opt;
    opt.grid_re = 4;
    // Taller rectangles until enough zeros are found.
    for (double h : {1.0, 2.0, 4.0}) {
      opt.grid_im = static_cast<int>(4 * h);
      const auto res = zeta::zero_search(det, {-0.58, -h}, {0.2, h}, opt);
      zeros = res.zeros;
      if (static_cast<int>(zeros.size()) >= count) break;
    }
    r.value = static_cast<double>(zeros.size());
    r.passed = static_cast<int>(zeros.size()) >= count &&
               std::all_of(zeros.begin(), zeros.end(), [](const zeta::Resonance& z) { return z.verified; });
    r.detail = std::to_string(zeros.size()) + " zeros";
  });
  out.push_back(search);
  if (!search.passed) return out;

  for (int i = 0; i < count; ++i) {
    const cplx mu = zeros[i].mu;
    // Keep the circle clear of the other zeros of Z(lambda) and Z(-lambda).
    double rho = radius;
    for (const auto& z : zeros) {
      if (&z != &zeros[i]) rho = std::min(rho, 0.4 * std::abs(z.mu - mu));
      rho = std::min(rho, 0.4 * std::abs(-z.mu - mu));
    }
    out.push_back(timed(4, fx.name + ": residue at mu = " + fmt(mu.real()) + (mu.imag() < 0 ? " - " : " + ") +
                               fmt(std::abs(mu.imag())) + "i",
                        1e-3, [&](CheckResult& r) {
                          const auto rc = zeta::residue_check(det, mu, rho);
                          r.value = rc.defect;
                          r.passed = rc.defect <= r.tolerance && rc.consistent;
                          r.detail = "residue " + fmt(rc.residue.real()) + ", ord Z(mu) " + std::to_string(rc.order_mu) +
                                     ", ord Z(-mu) " + std::to_string(rc.order_minus_mu) + ", radius " + fmt(rho);
                        }));
  }
  return out;
}

std::vector<CheckResult> check_kernel_difference(const Fixture& fx, const std::vector<double>& times, double R,
                                                 double quad_tol) {
  std::vector<CheckResult> out;
  const double tol = fx.cylinder() ? 1e-6 : 1e-3;
  for (double t : times) {
    out.push_back(timed(5, fx.name + ": geometric vs kernel-difference, heat t = " + fmt(t), tol, [&](CheckResult& r) {
      const auto f = trace::RadialTestFunction::heat(t);
      const auto geo = trace::geometric_side(fx.table, fx.group.rank(), f);
      trace::KernelDifferenceOptions opt;
      opt.quadrature.rel_tol = quad_tol;
      const auto kd = trace::kernel_difference_trace(fx.group, f, R, opt);
      r.value = rel(kd.value, geo.value);
      r.passed = r.value <= r.tolerance && geo.value > 0.0 && kd.value > 0.0;
      r.detail = "geometric " + fmt(geo.value) + ", kernel-difference " + fmt(kd.value) + ", R " + fmt(R);
    }));
  }
  return out;
}

std::vector<CheckResult> check_spectral(const Fixture& fx, const std::vector<double>& times) {
  std::vector<CheckResult> out;
  const double tol = fx.cylinder() ? 1e-6 : 1e-3;
  for (double t : times) {
    out.push_back(timed(6, fx.name + ": spectral vs geometric, heat t = " + fmt(t), tol, [&](CheckResult& r) {
      const auto f = trace::RadialTestFunction::heat(t);
      const auto geo = trace::geometric_side(fx.table, fx.group.rank(), f);
      trace::SpectralOptions opt;
      opt.det_order = fx.order;
      const auto sp = trace::spectral_side(fx.table, f, opt);
      r.value = rel(sp.value, geo.value);
      r.passed = r.value <= r.tolerance && sp.value > 0.0;
      r.detail = "spectral " + fmt(sp.value) + ", geometric " + fmt(geo.value) + ", discrete-term bound " +
                 fmt(trace::discrete_term_bound(sp, geo, f));
    }));
  }
  return out;
}

std::vector<CheckResult> check_resolvent(const Fixture& fx, const std::vector<double>& lambdas) {
  std::vector<CheckResult> out;
  const double tol = fx.cylinder() ? 1e-6 : 1e-3;
  trace::ResolventOptions opt;
  opt.det_order = fx.order;
  double R = 8.0;
  if (fx.cylinder()) {
    opt.radius_step = 2.0;
  } else {
    R = 5.0;
    opt.radius_step = 1.0;
    opt.kernel.kernel_floor = 1e-6;
    opt.kernel.quadrature.rel_tol = 1e-6;
  }
  for (double lam : lambdas) {
    out.push_back(timed(7, fx.name + ": resolvent identity at lambda = " + fmt(lam), tol, [&](CheckResult& r) {
      const auto q = trace::resolvent_regularized_trace(fx.group, fx.table, lam, R, opt);
      r.value = q.t5_defect;
      r.passed = q.t5_defect <= r.tolerance;
      r.detail = "Q " + fmt(q.Q.value) + ", (1/2 lambda) Z'/Z " + fmt(q.expected) + ", R " + fmt(R) +
                 ", extrapolation " + fmt(q.Q.value - q.raw);
    }));
  }
  return out;
}

std::vector<CheckResult> check_functional_equation(const Fixture& fx) {
  std::vector<CheckResult> out;
  const std::vector<cplx> points = fx.cylinder() ? std::vector<cplx>{0.3} : std::vector<cplx>{0.1, cplx(0.0, 0.1)};
  const double tol = fx.cylinder() ? 1e-8 : 1e-6;
  for (cplx lam : points) {
    out.push_back(timed(8, fx.name + ": functional equation at lambda = " + fmt(lam.real()) + "+" + fmt(lam.imag()) + "i",
                        tol, [&](CheckResult& r) {
                          r.value = zeta::functional_equation_defect(fx.table, kTrivial, lam, fx.delta);
                          r.passed = r.value <= r.tolerance;
                        }));
  }
  return out;
}

std::vector<CheckResult> verify_all(const Fixture& fx) {
  std::vector<CheckResult> all;
  auto add = [&](std::vector<CheckResult> part) { all.insert(all.end(), part.begin(), part.end()); };
  const std::vector<double> times{0.5, 1.0, 2.0};
  add(check_closed_form(fx));
  add(check_overlap(fx));
  add(check_critical_exponent(fx));
  add(check_residues(fx));
  add(check_kernel_difference(fx, times));
  add(check_spectral(fx, times));
  add(check_resolvent(fx, {0.75, 1.0}));
  add(check_functional_equation(fx));
  return all;
}

}  // namespace hz::cli
