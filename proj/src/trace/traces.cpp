#include "hz/trace/traces.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "hz/error.hpp"
#include "hz/geom/orbit.hpp"
#include "hz/geom/word.hpp"
#include "hz/numeric.hpp"
#include "hz/zeta/determinant.hpp"
#include "hz/zeta/zeta.hpp"

namespace hz::trace {

std::string to_string(TraceSide side) {
  switch (side) {
    case TraceSide::geometric: return "geometric";
    case TraceSide::kernel_difference: return "kernel_difference";
    case TraceSide::spectral: return "spectral";
    case TraceSide::resolvent_Q: return "resolvent_Q";
  }
  return "unknown";
}

double orbital_integral(double length, const RadialTestFunction& f, OrbitalMethod method) {
  if (!(length > 0.0)) throw Error(ErrorKind::InputError, "orbital integral needs a hyperbolic class (l > 0)");
  if (f.is_zero()) return 0.0;
  if (method == OrbitalMethod::closed) return f.g(length) / (2.0 * std::sinh(0.5 * length));

  const double sh = std::sinh(0.5 * length);
  const double log_amp = std::log(std::abs(f.amplitude()));
  auto integrand = [&](double v) {
    const double d = 2.0 * std::asinh(sh * std::cosh(v));
    if (!(d < 4000.0)) return 0.0;
    const double log_term = f.log_unit_kernel(d) + log_amp + v + std::log1p(std::exp(-2.0 * v)) - std::log(2.0);
    return log_term < -745.0 ? 0.0 : std::exp(log_term);
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  double err = 0.0, l1 = 0.0;
  const double value = ts.integrate(integrand, 0.0, std::numeric_limits<double>::infinity(), 1e-12, &err, &l1);
  if (err > 1e-9 * std::abs(value)) {
    throw Error(ErrorKind::QuadratureStall, "orbital integral quadrature stalled at l = " + std::to_string(length));
  }
  return std::copysign(2.0 * value, f.amplitude());
}

double orbital_integral(const geom::ConjClassRecord& c, const RadialTestFunction& f, OrbitalMethod method) {
  return orbital_integral(c.length, f, method);
}

TraceResult geometric_side(const geom::ClassTable& table, int rank, const RadialTestFunction& f, double tail_tol) {
  TraceResult res;
  res.side = TraceSide::geometric;
  res.parameter = f.parameter();
  res.n_max = table.n_max;
  CompensatedSum sum;
  for (const auto& c : table.records) sum.add(c.weight() * orbital_integral(c, f, OrbitalMethod::closed));
  res.value = sum.value();
  res.evaluations = table.records.size();

  // Classes of word length n have l >= rate * n and there are at most
  // (cyclically reduced words of length n) of them; l0 theta(l) <= l theta(l).
  const double rate = table.length_rate();
  auto sup_term = [&](double l_min) {
    double best = 0.0;
    for (int k = 0; k <= 400; ++k) {
      const double l = l_min + 0.125 * k;
      best = std::max(best, std::abs(l * orbital_integral(l, f, OrbitalMethod::closed)));
    }
    return best;
  };
  double tail = 0.0;
  for (int n = table.n_max + 1; n <= table.n_max + 200; ++n) {
    const double term = geom::cyclically_reduced_count(rank, n) * sup_term(rate * n);
    tail += term;
    if (term <= 1e-3 * tail || term < 1e-300) break;
  }
  res.tail = tail;
  if (tail_tol > 0.0 && tail > tail_tol * std::abs(res.value)) {
    throw Error(ErrorKind::TailTooLarge, "geometric side tail " + std::to_string(tail) +
                                             " exceeds tolerance; raise n_max (currently " +
                                             std::to_string(table.n_max) + ")");
  }
  return res;
}

TraceResult kernel_difference_trace(const geom::SchottkyData& group, const RadialTestFunction& f, double R,
                                    const KernelDifferenceOptions& options) {
  TraceResult res;
  res.side = TraceSide::kernel_difference;
  res.parameter = f.parameter();
  res.R = R;
  if (f.is_zero()) return res;

  const double l_min = group.min_translation_length();
  const double cut = f.decay_radius(options.kernel_floor * std::exp(f.log_unit_kernel(l_min)));
  const KernelTable table(f, 0.5 * l_min, cut + 1.0, options.table_step, options.quadrature.threads);
  // Smooth (C^2) roll-off over [cut - w, cut]: a hard cut puts a jump on
  // every curve d(x, g x) = cut, and the adaptive rule chases each one.
  const double w = std::min(options.taper_width, 0.5 * cut);
  auto taper = [&](double d) {
    const double u = (cut - d) / w;
    if (u >= 1.0) return 1.0;
    if (u <= 0.0) return 0.0;
    return u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
  };
  std::atomic<std::size_t> terms{0};
  auto integrand = [&](cplx x) {
    const auto o = geom::orbit_sum(group, x, [&](double d) { return table(d) * taper(d); }, cut);
    terms.fetch_add(o.terms, std::memory_order_relaxed);
    return o.value;
  };
  const auto q = geom::domain_quadrature(group, integrand, R, options.quadrature);
  res.value = q.value;
  res.tail = q.tail_estimate;
  res.evaluations = terms.load();
  return res;
}

namespace {

double checked_delta(const geom::ClassTable& table, int det_order) {
  return zeta::critical_exponent(table, std::min(det_order, table.n_max)).delta;
}

// int_{xi_max}^inf h(xi) d xi in closed form.
double h_tail(const RadialTestFunction& f, double xi_max) {
  const double p = f.parameter();
  if (f.kind() == TestFunctionKind::heat) {
    return std::abs(f.amplitude()) * std::exp(-0.25 * p) * 0.5 * std::sqrt(kPi / p) *
           std::erfc(xi_max * std::sqrt(p));
  }
  return std::abs(f.amplitude()) * (0.5 * kPi - std::atan(xi_max / p)) / p;
}

}  // namespace

TraceResult spectral_side(const geom::ClassTable& table, const RadialTestFunction& f,
                          const SpectralOptions& options) {
  if (!(options.xi_step > 0.0) || options.xi_max < 0.0) {
    throw Error(ErrorKind::InputError, "spectral side needs xi_step > 0 and xi_max >= 0");
  }
  const double delta = checked_delta(table, options.det_order);
  if (!(delta - 0.5 < 0.0)) {
    throw Error(ErrorKind::RegimeViolation, "spectral side needs delta_Gamma = delta - 1/2 < 0, got delta = " +
                                                std::to_string(delta));
  }
  TraceResult res;
  res.side = TraceSide::spectral;
  res.parameter = f.parameter();
  res.n_max = table.n_max;
  if (f.is_zero()) return res;

  double xi_max = options.xi_max;
  if (xi_max == 0.0) {
    xi_max = f.kind() == TestFunctionKind::heat ? std::sqrt(std::log(1e17) / f.parameter()) : 100.0 * f.parameter();
  }
  // An even number of steps so that every other node gives the coarse rule.
  auto steps = static_cast<std::size_t>(std::ceil(xi_max / options.xi_step));
  steps += steps % 2;
  const double step = xi_max / static_cast<double>(steps);
  const zeta::SigmaCharacter triv = zeta::SigmaCharacter::trivial();
  const int threads = options.threads > 0 ? options.threads : concurrency();
  const auto L = parallel_map(steps + 1, threads, [&](std::size_t j) {
    return zeta::L_gamma_product(table, triv, cplx(0.0, step * static_cast<double>(j)), delta).real();
  });

  // L(i xi) h(xi) is even, so integrate over [0, xi_max] and double.
  auto trapezoid = [&](std::size_t stride) {
    CompensatedSum sum;
    for (std::size_t j = 0; j <= steps; j += stride) {
      const double w = (j == 0 || j == steps) ? 0.5 : 1.0;
      sum.add(w * L[j] * f.h(step * static_cast<double>(j)));
    }
    return 2.0 * step * static_cast<double>(stride) * sum.value() / (4.0 * kPi);
  };
  res.value = trapezoid(1);
  const double refinement = std::abs(res.value - trapezoid(2));
  const double truncation = 2.0 * std::abs(L[0]) * h_tail(f, xi_max) / (4.0 * kPi);
  res.tail = refinement + truncation;
  res.evaluations = steps + 1;
  if (options.tail_tol > 0.0 && res.tail > options.tail_tol * std::abs(res.value)) {
    throw Error(ErrorKind::TailTooLarge, "spectral side tail " + std::to_string(res.tail) +
                                             " exceeds tolerance; raise xi_max or lower xi_step");
  }
  return res;
}

double discrete_term_bound(const TraceResult& spectral, const TraceResult& geometric, const RadialTestFunction& f) {
  const double h0 = f.h(0.0);
  if (h0 == 0.0) return 0.0;
  return std::abs(spectral.value - geometric.value) / std::abs(h0);
}

ResolventTrace resolvent_regularized_trace(const geom::SchottkyData& group, const geom::ClassTable& table,
                                           double lambda, double R, const ResolventOptions& options) {
  const double delta = checked_delta(table, options.det_order);
  if (!(lambda > std::max(0.0, delta - 0.5))) {
    throw Error(ErrorKind::RegimeViolation, "resolvent trace needs lambda > max(0, delta - 1/2); lambda = " +
                                                std::to_string(lambda) + ", delta = " + std::to_string(delta));
  }
  const double h = options.radius_step;
  if (!(h > 0.0) || !(R - 2.0 * h > 0.0)) {
    throw Error(ErrorKind::InputError, "resolvent trace needs radius_step > 0 and R > 2 radius_step");
  }
  const auto f = RadialTestFunction::resolvent(lambda);
  KernelDifferenceOptions kernel = options.kernel;
  const double tail_tol = kernel.quadrature.tail_tol;
  kernel.quadrature.tail_tol = 0.0;
  std::array<double, 3> q{};
  for (int i = 0; i < 3; ++i) q[i] = kernel_difference_trace(group, f, R - (2 - i) * h, kernel).value;

  // Q(R) = Q - A e^{-2 lambda R} + smaller terms.
  const double rate = std::exp(-2.0 * lambda * h);
  auto extrapolate = [&](double a, double b) { return b + (b - a) * rate / (1.0 - rate); };
  ResolventTrace out;
  out.raw = q[2];
  out.Q.side = TraceSide::resolvent_Q;
  out.Q.parameter = lambda;
  out.Q.R = R;
  out.Q.n_max = table.n_max;
  out.Q.value = extrapolate(q[1], q[2]);
  out.Q.tail = std::abs(out.Q.value - extrapolate(q[0], q[1]));
  out.observed_ratio = (q[2] - q[1]) / (q[1] - q[0]);
  out.expected = zeta::log_deriv_zeta(table, zeta::SigmaCharacter::trivial(), lambda, delta).value.real() /
                 (2.0 * lambda);
  out.t5_defect = std::abs(out.Q.value - out.expected) / std::abs(out.Q.value);
  if (tail_tol > 0.0 && out.Q.tail > tail_tol * std::abs(out.Q.value)) {
    throw Error(ErrorKind::TailDominates, "resolvent funnel tail " + std::to_string(out.Q.tail) +
                                             " exceeds tolerance; raise R (currently " + std::to_string(R) + ")");
  }
  return out;
}

}  // namespace hz::trace
