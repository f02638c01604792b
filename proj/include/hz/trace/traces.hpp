#pragma once

#include <string>

#include "hz/geom/classes.hpp"
#include "hz/geom/domain_quadrature.hpp"
#include "hz/geom/schottky.hpp"
#include "hz/trace/test_function.hpp"

namespace hz::trace {

enum class TraceSide { geometric, kernel_difference, spectral, resolvent_Q };
std::string to_string(TraceSide side);

struct TraceResult {
  double value = 0.0;
  TraceSide side = TraceSide::geometric;
  double tail = 0.0;        // declared truncation estimate
  double parameter = 0.0;   // heat time t or resolvent lambda
  int n_max = 0;            // class table length (geometric and spectral sides)
  double R = 0.0;           // truncation radius (kernel-difference side)
  std::size_t evaluations = 0;
};

enum class OrbitalMethod { closed, quadrature };

// theta_gamma(f) for a hyperbolic class of translation length `length`,
// without the centraliser weight.
//   closed:     g(l) / (2 sinh(l/2))
//   quadrature: 2 int_0^inf k(d(v)) cosh v dv with sinh(d/2) = sinh(l/2) cosh v
double orbital_integral(double length, const RadialTestFunction& f, OrbitalMethod method);
double orbital_integral(const geom::ConjClassRecord& c, const RadialTestFunction& f, OrbitalMethod method);

// Sum over the table of l0 * theta(l), with the estimated contribution of the
// word lengths beyond the table as tail. Throws TailTooLarge when the tail
// exceeds tail_tol * |value| (tail_tol <= 0 disables the check).
TraceResult geometric_side(const geom::ClassTable& table, int rank, const RadialTestFunction& f,
                           double tail_tol = 0.0);

struct KernelDifferenceOptions {
  geom::DomainQuadratureOptions quadrature;
  // Orbit terms are dropped where the kernel falls below this fraction of its
  // value at the shortest translation length.
  double kernel_floor = 1e-15;
  double table_step = 0.02;
  double taper_width = 1.0;  // kernel rolled off smoothly to 0 over this last stretch before the cut
};

// Integral over F (radius R about the base point) of sum_{g != 1} k(d(x, g x)).
TraceResult kernel_difference_trace(const geom::SchottkyData& group, const RadialTestFunction& f, double R,
                                    const KernelDifferenceOptions& options = {});

struct SpectralOptions {
  double xi_max = 0.0;   // 0: heat where h < 1e-17 h(0), resolvent 100 lambda
  double xi_step = 0.05;
  double tail_tol = 0.0; // relative; 0 disables TailTooLarge
  int det_order = 12;    // trace order for the critical exponent check
  int threads = 0;
};

// (1/4 pi) int_R L(i xi) h(xi) d xi over the imaginary axis, with L from the
// primitive product of `table` and sigma trivial. Only valid when the
// critical exponent in lambda is negative (delta_classical < 1/2); throws
// RegimeViolation otherwise. The trapezoidal rule converges geometrically
// here, so the step is checked against twice the step; the tail adds the
// h mass beyond xi_max times the bound |L(i xi)| <= L(0).
TraceResult spectral_side(const geom::ClassTable& table, const RadialTestFunction& f,
                          const SpectralOptions& options = {});

// |spectral - geometric| / h(0): what is left for a discrete term at
// lambda = 0 once both sides are computed.
double discrete_term_bound(const TraceResult& spectral, const TraceResult& geometric, const RadialTestFunction& f);

struct ResolventOptions {
  KernelDifferenceOptions kernel;
  double radius_step = 1.0;  // spacing of the three radii used for extrapolation
  int det_order = 12;
};

struct ResolventTrace {
  TraceResult Q;             // side resolvent_Q, extrapolated to R = infinity
  double raw = 0.0;          // integral over the disk of radius R
  double expected = 0.0;     // (1 / 2 lambda) Z'/Z(lambda)
  double t5_defect = 0.0;    // |Q - expected| / |Q|
  double observed_ratio = 0.0;  // successive radius increments; ~ e^{-2 lambda step} expected
};

// Q(lambda) = int_F sum_{g != 1} r_lambda(d(x, g x)) dA. The funnel part of
// the integrand decays like e^{-2 lambda r}, so the disk integrals at
// R - 2h, R - h, R are extrapolated with that rate; Q.tail is the change
// between the two extrapolants. Needs lambda > max(0, delta_classical - 1/2)
// (RegimeViolation). TailDominates when kernel.quadrature.tail_tol > 0 and the
// tail exceeds it relative to Q.
ResolventTrace resolvent_regularized_trace(const geom::SchottkyData& group, const geom::ClassTable& table,
                                           double lambda, double R, const ResolventOptions& options = {});

}  // namespace hz::trace
