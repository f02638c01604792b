#pragma once

#include <memory>
#include <string>

namespace hz::trace {

enum class TestFunctionKind { heat, resolvent };

// K-bi-invariant test function on SL(2,R), seen as a radial kernel k(d) on the
// hyperbolic plane. Heat kernels are parametrised by time t, resolvent kernels
// by the spectral parameter lambda > 0 of (Delta - 1/4 + lambda^2)^{-1}.
// The amplitude scales k, g and h alike; amplitude 0 gives the zero function.
class RadialTestFunction {
 public:
  static RadialTestFunction heat(double t);
  static RadialTestFunction resolvent(double lambda);

  RadialTestFunction scaled(double amplitude) const;

  TestFunctionKind kind() const { return kind_; }
  double parameter() const { return param_; }
  double amplitude() const { return amplitude_; }
  bool is_zero() const { return amplitude_ == 0.0; }

  // k(d) by adaptive quadrature (relative accuracy ~1e-10). The resolvent
  // kernel has a logarithmic singularity at d = 0 and must not be evaluated
  // there.
  double kernel(double d) const;
  // log k(d) / amplitude, i.e. the logarithm of the unscaled kernel. Stays
  // finite far into the tail where k itself underflows.
  double log_unit_kernel(double d) const;

  // Geodesic-side transform g(u) (Abel transform of k) and spectral transform
  // h(xi) = integral of g(u) e^{-i xi u} du.
  double g(double u) const;
  double h(double xi) const;

  // Distance beyond which the unscaled kernel drops below `floor`.
  double decay_radius(double floor) const;

  std::string name() const;

 private:
  RadialTestFunction(TestFunctionKind kind, double param) : kind_(kind), param_(param) {}
  TestFunctionKind kind_;
  double param_;
  double amplitude_ = 1.0;
};

// Interpolation table of log k on [d_lo, d_hi] for the inner loops of lattice
// sums. Arguments outside the table fall back to direct quadrature.
class KernelTable {
 public:
  KernelTable(const RadialTestFunction& f, double d_lo, double d_hi, double step = 0.02, int threads = 0);
  ~KernelTable();
  KernelTable(KernelTable&&) noexcept;
  KernelTable& operator=(KernelTable&&) noexcept;

  double operator()(double d) const;
  double d_lo() const { return d_lo_; }
  double d_hi() const { return d_hi_; }

 private:
  struct Spline;
  RadialTestFunction f_;
  double d_lo_;
  double d_hi_;
  std::unique_ptr<Spline> spline_;
};

}  // namespace hz::trace
