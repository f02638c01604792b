#pragma once

#include <array>
#include <complex>
#include <vector>

#include "hz/conventions.hpp"
#include "hz/geom/classes.hpp"
#include "hz/zeta/zeta.hpp"

namespace hz::zeta {

inline constexpr int kMaxDerivative = 2;

// Traces and Taylor coefficients are kept in extended precision: the
// recursion for c_n cancels terms of size |t_n| down to |c_n|, and that
// rounding floor is what limits how far left d_N can be continued. Traces are
// summed in double where the floor is harmless and in long double elsewhere.
using wide = std::complex<long double>;

// Traces of the transfer operator L_s^n, with s-derivatives up to `derivs`:
//   t_n^(j)(s) = sum over classes of word length n of
//                period * sigma * (-l)^j e^{-s l} / (1 - e^{-l}).
struct TraceTable {
  cplx s;
  SigmaCharacter sigma;
  int N = 0;
  int derivs = 0;
  // t[j][n], n = 0..N with t[j][0] = 0.
  std::array<std::vector<wide>, kMaxDerivative + 1> t;
};

// Taylor coefficients c_n of det(1 - z L_s) = exp(-sum t_n z^n / n) and their
// s-derivatives, with d_N(s) = sum_{n<=N} c_n and the same for derivatives.
struct DetExpansion {
  cplx s;
  int N = 0;
  std::array<std::vector<wide>, kMaxDerivative + 1> c;
  std::array<cplx, kMaxDerivative + 1> value{};
  double error_estimate = 0.0;  // |c_N|
  double decay_ratio = 0.0;     // |c_N| / |c_{N-1}|
  bool decaying = true;
};

// Precomputed class data for repeated evaluation at many s.
class Determinant {
 public:
  Determinant(const geom::ClassTable& table, SigmaCharacter sigma, int N);

  int order() const { return N_; }
  SigmaCharacter sigma() const { return sigma_; }

  TraceTable traces(cplx s, int derivs = 0) const;
  // Throws NonDecaying when check_decay is set and the tail coefficients do
  // not shrink.
  DetExpansion expand(cplx s, int derivs = 0, bool check_decay = false) const;
  cplx value(cplx s) const { return expand(s).value[0]; }

  // Z(lambda) = d_N(lambda + 1/2).
  ZetaEval zeta(cplx lambda) const;
  // d'/d at s; throws NearZeroOfZ when |d/d'| < near_zero.
  cplx log_derivative(cplx s, double near_zero = 1e-6) const;

 private:
  struct Level {
    std::vector<double> length;
    std::vector<double> weight;  // period * sigma / (1 - e^{-l})
  };
  SigmaCharacter sigma_;
  int N_;
  std::vector<Level> levels_;  // levels_[n], n = 1..N
};

TraceTable transfer_trace_table(const geom::ClassTable& table, SigmaCharacter sigma, cplx s, int N, int derivs = 0);
DetExpansion dynamical_determinant(const TraceTable& traces, bool check_decay = true);

struct CriticalExponent {
  double delta = 0.0;        // classical exponent, largest real zero of d_N
  double delta_gamma = 0.0;  // delta - rho
  int multiplicity = 1;      // 2 when found as a double root (the cylinder)
  int N = 0;
  // Independent estimate: divergence abscissa of the Poincare-type series
  // sum l0 e^{-s l} / (1 - e^{-l}), from the growth of its word-length shells.
  double poincare = 0.0;
  double poincare_lo = 0.0;
  double poincare_hi = 0.0;
};

// Scans d_N on [s_lo, 1] from the right for a sign change (simple root) or a
// sign change of d_N' at a vanishing d_N (double root), then refines by
// bisection and Newton. Throws NoZeroInBracket when neither occurs.
CriticalExponent critical_exponent(const geom::ClassTable& table, int N, double s_lo = -0.1);

// Root delta_n of a_n(s) = a_{n-1}(s), where a_n is the word-length-n shell of
// sum l0 e^{-s l} / (1 - e^{-l}). Returned for n = 2..n_max (index n).
std::vector<double> poincare_shell_roots(const geom::ClassTable& table);

// L(lambda) = d'/d(lambda + 1/2) + d'/d(1/2 - lambda).
cplx L_gamma_determinant(const Determinant& det, cplx lambda);

}  // namespace hz::zeta
