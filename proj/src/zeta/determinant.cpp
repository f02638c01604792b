#include "hz/zeta/determinant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "hz/error.hpp"
#include "hz/numeric.hpp"
#include "hz/zeta/contour.hpp"

namespace hz::zeta {

Determinant::Determinant(const geom::ClassTable& table, SigmaCharacter sigma, int N)
    : sigma_(sigma), N_(N), levels_(static_cast<std::size_t>(std::max(N, 0)) + 1) {
  if (N < 1) throw Error(ErrorKind::InputError, "determinant order N must be at least 1");
  if (N > table.n_max) {
    throw Error(ErrorKind::InputError, "determinant order N = " + std::to_string(N) +
                                           " exceeds the class table length " + std::to_string(table.n_max));
  }
  std::vector<std::vector<std::pair<double, double>>> raw(levels_.size());
  for (const auto& c : table.records) {
    const auto n = c.word_length();
    if (n > static_cast<std::size_t>(N)) continue;
    raw[n].emplace_back(c.length, static_cast<double>(c.period()) * sigma.value(c.sign) / -std::expm1(-c.length));
  }
  // Symmetric groups repeat lengths many times over; classes whose lengths
  // agree to rounding share one exponential.
  for (std::size_t n = 1; n < raw.size(); ++n) {
    std::sort(raw[n].begin(), raw[n].end());
    auto& lv = levels_[n];
    for (const auto& [l, w] : raw[n]) {
      if (!lv.length.empty() && l - lv.length.back() <= 1e-13 * l) {
        lv.weight.back() += w;
      } else {
        lv.length.push_back(l);
        lv.weight.push_back(w);
      }
    }
  }
}

namespace {

// Sums weight * (-l)^j e^{-s l} over one level in precision T. Returns the
// absolute mass sum |term| alongside, which sets the rounding floor.
template <class T>
double level_sums(const std::vector<double>& length, const std::vector<double>& weight, cplx s, int derivs,
                  std::array<wide, kMaxDerivative + 1>& out) {
  using C = std::complex<T>;
  std::array<C, kMaxDerivative + 1> acc{};
  const C ws(static_cast<T>(s.real()), static_cast<T>(s.imag()));
  T mass = 0;
  for (std::size_t i = 0; i < length.size(); ++i) {
    const T l = length[i];
    C term = static_cast<T>(weight[i]) * std::exp(-ws * l);
    mass += std::abs(term);
    acc[0] += term;
    for (int j = 1; j <= derivs; ++j) {
      term *= -l;
      acc[j] += term;
    }
  }
  for (int j = 0; j <= derivs; ++j) out[j] = wide(acc[j].real(), acc[j].imag());
  return static_cast<double>(mass);
}

// Above this absolute mass a level is recomputed in extended precision: the
// double rounding floor mass * eps would otherwise reach ~1e-13.
constexpr double kExtendedMass = 1e3;

}  // namespace

TraceTable Determinant::traces(cplx s, int derivs) const {
  if (derivs < 0 || derivs > kMaxDerivative) throw Error(ErrorKind::InputError, "derivative order out of range");
  TraceTable out;
  out.s = s;
  out.sigma = sigma_;
  out.N = N_;
  out.derivs = derivs;
  for (int j = 0; j <= derivs; ++j) out.t[j].assign(N_ + 1, 0.0);
  for (int n = 1; n <= N_; ++n) {
    const auto& lv = levels_[n];
    std::array<wide, kMaxDerivative + 1> sums{};
    if (level_sums<double>(lv.length, lv.weight, s, derivs, sums) > kExtendedMass) {
      level_sums<long double>(lv.length, lv.weight, s, derivs, sums);
    }
    for (int j = 0; j <= derivs; ++j) out.t[j][n] = sums[j];
  }
  return out;
}

DetExpansion dynamical_determinant(const TraceTable& tr, bool check_decay) {
  const int N = tr.N;
  const int J = tr.derivs;
  DetExpansion out;
  out.s = tr.s;
  out.N = N;
  for (int j = 0; j <= J; ++j) out.c[j].assign(N + 1, 0.0);
  out.c[0][0] = 1.0;
  // n c_n = -sum_k t_k c_{n-k}, differentiated by Leibniz.
  for (int n = 1; n <= N; ++n) {
    for (int j = 0; j <= J; ++j) {
      wide acc = 0.0;
      for (int k = 1; k <= n; ++k) {
        switch (j) {
          case 0:
            acc += tr.t[0][k] * out.c[0][n - k];
            break;
          case 1:
            acc += tr.t[1][k] * out.c[0][n - k] + tr.t[0][k] * out.c[1][n - k];
            break;
          default:
            acc += tr.t[2][k] * out.c[0][n - k] + 2.0L * tr.t[1][k] * out.c[1][n - k] + tr.t[0][k] * out.c[2][n - k];
        }
      }
      out.c[j][n] = -acc / static_cast<long double>(n);
    }
  }
  for (int j = 0; j <= J; ++j) {
    wide sum = 0.0;
    for (int n = 0; n <= N; ++n) sum += out.c[j][n];
    out.value[j] = cplx(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
  }
  const auto& c = out.c[0];
  out.error_estimate = std::abs(c[N]);
  out.decay_ratio = std::abs(c[N - 1]) > 0.0 ? std::abs(c[N]) / std::abs(c[N - 1]) : 0.0;
  double peak = 0.0;
  for (const auto& x : c) peak = std::max(peak, static_cast<double>(std::abs(x)));
  // Coefficients at rounding level of the peak count as decayed.
  if (N >= 4 && std::abs(c[N]) > 1e-13 * peak && std::abs(c[N]) >= std::abs(c[N - 3])) {
    out.decaying = false;
  }
  if (check_decay && !out.decaying) {
    throw Error(ErrorKind::NonDecaying, "determinant coefficients stop decaying at N = " + std::to_string(N) +
                                            " for s = (" + std::to_string(tr.s.real()) + ", " +
                                            std::to_string(tr.s.imag()) + "); move s right or raise --order");
  }
  return out;
}

DetExpansion Determinant::expand(cplx s, int derivs, bool check_decay) const {
  return dynamical_determinant(traces(s, derivs), check_decay);
}

ZetaEval Determinant::zeta(cplx lambda) const {
  const auto e = expand(to_s(lambda), 0, true);
  ZetaEval out;
  out.lambda = lambda;
  out.value = e.value[0];
  out.method = ZetaMethod::determinant;
  out.order = N_;
  out.tail_bound = e.error_estimate;
  return out;
}

cplx Determinant::log_derivative(cplx s, double near_zero) const {
  const auto e = expand(s, 1, true);
  if (std::abs(e.value[0]) < near_zero * std::abs(e.value[1])) {
    throw Error(ErrorKind::NearZeroOfZ, "s = (" + std::to_string(s.real()) + ", " + std::to_string(s.imag()) +
                                            ") lies within " + std::to_string(near_zero) + " of a zero of Z");
  }
  return e.value[1] / e.value[0];
}

TraceTable transfer_trace_table(const geom::ClassTable& table, SigmaCharacter sigma, cplx s, int N, int derivs) {
  return Determinant(table, sigma, N).traces(s, derivs);
}

cplx L_gamma_determinant(const Determinant& det, cplx lambda) {
  return det.log_derivative(to_s(lambda)) + det.log_derivative(to_s(-lambda));
}

namespace {

constexpr int kPronyOrder = 4;

double refine_root(const auto& f, double a, double b) {
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t iters = 200;
  const auto [lo, hi] = boost::math::tools::toms748_solve(f, a, b, tol, iters);
  return 0.5 * (lo + hi);
}

struct Shells {
  std::vector<std::vector<double>> length, primitive_length;

  explicit Shells(const geom::ClassTable& table)
      : length(table.n_max + 1), primitive_length(table.n_max + 1) {
    for (const auto& c : table.records) {
      length[c.word_length()].push_back(c.length);
      primitive_length[c.word_length()].push_back(c.primitive_length);
    }
  }

  // log a_n(s), stable for large s l.
  double log_shell(int n, double s) const {
    const auto& l = length[n];
    const auto& l0 = primitive_length[n];
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < l.size(); ++i) top = std::max(top, std::log(l0[i]) - s * l[i]);
    CompensatedSum sum;
    for (std::size_t i = 0; i < l.size(); ++i) sum.add(l0[i] * std::exp(-s * l[i] - top) / -std::expm1(-l[i]));
    return top + std::log(sum.value());
  }

  // Dominant growth ratio of the shells at s. a_n(s) is a power sum over the
  // transfer eigenvalues, so a K-term Prony fit on a_{N-2K+1..N} resolves the
  // leading one far better than the raw ratio a_N / a_{N-1}.
  double growth(double s, int K, int N) const {
    const double ref = log_shell(N, s);
    auto a = [&](int n) { return std::exp(log_shell(n, s) - ref); };
    Eigen::MatrixXd H(K, K);
    Eigen::VectorXd rhs(K);
    for (int r = 0; r < K; ++r) {
      const int n = N - K + 1 + r;
      rhs(r) = a(n);
      for (int i = 1; i <= K; ++i) H(r, i - 1) = a(n - i);
    }
    const Eigen::VectorXd p = H.colPivHouseholderQr().solve(rhs);
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(K, K);
    companion.row(0) = p.transpose();
    for (int i = 1; i < K; ++i) companion(i, i - 1) = 1.0;
    const Eigen::VectorXcd ev = companion.eigenvalues();
    cplx best = 0.0;
    for (int i = 0; i < K; ++i) {
      if (std::abs(ev(i)) > std::abs(best)) best = ev(i);
    }
    return best.real();
  }

  bool usable(int K, int N) const {
    for (int n = N - 2 * K + 1; n <= N; ++n) {
      if (n < 1 || length[n].empty()) return false;
    }
    return true;
  }
};

// Divergence abscissa: the s where the dominant growth ratio crosses 1,
// bracketed by bisection (ratio > 1 diverges, < 1 converges).
double divergence_abscissa(const Shells& shells, int K, int N) {
  double lo = -0.5, hi = 1.5;
  for (int i = 0; i < 64 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (shells.growth(mid, K, N) > 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> poincare_shell_roots(const geom::ClassTable& table) {
  const int n_max = table.n_max;
  const Shells shells(table);
  std::vector<double> roots(n_max + 1, std::numeric_limits<double>::quiet_NaN());
  for (int n = 2; n <= n_max; ++n) {
    if (shells.length[n].empty() || shells.length[n - 1].empty()) continue;
    auto f = [&](double s) { return shells.log_shell(n, s) - shells.log_shell(n - 1, s); };
    double a = -1.0, b = 2.0;
    if (f(a) * f(b) > 0.0) continue;
    roots[n] = refine_root(f, a, b);
  }
  return roots;
}

CriticalExponent critical_exponent(const geom::ClassTable& table, int N, double s_lo) {
  const Determinant det(table, SigmaCharacter::trivial(), N);
  auto D = [&](double s) { return det.expand(s, 1).value; };
  auto d0 = [&](double s) { return det.expand(s, 0).value[0].real(); };
  auto d1 = [&](double s) { return det.expand(s, 1).value[1].real(); };

  CriticalExponent out;
  out.N = N;
  const double step = 0.01;
  auto prev = D(1.0);
  double prev_s = 1.0, scale = std::abs(prev[0]);
  bool found = false;
  for (double s = 1.0 - step; s >= s_lo - 1e-12 && !found; s -= step) {
    const auto cur = D(s);
    scale = std::max(scale, std::abs(cur[0]));
    if ((cur[0].real() > 0.0) != (prev[0].real() > 0.0)) {
      out.delta = refine_root(d0, s, prev_s);
      out.multiplicity = 1;
      found = true;
    } else if ((cur[1].real() > 0.0) != (prev[1].real() > 0.0)) {
      const double r = refine_root(d1, s, prev_s);
      const auto at = det.expand(r, 0);
      // A genuine double root: d_N vanishes to within its truncation error.
      if (std::abs(at.value[0]) <= 1e-12 * scale + 10.0 * at.error_estimate) {
        out.delta = r;
        out.multiplicity = 2;
        found = true;
      }
    }
    prev = cur;
    prev_s = s;
  }
  if (!found) {
    throw Error(ErrorKind::NoZeroInBracket, "no real zero of the determinant in [" + std::to_string(s_lo) +
                                                ", 1]; check the group or raise --order");
  }
  // The order of the root comes from the argument principle on a small circle,
  // not from the branch that found it: a double root can also show up as a
  // rounding-level sign change.
  out.multiplicity = winding_on_circle([&](cplx s) { return det.value(s); }, out.delta, 0.02, 1e-300);
  if (out.multiplicity < 1) {
    throw Error(ErrorKind::NoZeroInBracket, "real root candidate is not a zero of the determinant");
  }
  if (out.multiplicity == 2) out.delta = refine_root(d1, out.delta - 0.01, out.delta + 0.01);
  out.delta_gamma = shifted_exponent(out.delta);

  // Prony orders 3 and 4 at the last two table lengths; the highest usable
  // order at n_max is the estimate, the spread of all of them the bracket.
  const Shells shells(table);
  const int n = table.n_max;
  out.poincare = std::numeric_limits<double>::quiet_NaN();
  out.poincare_lo = std::numeric_limits<double>::infinity();
  out.poincare_hi = -out.poincare_lo;
  for (int K = 1; K <= kPronyOrder; ++K) {
    if (!shells.usable(K, n)) break;
    for (int m = n - 1; m <= n; ++m) {
      if (!shells.usable(K, m)) continue;
      const double x = divergence_abscissa(shells, K, m);
      if (K >= kPronyOrder - 1) {
        out.poincare_lo = std::min(out.poincare_lo, x);
        out.poincare_hi = std::max(out.poincare_hi, x);
      }
      if (m == n) out.poincare = x;
    }
  }
  if (!(out.poincare_lo <= out.poincare_hi)) out.poincare_lo = out.poincare_hi = out.poincare;
  return out;
}

}  // namespace hz::zeta
