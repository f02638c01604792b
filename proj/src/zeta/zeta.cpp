#include "hz/zeta/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hz/error.hpp"
#include "hz/numeric.hpp"

namespace hz::zeta {

namespace {

// log(1 + z), accurate for small |z|.
cplx log1p_c(cplx z) { return std::abs(z) < 0.5 ? 2.0 * std::atanh(z / (2.0 + z)) : std::log(1.0 + z); }

// Geometric extrapolation of a per-word-length series beyond its last term.
double extrapolated_tail(const std::vector<double>& per_length) {
  const int n_max = static_cast<int>(per_length.size()) - 1;
  if (n_max < 1 || per_length[n_max] == 0.0) return 0.0;
  double q = 0.0;
  for (int n = std::max(2, n_max - 2); n <= n_max; ++n) {
    if (per_length[n - 1] > 0.0) q = std::max(q, per_length[n] / per_length[n - 1]);
  }
  if (n_max == 1) q = per_length[1];  // nothing to compare; crude
  if (q >= 1.0) return std::numeric_limits<double>::infinity();
  return per_length[n_max] * q / (1.0 - q);
}

void require_convergence(cplx lambda, double delta, double margin) {
  if (!(to_s(lambda).real() > delta + margin)) {
    throw Error(ErrorKind::OutsideConvergence,
                "Re(lambda) + 1/2 = " + std::to_string(to_s(lambda).real()) +
                    " is not above the critical exponent " + std::to_string(delta) + " + margin " +
                    std::to_string(margin) + "; use the determinant method or raise --lambda");
  }
}

}  // namespace

SigmaCharacter parse_sigma(const std::string& text) {
  if (text == "trivial" || text == "0") return SigmaCharacter::trivial();
  if (text == "sign" || text == "1") return SigmaCharacter::sign();
  throw Error(ErrorKind::InputError, "unknown character '" + text + "' (expected trivial or sign)");
}

std::string to_string(ZetaMethod method) { return method == ZetaMethod::product ? "product" : "determinant"; }

ZetaEval zeta_product(const geom::ClassTable& table, SigmaCharacter sigma, cplx lambda, double delta_classical,
                      const ProductOptions& options) {
  require_convergence(lambda, delta_classical, options.margin);
  const cplx s = to_s(lambda);
  ComplexCompensatedSum log_z;
  std::vector<double> per_length(table.n_max + 1, 0.0);
  double k_tail = 0.0;
  for (const auto& c : table.records) {
    if (!c.is_primitive()) continue;
    const double sv = sigma.value(c.sign);
    for (int k = 0; k <= options.k_max; ++k) {
      const cplx x = sv * std::exp(-(s + static_cast<double>(k)) * c.length);
      log_z.add(log1p_c(-x));
      if (k == 0) per_length[c.word_length()] += std::abs(x) / (1.0 - std::exp(-c.length));
      if (std::abs(x) < 1e-20) break;
      if (k == options.k_max) k_tail += std::abs(x) * std::exp(-c.length) / (1.0 - std::exp(-c.length));
    }
  }
  ZetaEval out;
  out.lambda = lambda;
  out.method = ZetaMethod::product;
  out.n_max = table.n_max;
  out.k_max = options.k_max;
  out.value = std::exp(log_z.value());
  const double log_tail = extrapolated_tail(per_length) + k_tail;
  out.tail_bound = std::abs(out.value) * std::expm1(log_tail);
  if (options.tail_tol > 0.0 && !(out.tail_bound <= options.tail_tol * std::abs(out.value))) {
    throw Error(ErrorKind::TailTooLarge, "product tail bound " + std::to_string(out.tail_bound) +
                                             " exceeds tolerance; raise --n-max or Re(lambda)");
  }
  return out;
}

LogDerivEval log_deriv_zeta(const geom::ClassTable& table, SigmaCharacter sigma, cplx lambda, double delta_classical,
                            const ProductOptions& options) {
  require_convergence(lambda, delta_classical, options.margin);
  const cplx s = to_s(lambda);
  ComplexCompensatedSum sum;
  std::vector<double> per_length(table.n_max + 1, 0.0);
  for (const auto& c : table.records) {
    if (!c.is_primitive()) continue;
    const double l0 = c.length;
    const double sv = sigma.value(c.sign);
    const cplx q = std::exp(-s * l0);
    cplx qm = 1.0;
    double svm = 1.0;
    for (int m = 1; m < 100000; ++m) {
      qm *= q;
      svm *= sv;
      const cplx term = l0 * svm * qm / -std::expm1(-m * l0);
      sum.add(term);
      if (m == 1) per_length[c.word_length()] += std::abs(term);
      if (std::abs(term) < 1e-19 * std::max(1.0, l0)) break;
    }
  }
  LogDerivEval out;
  out.value = sum.value();
  out.tail_bound = extrapolated_tail(per_length);
  if (options.tail_tol > 0.0 && !(out.tail_bound <= options.tail_tol * std::abs(out.value))) {
    throw Error(ErrorKind::TailTooLarge, "log-derivative tail bound exceeds tolerance; raise --n-max");
  }
  return out;
}

cplx L_gamma_product(const geom::ClassTable& table, SigmaCharacter sigma, cplx lambda, double delta_classical) {
  if (!(std::abs(lambda.real()) < kRho - delta_classical)) {
    throw Error(ErrorKind::StripViolation, "|Re lambda| = " + std::to_string(std::abs(lambda.real())) +
                                               " is outside the product strip |Re lambda| < 1/2 - delta = " +
                                               std::to_string(kRho - delta_classical) +
                                               "; use --method determinant");
  }
  // Canonical representative of {lambda, -lambda}.
  const bool flip = lambda.real() < 0.0 || (lambda.real() == 0.0 && lambda.imag() < 0.0);
  const cplx a = flip ? -lambda : lambda;
  ProductOptions opt;
  opt.margin = 0.0;
  return log_deriv_zeta(table, sigma, a, delta_classical, opt).value +
         log_deriv_zeta(table, sigma, -a, delta_classical, opt).value;
}

double functional_equation_defect(const geom::ClassTable& table, SigmaCharacter sigma, cplx lambda,
                                  double delta_classical) {
  if (!(std::abs(lambda.real()) < kRho - delta_classical)) {
    throw Error(ErrorKind::StripViolation, "functional equation needs lambda and -lambda in the product strip");
  }
  if (lambda == cplx(0.0, 0.0)) return 0.0;
  ProductOptions opt;
  opt.margin = 0.0;
  const cplx ratio = zeta_product(table, sigma, lambda, delta_classical, opt).value /
                     zeta_product(table, sigma, -lambda, delta_classical, opt).value;
  using boost::math::quadrature::gauss_kronrod;
  auto part = [&](bool imag) {
    return gauss_kronrod<double, 21>::integrate(
        [&](double tau) {
          const cplx v = L_gamma_product(table, sigma, tau * lambda, delta_classical) * lambda;
          return imag ? v.imag() : v.real();
        },
        0.0, 1.0, 10, 1e-14);
  };
  const cplx integral(part(false), part(true));
  return std::abs(ratio - std::exp(integral));
}

}  // namespace hz::zeta
