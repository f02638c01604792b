#pragma once

#include <string>
#include <vector>

#include "hz/conventions.hpp"
#include "hz/geom/classes.hpp"

namespace hz::zeta {

// Character of M = {+-I}: trivial (parity 0) or sign (parity 1). On a class
// it takes the value sign(tr)^parity.
struct SigmaCharacter {
  int parity = 0;

  static SigmaCharacter trivial() { return {0}; }
  static SigmaCharacter sign() { return {1}; }
  int value(int trace_sign) const { return parity == 0 ? 1 : trace_sign; }
  std::string name() const { return parity == 0 ? "trivial" : "sign"; }
};

// Accepts "trivial"/"sign" (also "0"/"1"); throws InputError otherwise.
SigmaCharacter parse_sigma(const std::string& text);

enum class ZetaMethod { product, determinant };
std::string to_string(ZetaMethod method);

struct ZetaEval {
  cplx lambda;
  cplx value;
  ZetaMethod method = ZetaMethod::product;
  int n_max = 0;  // product: class table length
  int k_max = 0;  // product: symmetric-power cut
  int order = 0;  // determinant: trace order N
  double tail_bound = 0.0;
};

struct ProductOptions {
  int k_max = 60;
  // Required distance of Re(lambda) + 1/2 from the critical exponent.
  double margin = 0.02;
  // Relative tail tolerance; 0 disables TailTooLarge.
  double tail_tol = 0.0;
};

// Product over the primitive classes of the table,
//   prod_gamma prod_{k=0}^{k_max} (1 - sigma(gamma) e^{-(lambda + 1/2 + k) l(gamma)}).
// The tail bound extrapolates the per-word-length contributions to log Z
// geometrically beyond n_max and adds the omitted k.
ZetaEval zeta_product(const geom::ClassTable& table, SigmaCharacter sigma, cplx lambda, double delta_classical,
                      const ProductOptions& options = {});

struct LogDerivEval {
  cplx value;
  double tail_bound = 0.0;
};

// Z'/Z(lambda) = sum over primitive classes and powers m >= 1 of
//   l0 sigma^m e^{-m (lambda + 1/2) l0} / (1 - e^{-m l0}),
// powers summed to convergence: the exact log-derivative of the truncated
// product with k_max = infinity.
LogDerivEval log_deriv_zeta(const geom::ClassTable& table, SigmaCharacter sigma, cplx lambda, double delta_classical,
                            const ProductOptions& options = {});

// L(lambda) = Z'/Z(lambda) + Z'/Z(-lambda) by the product method. Both
// arguments are evaluated in a canonical order so L(-lambda) == L(lambda)
// bit for bit. Throws StripViolation unless |Re lambda| < 1/2 - delta.
cplx L_gamma_product(const geom::ClassTable& table, SigmaCharacter sigma, cplx lambda, double delta_classical);

// |Z(lambda)/Z(-lambda) - exp(int_0^lambda L)| with both sides by the product
// method and the integral by adaptive quadrature along the segment.
double functional_equation_defect(const geom::ClassTable& table, SigmaCharacter sigma, cplx lambda,
                                  double delta_classical);

}  // namespace hz::zeta
