#pragma once

#include <complex>

namespace hz {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// SL(2,R) with the positive root normalized to 1: rho = 1/2 and the Casimir
// acts on the principal series with parameter lambda by 1/4 - lambda^2 for
// both characters of M = {+-I}.
inline constexpr double kRho = 0.5;
inline constexpr double kCasimirOffset = 0.25;

// The determinant variable s used by the transfer operator is lambda + rho.
inline cplx to_s(cplx lambda) { return lambda + kRho; }
inline double to_s(double lambda) { return lambda + kRho; }
inline cplx to_lambda(cplx s) { return s - kRho; }

inline cplx resolvent_parameter(cplx lambda) { return kCasimirOffset - lambda * lambda; }

// delta_Gamma = delta_classical - rho.
inline double shifted_exponent(double delta_classical) { return delta_classical - kRho; }

}  // namespace hz
