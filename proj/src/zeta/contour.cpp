#include "hz/zeta/contour.hpp"

#include <cmath>
#include <sstream>

#include "hz/error.hpp"

namespace hz::zeta {

namespace {

constexpr double kMaxPhaseStep = kPi / 4.0;
constexpr int kMaxDepth = 40;

struct Sampler {
  const ComplexFn& f;
  double floor;

  cplx operator()(cplx z) const {
    const cplx v = f(z);
    if (!(std::abs(v) >= floor)) {
      std::ostringstream os;
      os << "|f| = " << std::abs(v) << " on the contour at (" << z.real() << ", " << z.imag() << ")";
      throw Error(ErrorKind::ContourThroughZero, os.str());
    }
    return v;
  }

  // Phase increment of f from a to b. A segment is accepted when the step is
  // small and f at the midpoint is close to the chord, so that the image of
  // the segment cannot loop around 0 between samples.
  double phase(cplx a, cplx fa, cplx b, cplx fb, int depth) const {
    const cplx m = 0.5 * (a + b);
    const cplx fm = (*this)(m);
    const double step = std::arg(fb / fa);
    const bool linear = std::abs(fm - 0.5 * (fa + fb)) <= 0.25 * std::min(std::abs(fa), std::abs(fb));
    if (std::abs(step) < kMaxPhaseStep && linear) return std::arg(fm / fa) + std::arg(fb / fm);
    if (depth >= kMaxDepth) {
      throw Error(ErrorKind::ContourThroughZero, "phase of f cannot be resolved along the contour");
    }
    return phase(a, fa, m, fm, depth + 1) + phase(m, fm, b, fb, depth + 1);
  }
};

}  // namespace

int winding_number(const ComplexFn& f, const std::vector<cplx>& vertices, double zero_floor, int min_steps,
                   double max_step) {
  const Sampler sample{f, zero_floor};
  double total = 0.0;
  const std::size_t n = vertices.size();
  cplx prev = vertices[0];
  cplx fprev = sample(prev);
  const cplx f0 = fprev;
  for (std::size_t e = 0; e < n; ++e) {
    const cplx a = vertices[e], b = vertices[(e + 1) % n];
    const int steps = std::max(min_steps, static_cast<int>(std::ceil(std::abs(b - a) / max_step)));
    for (int k = 1; k <= steps; ++k) {
      const cplx z = k == steps ? b : a + (b - a) * (static_cast<double>(k) / steps);
      const cplx fz = (k == steps && e + 1 == n) ? f0 : sample(z);
      total += sample.phase(prev, fprev, z, fz, 0);
      prev = z;
      fprev = fz;
    }
  }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

int winding_on_circle(const ComplexFn& f, cplx center, double radius, double zero_floor, int points) {
  std::vector<cplx> ring(points);
  for (int j = 0; j < points; ++j) ring[j] = center + std::polar(radius, 2.0 * kPi * j / points);
  return winding_number(f, ring, zero_floor, 1, 2.0 * radius);
}

std::vector<cplx> rectangle(cplx lo, cplx hi) {
  return {lo, {hi.real(), lo.imag()}, hi, {lo.real(), hi.imag()}};
}

}  // namespace hz::zeta
