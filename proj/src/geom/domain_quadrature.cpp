#include "hz/geom/domain_quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "hz/error.hpp"
#include "hz/numeric.hpp"

namespace hz::geom {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

// Boundary geodesic of one half-disk in the disk model centred at the base
// point: a circle orthogonal to the unit circle.
struct DiskGeodesic {
  double theta_mid = 0.0;   // direction of the arc midpoint
  double half_angle = 0.0;  // angular half-width of the arc
  double center_abs = 0.0;  // |C| = 1 / cos(half_angle)
};

double wrap(double t) {
  t = std::fmod(t, kTwoPi);
  return t < 0.0 ? t + kTwoPi : t;
}

std::vector<DiskGeodesic> disk_geodesics(const SchottkyData& group) {
  const cplx p = group.base_point();
  auto to_disk = [&](double x) { return (cplx(x, 0.0) - p) / (cplx(x, 0.0) - std::conj(p)); };
  std::vector<DiskGeodesic> out;
  for (const auto& pair : group.intervals()) {
    for (const Interval* iv : {&pair.plus, &pair.minus}) {
      const cplx u1 = to_disk(iv->lo);
      const cplx u2 = to_disk(iv->hi);
      const cplx s = u1 + u2;
      const double cos_a = 0.5 * std::abs(s);
      out.push_back({std::arg(s), std::acos(std::clamp(cos_a, -1.0, 1.0)), 1.0 / cos_a});
    }
  }
  return out;
}

double angular_offset(double theta, double mid) {
  double d = std::fmod(theta - mid, kTwoPi);
  if (d > kPi) d -= kTwoPi;
  if (d < -kPi) d += kTwoPi;
  return d;
}

double exit_radius_from(const std::vector<DiskGeodesic>& disks, double theta) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& g : disks) {
    const double beta = g.center_abs * std::cos(angular_offset(theta, g.theta_mid));
    if (beta <= 1.0) continue;
    const double t = 1.0 / (beta + std::sqrt(beta * beta - 1.0));  // beta - sqrt(beta^2 - 1)
    best = std::min(best, 2.0 * std::atanh(t));
  }
  return best;
}

}  // namespace

cplx polar_point(cplx p, double r, double theta) {
  const cplx w = std::tanh(0.5 * r) * std::polar(1.0, theta);
  return (p - std::conj(p) * w) / (1.0 - w);
}

double exit_radius(const SchottkyData& group, double theta) { return exit_radius_from(disk_geodesics(group), theta); }

std::vector<AngularPanel> angular_panels(const SchottkyData& group, double R) {
  const auto disks = disk_geodesics(group);
  std::vector<double> cuts;
  const double tR = std::tanh(0.5 * R);
  const double beta_R = 0.5 * (tR + 1.0 / tR);
  for (const auto& g : disks) {
    cuts.push_back(wrap(g.theta_mid - g.half_angle));
    cuts.push_back(wrap(g.theta_mid + g.half_angle));
    // Directions where the ray leaves F exactly at radius R.
    const double c = beta_R / g.center_abs;
    if (c < 1.0) {
      const double off = std::acos(c);
      cuts.push_back(wrap(g.theta_mid - off));
      cuts.push_back(wrap(g.theta_mid + off));
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double a, double b) { return std::abs(a - b) < 1e-15; }),
             cuts.end());
  std::vector<AngularPanel> panels;
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = (i + 1 < cuts.size()) ? cuts[i + 1] : cuts[0] + kTwoPi;
    if (hi - lo <= 0.0) continue;
    const double mid = 0.5 * (lo + hi);
    panels.push_back({lo, hi, exit_radius_from(disks, mid) >= R});
  }
  if (panels.empty()) panels.push_back({0.0, kTwoPi, true});
  return panels;
}

DomainQuadratureResult domain_quadrature(const SchottkyData& group, const std::function<double(cplx)>& integrand,
                                         double R, const DomainQuadratureOptions& options) {
  if (!(R > 0.0)) throw Error(ErrorKind::InputError, "truncation radius R must be positive");
  using boost::math::quadrature::gauss_kronrod;

  const cplx p = group.base_point();
  const auto disks = disk_geodesics(group);
  const auto panels = angular_panels(group, R);

  struct Piece {
    double lo, hi;
    int radial_panels;
  };
  std::vector<Piece> pieces;
  const int sub = std::max(1, options.theta_subpanels);
  for (const auto& panel : panels) {
    const double w = (panel.theta_hi - panel.theta_lo) / sub;
    for (int k = 0; k < sub; ++k) {
      const double lo = panel.theta_lo + k * w, hi = lo + w;
      double r_top = 0.0;
      for (int j = 0; j <= 8; ++j) r_top = std::max(r_top, std::min(R, exit_radius_from(disks, lo + w * j / 8.0)));
      pieces.push_back({lo, hi, std::max(1, static_cast<int>(std::ceil(r_top / options.radial_panel)))});
    }
  }

  // Inner integral in the normalised radius tau = r / r_max(theta) over a
  // fixed panel count, so that it is a smooth function of theta on a piece.
  // It runs at a tighter tolerance than the outer rule.
  const double inner_tol = std::max(1e-3 * options.rel_tol, 5e-14);
  auto radial = [&](double theta, int n_panels, double& err) {
    const double r_max = std::min(R, exit_radius_from(disks, theta));
    CompensatedSum s;
    for (int k = 0; k < n_panels; ++k) {
      double e = 0.0;
      s.add(gauss_kronrod<double, 15>::integrate(
          [&](double tau) {
            const double r = r_max * tau;
            return integrand(polar_point(p, r, theta)) * std::sinh(r) * r_max;
          },
          static_cast<double>(k) / n_panels, static_cast<double>(k + 1) / n_panels, options.max_depth, inner_tol,
          &e));
      err += e;
    }
    return s.value();
  };

  struct PieceResult {
    double value = 0.0;
    double error = 0.0;
  };
  const int threads = options.threads > 0 ? options.threads : concurrency();
  const auto results = parallel_map(pieces.size(), threads, [&](std::size_t i) {
    PieceResult out;
    double inner_err = 0.0;
    double outer_err = 0.0;
    // r_exit(theta) has logarithmic endpoint singularities on closed panels;
    // tanh-sinh absorbs them.
    boost::math::quadrature::tanh_sinh<double> ts(options.outer_depth);
    double l1 = 0.0;
    out.value = ts.integrate([&](double theta) { return radial(theta, pieces[i].radial_panels, inner_err); },
                             pieces[i].lo, pieces[i].hi, options.rel_tol, &outer_err, &l1);
    out.error = outer_err;
    return out;
  });

  DomainQuadratureResult res;
  CompensatedSum total;
  for (const auto& r : results) {
    total.add(r.value);
    res.error_estimate += r.error;
  }
  res.value = total.value();
  res.panels = pieces.size();

  // Funnel tail: sample the sphere of radius R in directions still inside F.
  double max_on_sphere = 0.0;
  for (const auto& panel : panels) {
    if (!panel.open) continue;
    for (int k = 0; k <= 16; ++k) {
      const double theta = panel.theta_lo + (panel.theta_hi - panel.theta_lo) * k / 16.0;
      if (exit_radius_from(disks, theta) < R) continue;
      max_on_sphere = std::max(max_on_sphere, std::abs(integrand(polar_point(p, R, theta))));
    }
  }
  res.tail_estimate = max_on_sphere * std::exp(R);
  if (options.tail_tol > 0.0 && res.tail_estimate > options.tail_tol * std::abs(res.value)) {
    throw Error(ErrorKind::TailDominates, "funnel tail estimate " + std::to_string(res.tail_estimate) +
                                              " exceeds tolerance at R = " + std::to_string(R) + "; raise R");
  }
  return res;
}

}  // namespace hz::geom
