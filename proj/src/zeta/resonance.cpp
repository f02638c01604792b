#include "hz/zeta/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hz/error.hpp"
#include "hz/numeric.hpp"
#include "hz/zeta/contour.hpp"

namespace hz::zeta {

namespace {

constexpr double kContourFloor = 1e-12;

struct Cell {
  cplx lo, hi;
  cplx center() const { return 0.5 * (lo + hi); }
  double min_side() const { return std::min(hi.real() - lo.real(), hi.imag() - lo.imag()); }
  bool contains(cplx z) const {
    return z.real() >= lo.real() && z.real() <= hi.real() && z.imag() >= lo.imag() && z.imag() <= hi.imag();
  }
  double distance_to_edge(cplx z) const {
    return std::min({z.real() - lo.real(), hi.real() - z.real(), z.imag() - lo.imag(), hi.imag() - z.imag()});
  }
};

class Isolator {
 public:
  Isolator(const Determinant& det, const ZeroSearchOptions& opt) : det_(det), opt_(opt) {}

  cplx Z(cplx lambda) const { return det_.value(to_s(lambda)); }

  int winding(const Cell& c) const {
    return winding_number([this](cplx z) { return Z(z); }, rectangle(c.lo, c.hi), kContourFloor);
  }

  void isolate(const Cell& cell, int w, int depth, std::vector<Resonance>& out) const {
    cplx z = cell.center();
    if (newton(z, w) && cell.contains(z)) {
      const double rho = std::min(0.5 * cell.distance_to_edge(z), 0.25 * cell.min_side());
      if (rho > 10.0 * opt_.tol) {
        int around = -1;
        try {
          around = winding_on_circle([this](cplx x) { return Z(x); }, z, rho, kContourFloor);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::ContourThroughZero) throw;
        }
        if (around == w) {
          out.push_back({z, w, std::abs(Z(z)), rho, true});
          return;
        }
      }
    }
    if (depth >= opt_.max_depth) {
      out.push_back({z, w, std::abs(Z(z)), 0.0, false});
      return;
    }
    // Off-centre split so that zeros at symmetric positions (the real axis,
    // lattice points) do not land on the new edges.
    const std::array<double, 3> fractions{0.4637, 0.5419, 0.3779};
    for (std::size_t attempt = 0; attempt < fractions.size(); ++attempt) {
      const double f = fractions[attempt];
      const cplx m{cell.lo.real() + f * (cell.hi.real() - cell.lo.real()),
                   cell.lo.imag() + f * (cell.hi.imag() - cell.lo.imag())};
      const std::array<Cell, 4> kids{Cell{cell.lo, m}, Cell{{m.real(), cell.lo.imag()}, {cell.hi.real(), m.imag()}},
                                     Cell{{cell.lo.real(), m.imag()}, {m.real(), cell.hi.imag()}},
                                     Cell{m, cell.hi}};
      std::array<int, 4> counts{};
      try {
        for (std::size_t k = 0; k < 4; ++k) counts[k] = winding(kids[k]);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::ContourThroughZero || attempt + 1 == fractions.size()) throw;
        continue;
      }
      for (std::size_t k = 0; k < 4; ++k) {
        if (counts[k] > 0) isolate(kids[k], counts[k], depth + 1, out);
      }
      return;
    }
  }

 private:
  // Newton for a zero of multiplicity m: z <- z - m d/d'.
  bool newton(cplx& z, int m) const {
    double last_step = INFINITY;
    for (int it = 0; it < 60; ++it) {
      const auto e = det_.expand(to_s(z), 1);
      if (e.value[0] == 0.0) return true;
      if (e.value[1] == 0.0) return false;
      const cplx step = static_cast<double>(m) * e.value[0] / e.value[1];
      z -= step;
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
      last_step = std::abs(step);
      if (last_step <= opt_.tol * std::max(1.0, std::abs(z))) return true;
    }
    // Multiple roots stall at about sqrt(eps) relative accuracy.
    return last_step <= std::sqrt(opt_.tol);
  }

  const Determinant& det_;
  const ZeroSearchOptions& opt_;
};

}  // namespace

ZeroSearchResult zero_search(const Determinant& det, cplx lo, cplx hi, const ZeroSearchOptions& options) {
  if (!(hi.real() > lo.real() && hi.imag() > lo.imag()) || options.grid_re < 1 || options.grid_im < 1) {
    throw Error(ErrorKind::InputError, "zero search needs a non-degenerate rectangle and a positive grid");
  }
  for (cplx corner : rectangle(lo, hi)) det.expand(to_s(corner), 0, true);
  det.expand(to_s(0.5 * (lo + hi)), 0, true);

  const Isolator iso(det, options);
  ZeroSearchResult result;
  result.total_winding = iso.winding({lo, hi});
  const int threads = options.threads > 0 ? options.threads : concurrency();
  const double dx = (hi.real() - lo.real()) / options.grid_re;
  const double dy = (hi.imag() - lo.imag()) / options.grid_im;

  for (int attempt = 0; attempt <= options.retries; ++attempt) {
    std::vector<double> xs(options.grid_re + 1), ys(options.grid_im + 1);
    std::mt19937_64 rng(options.seed + static_cast<std::uint64_t>(attempt));
    std::uniform_real_distribution<double> jitter(-0.15, 0.15);
    for (int i = 0; i <= options.grid_re; ++i) {
      const bool inner = attempt > 0 && i > 0 && i < options.grid_re;
      xs[i] = i == options.grid_re ? hi.real() : lo.real() + dx * (i + (inner ? jitter(rng) : 0.0));
    }
    for (int j = 0; j <= options.grid_im; ++j) {
      const bool inner = attempt > 0 && j > 0 && j < options.grid_im;
      ys[j] = j == options.grid_im ? hi.imag() : lo.imag() + dy * (j + (inner ? jitter(rng) : 0.0));
    }
    const auto cells = static_cast<std::size_t>(options.grid_re * options.grid_im);
    auto cell_at = [&](std::size_t k) {
      const auto i = static_cast<int>(k) % options.grid_re, j = static_cast<int>(k) / options.grid_re;
      return Cell{{xs[i], ys[j]}, {xs[i + 1], ys[j + 1]}};
    };
    try {
      const auto counts = parallel_map(cells, threads, [&](std::size_t k) { return iso.winding(cell_at(k)); });
      int sum = 0;
      for (int c : counts) sum += c;
      if (sum != result.total_winding) {
        throw Error(ErrorKind::ContourThroughZero, "cell windings do not add up to the boundary winding");
      }
      auto found = parallel_map(cells, threads, [&](std::size_t k) {
        std::vector<Resonance> out;
        if (counts[k] > 0) iso.isolate(cell_at(k), counts[k], 0, out);
        return out;
      });
      std::vector<Resonance> zeros;
      for (auto& f : found) zeros.insert(zeros.end(), f.begin(), f.end());
      // A zero sitting on a grid line (a double zero does not even flip the
      // phase there) splits between cells and fails verification.
      const bool clean = std::all_of(zeros.begin(), zeros.end(), [](const Resonance& r) { return r.verified; });
      if (!clean && attempt < options.retries) continue;
      result.zeros = std::move(zeros);
      result.jitter_retries = attempt;
      break;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ContourThroughZero || attempt == options.retries) throw;
    }
  }
  std::sort(result.zeros.begin(), result.zeros.end(), [](const Resonance& a, const Resonance& b) {
    const double ma = std::abs(a.mu), mb = std::abs(b.mu);
    if (std::abs(ma - mb) > 1e-9 * std::max(1.0, ma)) return ma < mb;
    return a.mu.imag() < b.mu.imag();
  });
  return result;
}

ResidueCheck residue_check(const Determinant& det, cplx mu, double radius, int points) {
  if (!(radius > 0.0) || points < 8) throw Error(ErrorKind::InputError, "residue check needs radius > 0, points >= 8");
  // Trapezoidal rule for (1/2 pi i) int L dlambda = mean of L(lambda_j) (lambda_j - mu).
  auto trapezoid = [&](int m, int stride) {
    ComplexCompensatedSum sum;
    for (int j = 0; j < m; ++j) {
      const cplx offset = std::polar(radius, 2.0 * kPi * j * stride / points);
      cplx value;
      try {
        value = L_gamma_determinant(det, mu + offset);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NearZeroOfZ) throw;
        throw Error(ErrorKind::ContourThroughZero, "residue circle passes near a zero of Z; change the radius");
      }
      sum.add(value * offset);
    }
    return sum.value() / static_cast<double>(m);
  };
  ResidueCheck out;
  out.residue = trapezoid(points, 1);
  out.quadrature_change = std::abs(out.residue - trapezoid(points / 2, 2));
  out.nearest = std::lround(out.residue.real());
  out.defect = std::abs(out.residue - static_cast<double>(out.nearest));
  out.order_mu = winding_on_circle([&](cplx z) { return det.value(to_s(z)); }, mu, radius, kContourFloor);
  out.order_minus_mu = winding_on_circle([&](cplx z) { return det.value(to_s(-z)); }, mu, radius, kContourFloor);
  out.consistent = out.nearest == out.order_mu - out.order_minus_mu;
  return out;
}

}  // namespace hz::zeta
