#include "roughfilm/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace roughfilm {
namespace detail {

namespace {

int round_up8(double x) {
  const int n = static_cast<int>(std::ceil(x));
  return ((n + 7) / 8) * 8;
}

// Angular nodes needed on a circle of radius r: harmonics of a periodic
// kernel with content up to `wn` per unit length reach degree ~2*pi*r*wn.
int ring_theta(double r, int floor_nodes, double wn) {
  return std::max(floor_nodes, round_up8(2.0 * M_PI * r * wn + 32.0));
}

}  // namespace

std::vector<std::pair<double, double>> gauss_legendre01(int n) {
  // Newton iteration on Legendre polynomials, then map [-1,1] -> [0,1].
  std::vector<std::pair<double, double>> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    out[static_cast<size_t>(n - 1 - i)] = {0.5 * (x + 1.0), 0.5 * w};
  }
  std::sort(out.begin(), out.end());
  return out;
}

PlaneLayout plane_layout(const PlaneRule& rule) {
  if (!(rule.r_inner > 0.0) || !(rule.R_cut > rule.r_inner))
    throw ConfigError("plane rule needs 0 < r_inner < R_cut");
  if (rule.n_rad < 1 || rule.n_ang < 8 || rule.n_outer < 1)
    throw ConfigError("plane rule resolutions too small");
  if (!(rule.tail_order > 2.05))
    throw ConfigError("plane rule tail_order must exceed 2");

  PlaneLayout layout;
  layout.rings.reserve(static_cast<size_t>(2 + 3 * rule.n_rad + rule.n_outer));

  // Sliver [0, r_min]: one midpoint ring. The desingularized integrand k|z|
  // is bounded, so the sliver contributes O(r_min).
  const double r_min = rule.r_inner * 1e-5;
  layout.rings.push_back({0.5 * r_min, 0.5 * r_min * r_min, rule.n_ang});

  // Inner disk [r_min, r_inner]: log-graded cells, 3-point Gauss-Legendre
  // each, which stays accurate for kernels with structure at any scale b
  // in 1/sqrt(r^2 + b^2).
  static const auto gl3 = gauss_legendre01(3);
  const double rho_in = std::pow(rule.r_inner / r_min, 1.0 / rule.n_rad);
  double a = r_min;
  for (int c = 0; c < rule.n_rad; ++c) {
    const double b = (c + 1 == rule.n_rad) ? rule.r_inner : a * rho_in;
    for (const auto& [xg, wg] : gl3) {
      const double r = a + (b - a) * xg;
      layout.rings.push_back({r, r * (b - a) * wg, rule.n_ang});
    }
    a = b;
  }

  // Annulus [r_inner, R_cut]: geometric radial cells, midpoint per cell,
  // angular count growing with the radius.
  const double rho_out = std::pow(rule.R_cut / rule.r_inner, 1.0 / rule.n_outer);
  a = rule.r_inner;
  for (int c = 0; c < rule.n_outer; ++c) {
    const double b = (c + 1 == rule.n_outer) ? rule.R_cut : a * rho_out;
    const double r = 0.5 * (a + b);
    layout.rings.push_back({r, r * (b - a), ring_theta(r, rule.n_ang, rule.max_wavenumber)});
    a = b;
  }

  // Fitted tail: integral of C/|z|^p beyond R_cut with C from the circle
  // average at R_cut, i.e. 2*pi*R^2*avg/(p-2).
  layout.tail_radius = rule.R_cut;
  layout.tail_samples = ring_theta(rule.R_cut, rule.n_ang, rule.max_wavenumber) * 2;
  layout.tail_factor =
      2.0 * M_PI * rule.R_cut * rule.R_cut / ((rule.tail_order - 2.0) * layout.tail_samples);
  return layout;
}

}  // namespace detail

double kernel_mass(double eps, double L, const PlaneRule& rule, int threads) {
  if (!(eps > 0.0) || !(L > 0.0)) throw ConfigError("kernel_mass needs eps > 0 and L > 0");
  const double b2 = eps * eps * L * L;
  return integrate_plane<double>(
      rule, [b2](const Vec2& z) { return inv_sqrt_diff(z.squaredNorm(), 0.0, b2); }, threads);
}

}  // namespace roughfilm
