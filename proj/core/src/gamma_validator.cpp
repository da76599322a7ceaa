#include "roughfilm/gamma_validator.hpp"

#include <algorithm>
#include <cmath>

#include "roughfilm/parallel.hpp"

namespace roughfilm {

namespace {

// Surface data of one profile pair at a planar point, dotted with m.
struct PointData {
  double f1, f2;    // profile values
  double mn1, mn2;  // m . n_i with n_i = (-grad f_i, 1)
};

struct KernelCtx {
  bool parallel;
  double a = 0.0;  // parallel offset
  double eps;
  double pref;  // 1/(4 pi eps) general, 1/(2 pi eps) parallel
};

inline double kernel_value(const KernelCtx& c, const PointData& w, const PointData& v,
                           double r2) {
  const double e2 = c.eps * c.eps;
  if (c.parallel) {
    const double df = w.f1 - v.f1;
    const double ad = c.a + df;
    return c.pref * w.mn1 * v.mn1 *
           (1.0 / std::sqrt(r2 + e2 * df * df) - 1.0 / std::sqrt(r2 + e2 * ad * ad));
  }
  const double d1 = w.f1 - v.f1;
  const double d2 = w.f2 - v.f2;
  const double d3 = w.f1 - v.f2;
  return c.pref * (w.mn1 * v.mn1 / std::sqrt(r2 + e2 * d1 * d1) +
                   w.mn2 * v.mn2 / std::sqrt(r2 + e2 * d2 * d2) -
                   2.0 * w.mn1 * v.mn2 / std::sqrt(r2 + e2 * d3 * d3));
}

PointData sample_point(const FilmGeometry& geom, const Vec3& m, const Vec2& u, bool parallel) {
  PointData d{};
  const auto [v1, g1] = geom.f1().eval_grad(u);
  d.f1 = v1;
  d.mn1 = -m[0] * g1[0] - m[1] * g1[1] + m[2];
  if (!parallel) {
    const auto [v2, g2] = geom.f2().eval_grad(u);
    d.f2 = v2;
    d.mn2 = -m[0] * g2[0] - m[1] * g2[1] + m[2];
  }
  return d;
}

// Measure of {u in [0, X] : frac(u) in [i/n, (i+1)/n)}, X >= 0.
inline double cell_measure(double X, int i, int n) {
  const double full = std::floor(X);
  const double f = X - full;
  const double lo = static_cast<double>(i) / n;
  const double width = 1.0 / n;
  return full * width + std::clamp(f - lo, 0.0, width);
}

// Periodic-cell weights of the interval [alpha, beta] on an n-cell midpoint
// grid; exact clipping, sum equals beta - alpha.
void interval_weights(double alpha, double beta, int n, std::vector<double>& w) {
  w.assign(static_cast<size_t>(n), 0.0);
  if (!(beta > alpha)) return;
  const double shift = std::max(0.0, std::ceil(-alpha));
  alpha += shift;
  beta += shift;
  for (int i = 0; i < n; ++i)
    w[static_cast<size_t>(i)] = cell_measure(beta, i, n) - cell_measure(alpha, i, n);
}

int round_up8(double x) {
  const int n = static_cast<int>(std::ceil(x));
  return ((n + 7) / 8) * 8;
}

}  // namespace

FiniteEpsResult finite_eps_energy(const FilmGeometry& geom, const Vec3& m, double eps,
                                  const GammaResolution& res, int threads, GammaKernel kernel) {
  if (!(eps > 0.0) || eps > 1.0) throw ConfigError("finite_eps_energy needs 0 < eps <= 1");
  if (std::abs(m.norm() - 1.0) > 1e-12)
    throw ConfigError("finite_eps_energy needs a unit magnetization vector");
  if (res.base < 4 || res.min_per_period < 2 || res.cell_pts < 2)
    throw ConfigError("gamma resolution parameters too small");

  const Rect& om = geom.omega();
  KernelCtx ctx{};
  ctx.parallel = (kernel == GammaKernel::Parallel) ||
                 (kernel == GammaKernel::Auto && geom.parallel_offset().has_value());
  if (ctx.parallel) {
    if (!geom.parallel_offset())
      throw ConfigError("parallel gamma kernel requires a geometry with parallel_offset");
    ctx.a = *geom.parallel_offset();
  }
  ctx.eps = eps;
  ctx.pref = ctx.parallel ? 1.0 / (2.0 * M_PI * eps) : 1.0 / (4.0 * M_PI * eps);

  const int q = std::max(res.min_per_period,
                         static_cast<int>(std::llround(res.base * eps)));
  const double dz = eps / q;
  const int nc = res.cell_pts;

  // Near-diagonal square patch, grid-aligned, half-width 2 eps capped at
  // diam(omega)/4.
  const double r_cap = om.diameter() / 4.0;
  const bool insufficient = 2.0 * eps > r_cap;
  const int k_s = std::max(1, static_cast<int>(std::floor(std::min(2.0 * eps, r_cap) / dz + 1e-9)));
  const double r_s = k_s * dz;

  // Cached v-side samples on the cell midpoint grid.
  std::vector<PointData> vside(static_cast<size_t>(nc) * nc);
  for (int j = 0; j < nc; ++j)
    for (int i = 0; i < nc; ++i)
      vside[static_cast<size_t>(j) * nc + i] =
          sample_point(geom, m, Vec2((i + 0.5) / nc, (j + 0.5) / nc), ctx.parallel);

  // Grid z nodes have shift s = z/eps with frac(s) on a q-point lattice per
  // axis, so shifted samples live on a (nc*q)^2 table reused across z.
  const int nshift = nc * q;
  std::vector<PointData> shifted(static_cast<size_t>(nshift) * nshift);
  for (int cj = 0; cj < q; ++cj)
    for (int ci = 0; ci < q; ++ci)
      for (int j = 0; j < nc; ++j)
        for (int i = 0; i < nc; ++i) {
          const Vec2 u((i + 0.5) / nc + (ci + 0.5) / q, (j + 0.5) / nc + (cj + 0.5) / q);
          shifted[(static_cast<size_t>(cj) * nc + j) * nshift +
                  static_cast<size_t>(ci) * nc + i] = sample_point(geom, m, u, ctx.parallel);
        }

  const int half_x = static_cast<int>(std::ceil(om.width / dz - 1e-12));
  const int half_y = static_cast<int>(std::ceil(om.height / dz - 1e-12));

  // y-side overlap interval per axis, in units of the eps cell.
  auto axis_interval = [eps](double x0, double wdt, double z, double& alpha, double& beta) {
    const double A = std::max(x0, x0 - z);
    const double B = std::min(x0 + wdt, x0 + wdt - z);
    alpha = A / eps;
    beta = B / eps;
    return B > A;
  };

  // Patch polar layout over the square [-r_s, r_s]^2: exact geometry via
  // R(theta), two-point Gauss-Legendre per radial cell, angular midpoint.
  const int n_theta = round_up8(std::max(64.0, 48.0 * r_s / eps));
  const int n_rad = std::max(8, static_cast<int>(std::ceil(16.0 * r_s / eps)));
  const double gl_off = 0.5 / std::sqrt(3.0);

  const int grid_rows = 2 * half_y;
  const int n_slots = grid_rows + n_theta;

  std::vector<double> slots;
  map_slots(slots, n_slots, threads, [&](int slot) -> double {
    std::vector<double> lw1, lw2;  // per-worker scratch
    auto inner = [&](const Vec2& z, double r2, auto&& wside_at) -> double {
      double alpha1, beta1, alpha2, beta2;
      if (!axis_interval(om.x0, om.width, z[0], alpha1, beta1)) return 0.0;
      if (!axis_interval(om.y0, om.height, z[1], alpha2, beta2)) return 0.0;
      interval_weights(alpha1, beta1, nc, lw1);
      interval_weights(alpha2, beta2, nc, lw2);
      double acc = 0.0;
      for (int j = 0; j < nc; ++j) {
        const double wj = lw2[static_cast<size_t>(j)];
        if (wj == 0.0) continue;
        double row = 0.0;
        for (int i = 0; i < nc; ++i) {
          const double wi = lw1[static_cast<size_t>(i)];
          if (wi == 0.0) continue;
          row +=
              wi * kernel_value(ctx, wside_at(i, j), vside[static_cast<size_t>(j) * nc + i], r2);
        }
        acc += wj * row;
      }
      return acc * eps * eps;
    };

    if (slot < grid_rows) {
      const int jz = slot - half_y;
      const double z2 = (jz + 0.5) * dz;
      const int cj = ((jz % q) + q) % q;
      double acc = 0.0;
      for (int iz = -half_x; iz < half_x; ++iz) {
        const double z1 = (iz + 0.5) * dz;
        if (std::abs(z1) < r_s && std::abs(z2) < r_s) continue;  // patch cells
        const int ci = ((iz % q) + q) % q;
        const size_t base_off = static_cast<size_t>(cj) * nc * nshift + static_cast<size_t>(ci) * nc;
        auto wside = [&](int i, int j) -> const PointData& {
          return shifted[base_off + static_cast<size_t>(j) * nshift + i];
        };
        acc += inner(Vec2(z1, z2), z1 * z1 + z2 * z2, wside);
      }
      return acc * dz * dz;
    }

    const int jt = slot - grid_rows;
    const double dth = 2.0 * M_PI / n_theta;
    const double th = (jt + 0.5) * dth;
    const double ct = std::cos(th), st = std::sin(th);
    const double Rth = r_s / std::max(std::abs(ct), std::abs(st));
    const double dr = Rth / n_rad;
    double acc = 0.0;
    for (int l = 0; l < n_rad; ++l) {
      for (int gp = 0; gp < 2; ++gp) {
        const double r = (l + 0.5 + (gp == 0 ? -gl_off : gl_off)) * dr;
        const Vec2 z(r * ct, r * st);
        const Vec2 s = z / eps;
        // Shifted samples are evaluated directly; patch shifts are off-lattice.
        auto wside = [&](int i, int j) {
          return sample_point(geom, m, Vec2((i + 0.5) / static_cast<double>(nc) + s[0],
                                            (j + 0.5) / static_cast<double>(nc) + s[1]),
                              ctx.parallel);
        };
        acc += inner(z, r * r, wside) * r * (0.5 * dr) * dth;
      }
    }
    return acc;
  });

  double total = 0.0;
  for (double s : slots) total += s;
  if (!std::isfinite(total))
    throw NumericalError("finite_eps_energy produced a non-finite value");

  return FiniteEpsResult{total, insufficient};
}

EpsSweep sweep(const FilmGeometry& geom, const Vec3& m, const std::vector<double>& eps_list,
               const AnisotropyTensor& target_tensor, const GammaResolution& res, int threads,
               GammaKernel kernel) {
  if (eps_list.empty()) throw ConfigError("sweep needs a nonempty eps list");
  for (size_t i = 0; i + 1 < eps_list.size(); ++i)
    if (!(eps_list[i] > eps_list[i + 1]))
      throw ConfigError("sweep eps list must be strictly decreasing");
  if (std::abs(m.norm() - 1.0) > 1e-12) throw ConfigError("sweep needs a unit magnetization");

  const double target = geom.omega().area() * m.dot(target_tensor.sym * m);

  EpsSweep out;
  out.m = m;
  out.records.reserve(eps_list.size());
  for (double eps : eps_list) {
    const FiniteEpsResult r = finite_eps_energy(geom, m, eps, res, threads, kernel);
    SweepRecord rec;
    rec.eps = eps;
    rec.I_eps = r.value;
    rec.target = target;
    rec.abs_error = std::abs(r.value - target);
    rec.rel_error = rec.abs_error / std::max(std::abs(target), 1e-12);
    rec.resolution_insufficient = r.resolution_insufficient;
    out.records.push_back(rec);
  }

  const size_t n = out.records.size();
  if (n >= 2) {
    const SweepRecord& p = out.records[n - 2];
    const SweepRecord& c = out.records[n - 1];
    out.extrapolated = c.I_eps + (c.I_eps - p.I_eps) * c.eps / (p.eps - c.eps);
  } else {
    out.extrapolated = out.records.back().I_eps;
  }
  return out;
}

}  // namespace roughfilm
