#include "roughfilm/energy.hpp"

#include <cmath>

namespace roughfilm {

MagnetizationField::MagnetizationField(std::vector<Vec3> values, int n, const Rect& omega)
    : values_(std::move(values)), n_(n), omega_(omega) {
  if (n_ < 2) throw ConfigError("magnetization field needs at least 2x2 nodes");
  if (values_.size() != static_cast<size_t>(n_) * static_cast<size_t>(n_))
    throw ConfigError("magnetization field size mismatch: expected " + std::to_string(n_) + "x" +
                      std::to_string(n_) + " nodes");
  hx_ = omega.width / (n_ - 1);
  hy_ = omega.height / (n_ - 1);
  for (const Vec3& v : values_)
    if (std::abs(v.norm() - 1.0) > 1e-10)
      throw ConfigError("magnetization field contains a non-unit vector");
}

EnergyBreakdown evaluate_E0(const MagnetizationField& field, const ExchangeTensor& G,
                            const AnisotropyTensor& A, const EnergyParams& params) {
  if (!(params.d > 0.0)) throw ConfigError("exchange constant d must be positive");
  const int n = field.n();
  const double hx = field.hx();
  const double hy = field.hy();

  // Nodal exchange density sum_i G (grad m_i).(grad m_i); central stencils
  // inside, one-sided first order on the boundary.
  auto grad_at = [&](int i, int j, int axis) -> Vec3 {
    if (axis == 0) {
      if (i == 0) return (field.at(1, j) - field.at(0, j)) / hx;
      if (i == n - 1) return (field.at(n - 1, j) - field.at(n - 2, j)) / hx;
      return (field.at(i + 1, j) - field.at(i - 1, j)) / (2.0 * hx);
    }
    if (j == 0) return (field.at(i, 1) - field.at(i, 0)) / hy;
    if (j == n - 1) return (field.at(i, n - 1) - field.at(i, n - 2)) / hy;
    return (field.at(i, j + 1) - field.at(i, j - 1)) / (2.0 * hy);
  };

  double exch = 0.0;
  double aniso = 0.0;
  const double cell_w = hx * hy;
  for (int j = 0; j < n; ++j) {
    const double wj = (j == 0 || j == n - 1) ? 0.5 : 1.0;
    for (int i = 0; i < n; ++i) {
      const double w = cell_w * wj * ((i == 0 || i == n - 1) ? 0.5 : 1.0);
      const Vec3 dx = grad_at(i, j, 0);
      const Vec3 dy = grad_at(i, j, 1);
      double g = 0.0;
      for (int c = 0; c < 3; ++c) {
        const Vec2 gm(dx[c], dy[c]);
        g += gm.dot(G.G * gm);
      }
      exch += w * g;
      const Vec3& m = field.at(i, j);
      aniso += w * m.dot(A.sym * m);
    }
  }

  EnergyBreakdown out;
  out.exchange = params.d * params.d * exch;
  out.anisotropy = aniso;
  out.total = out.exchange + out.anisotropy;
  if (!std::isfinite(out.total)) throw NumericalError("evaluate_E0 produced a non-finite value");
  return out;
}

std::pair<EasyAxis, double> constant_minimizer(const ExchangeTensor& /*G*/,
                                               const AnisotropyTensor& A,
                                               const EnergyParams& params, const Rect& omega) {
  if (!(params.d > 0.0)) throw ConfigError("exchange constant d must be positive");
  const EasyAxis axis = easy_axis(A);
  return {axis, omega.area() * axis.value};
}

}  // namespace roughfilm
