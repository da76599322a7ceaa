#pragma once

#include <utility>
#include <vector>

#include "roughfilm/anisotropy.hpp"
#include "roughfilm/cell_solver.hpp"
#include "roughfilm/types.hpp"

namespace roughfilm {

struct EnergyParams {
  double d = 1.0;  // exchange constant, > 0
};

/// N x N grid of unit 3-vectors sampled on omega, nodes including the
/// boundary, spacing h = side / (N - 1).
class MagnetizationField {
 public:
  MagnetizationField(std::vector<Vec3> values, int n, const Rect& omega);

  int n() const { return n_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  const Rect& omega() const { return omega_; }
  const Vec3& at(int i, int j) const { return values_[static_cast<size_t>(j) * n_ + i]; }

 private:
  std::vector<Vec3> values_;
  int n_ = 0;
  double hx_ = 0.0;
  double hy_ = 0.0;
  Rect omega_;
};

struct EnergyBreakdown {
  double exchange = 0.0;
  double anisotropy = 0.0;
  double total = 0.0;
};

/// Reduced energy d^2 Int g_hom(grad m) + Int sym m . m over omega, with
/// g_hom evaluated through the exchange-tensor reconstruction
/// g_hom(grad m) = sum_i G (grad m_i) . (grad m_i). Gradients use central
/// differences, one-sided at omega's boundary; both terms are integrated
/// with trapezoid weights so a constant field gives exactly
/// |omega| * (sym m . m).
EnergyBreakdown evaluate_E0(const MagnetizationField& field, const ExchangeTensor& G,
                            const AnisotropyTensor& A, const EnergyParams& params);

/// Global minimizer among constant fields: the easy axis and
/// |omega| * min_e sym e . e. Constants are global minimizers of the reduced
/// energy, so this is the global minimum.
std::pair<EasyAxis, double> constant_minimizer(const ExchangeTensor& G, const AnisotropyTensor& A,
                                               const EnergyParams& params, const Rect& omega);

}  // namespace roughfilm
