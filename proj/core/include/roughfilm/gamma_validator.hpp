#pragma once

#include <vector>

#include "roughfilm/anisotropy.hpp"
#include "roughfilm/geometry.hpp"
#include "roughfilm/types.hpp"

namespace roughfilm {

/// Resolution of the finite-eps boundary-charge quadrature.
///
/// The double integral over omega x omega is reduced by z = x - y. For fixed
/// z the inner integrand is eps-periodic in y, so it is averaged with
/// measure-exact clipping of omega's overlap rectangle against the periodic
/// cell (cell_pts midpoint samples per axis per cell). The outer z grid has
/// spacing eps/q with q = max(min_per_period, round(base * eps)); cost grows
/// as eps shrinks once base no longer resolves the eps-scale oscillation. The
/// near-diagonal singularity is covered by a grid-aligned square patch of
/// half-width 2*eps (capped at diam(omega)/4) integrated in polar form.
struct GammaResolution {
  int base = 128;          // target z nodes per unit length at moderate eps
  int min_per_period = 8;  // z samples per eps period, floor
  int cell_pts = 8;        // periodic-average samples per axis per cell
};

enum class GammaKernel {
  Auto,      // Parallel when the geometry has parallel_offset, else General
  General,   // three-kernel combination, prefactors 1/4pi eps, 1/4pi eps, -1/2pi eps
  Parallel,  // single parallel-roughness kernel, prefactor 1/2pi eps
};

struct FiniteEpsResult {
  double value = 0.0;
  /// Set when the desired near-diagonal patch radius 2*eps exceeds
  /// diam(omega)/4 and had to be capped.
  bool resolution_insufficient = false;
};

/// Finite-eps boundary-boundary magnetostatic interaction for a constant
/// unit magnetization m.
FiniteEpsResult finite_eps_energy(const FilmGeometry& geom, const Vec3& m, double eps,
                                  const GammaResolution& res = {}, int threads = 1,
                                  GammaKernel kernel = GammaKernel::Auto);

struct SweepRecord {
  double eps = 0.0;
  double I_eps = 0.0;
  double target = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
  bool resolution_insufficient = false;
};

struct EpsSweep {
  Vec3 m = Vec3::UnitZ();
  std::vector<SweepRecord> records;
  /// Richardson estimate from the last two records, first order in eps.
  double extrapolated = 0.0;
};

/// Runs finite_eps_energy per eps against the homogenized target
/// |omega| * (sym m . m) taken from the anisotropy tensor.
EpsSweep sweep(const FilmGeometry& geom, const Vec3& m, const std::vector<double>& eps_list,
               const AnisotropyTensor& target_tensor, const GammaResolution& res = {},
               int threads = 1, GammaKernel kernel = GammaKernel::Auto);

}  // namespace roughfilm
