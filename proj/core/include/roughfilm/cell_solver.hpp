#pragma once

#include <array>
#include <vector>

#include "roughfilm/geometry.hpp"
#include "roughfilm/types.hpp"

namespace roughfilm {

using Xi = Eigen::Matrix<double, 3, 2>;

struct MeshParams {
  int n_h = 32;          // in-plane nodes per axis (periodic)
  int n_v = 16;          // vertical layers
  double cg_tol = 1e-10; // relative residual target
};

/// Structured mesh on the rough cell via the graph map
/// y3 = f1(y') + t (f2(y') - f1(y')), t in [0,1]. Vertical derivatives pick up
/// 1/(f2-f1), in-plane ones the -(grad f1 + t grad(f2-f1))/(f2-f1) correction.
/// The discrete energy integrates the trilinear-element integrand with the
/// full 2x2x2 Gauss rule per cell, jacobian data (f2-f1, grad f1, grad f2)
/// sampled at the quadrature points. This keeps the operator symmetric
/// positive semidefinite with kernel exactly the constants; a single midpoint
/// per cell admits zero-energy checkerboard modes whose count grows with the
/// mesh and breaks the conjugate-gradient solve.
class CellMesh {
 public:
  CellMesh(const FilmGeometry& geom, const MeshParams& params);

  int n_h() const { return n_h_; }
  int n_v() const { return n_v_; }
  int node_count() const { return n_h_ * n_h_ * (n_v_ + 1); }
  /// Discrete cell volume, sum of cell weights = midpoint integral of f2 - f1.
  double volume() const { return volume_; }
  /// Lumped volume weight of one node.
  const std::vector<double>& node_weights() const { return node_w_; }

  int node_index(int i, int j, int k) const {
    return (k * n_h_ + ((j % n_h_ + n_h_) % n_h_)) * n_h_ + ((i % n_h_ + n_h_) % n_h_);
  }

  /// out = A phi where A is the energy Hessian (one scalar block per field
  /// component). `out` is zeroed first.
  void apply(const std::vector<Vec3>& phi, std::vector<Vec3>& out) const;
  /// rhs of the corrector equation A phi = -sum w L^T xi-rows.
  std::vector<Vec3> rhs(const Xi& xi) const;
  /// Discrete energy of (xi, phi).
  double energy(const Xi& xi, const std::vector<Vec3>& phi) const;
  /// Volume-weighted mean removed per component.
  void project_mean_zero(std::vector<Vec3>& phi) const;

 private:
  template <class PerGauss>
  void for_gauss(PerGauss&& f) const;

  int n_h_ = 0;
  int n_v_ = 0;
  double volume_ = 0.0;
  std::vector<double> gauss_g_;  // thickness at the 4 in-plane Gauss points per column
  std::vector<Vec2> gauss_gf1_;  // grad f1 there
  std::vector<Vec2> gauss_gg_;   // grad (f2 - f1) there
  std::vector<double> node_w_;
};

struct CellSolution {
  Xi xi = Xi::Zero();
  std::vector<Vec3> phi;  // node-ordered, index (k*n_h + j)*n_h + i
  double energy = 0.0;
  double residual = 0.0;
  int iterations = 0;
  int n_h = 0;
  int n_v = 0;
  double volume = 0.0;
};

/// Minimizes the discrete exchange cell energy over mean-zero Q-periodic
/// 3-vector fields by conjugate gradient (relative residual `cg_tol`, cap
/// 10 n_h^2 n_v iterations). Throws NumericalError on non-convergence.
CellSolution solve_cell(const FilmGeometry& geom, const MeshParams& params, const Xi& xi);

/// 2x2 exchange tensor with g_hom(xi) = sum_i G xi_i . xi_i over the rows of
/// xi, assembled from three single-row solves and the polarization identity.
struct ExchangeTensor {
  Mat2 G = Mat2::Zero();
  std::array<double, 3> basis_energies{0.0, 0.0, 0.0};  // slopes (1,0), (0,1), (1,1)
  std::array<double, 3> residuals{0.0, 0.0, 0.0};
  double volume = 0.0;
};

ExchangeTensor exchange_tensor(const FilmGeometry& geom, const MeshParams& params);

}  // namespace roughfilm
