#include "roughfilm/selftest.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include "roughfilm/anisotropy.hpp"
#include "roughfilm/cell_solver.hpp"
#include "roughfilm/energy.hpp"
#include "roughfilm/gamma_validator.hpp"
#include "roughfilm/geometry.hpp"
#include "roughfilm/quadrature.hpp"

namespace roughfilm::selftest {

namespace {

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(9);
  ss << v;
  return ss.str();
}

void add_check(CriterionResult& c, bool ok, const std::string& text) {
  c.checks.push_back(std::string(ok ? "ok " : "FAIL ") + text);
  c.passed = c.passed && ok;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double max_abs(const Mat3& m) { return m.cwiseAbs().maxCoeff(); }

Xi random_xi(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Xi xi;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 2; ++c) xi(r, c) = u(rng);
  return xi;
}

bool bit_equal(const Mat3& a, const Mat3& b) {
  return std::memcmp(a.data(), b.data(), sizeof(double) * 9) == 0;
}

}  // namespace

Report run_acceptance(int threads) {
  Report report;
  const CellRule cell;
  const PlaneRule plane;
  const MeshParams mesh;
  const GammaResolution gres;

  const FilmGeometry flat = FilmGeometry::parallel(Profile::constant(0.0), 1.0);
  const Mat3 e3e3 = Vec3::UnitZ() * Vec3::UnitZ().transpose();

  // --- 1: flat-film anisotropy oracle -------------------------------------
  CriterionResult c1{1, "flat-film anisotropy oracle", true, {}, {}};
  auto t0 = std::chrono::steady_clock::now();
  const AnisotropyTensor flat_general = compute_general(flat, cell, plane, threads);
  const double c1_elapsed = seconds_since(t0);
  {
    const double frob = (flat_general.total - e3e3).norm();
    add_check(c1, frob < 1e-3, "|A_hom - e3 x e3|_F = " + fmt(frob) + " < 1e-3");
    add_check(c1, c1_elapsed < 60.0, "runtime under 60 s");
    c1.timing_notes.push_back("compute_general(flat) took " + fmt(c1_elapsed) + " s");
  }
  report.criteria.push_back(c1);

  // --- 2: parallel/general cross-check ------------------------------------
  CriterionResult c2{2, "parallel/general cross-check", true, {}, {}};
  struct CrossCase {
    const char* name;
    Profile profile;
    double a;
  };
  const std::vector<CrossCase> cross_cases = {
      {"sine2_1d a=0.5", Profile::sine2_1d(), 0.5},
      {"sine2_1d a=1", Profile::sine2_1d(), 1.0},
      {"sine2_2d a=0.5", Profile::sine2_2d(), 0.5},
      {"sine2_2d a=1", Profile::sine2_2d(), 1.0},
  };
  std::vector<AnisotropyTensor> cross_general;
  std::vector<AnisotropyTensor> cross_parallel;
  t0 = std::chrono::steady_clock::now();
  for (const CrossCase& cc : cross_cases) {
    const FilmGeometry geom = FilmGeometry::parallel(cc.profile, cc.a);
    cross_general.push_back(compute_general(geom, cell, plane, threads));
    cross_parallel.push_back(compute_parallel(geom, cell, plane, threads));
    const double dev = max_abs(cross_general.back().total - cross_parallel.back().total);
    add_check(c2, dev < 2e-3,
              std::string(cc.name) + ": max entry deviation " + fmt(dev) + " < 2e-3");
  }
  c2.timing_notes.push_back("cross-check took " + fmt(seconds_since(t0)) + " s");
  report.criteria.push_back(c2);

  // --- 3: kernel mass identity ---------------------------------------------
  CriterionResult c3{3, "kernel mass identity", true, {}, {}};
  for (double eps : {1.0, 0.1, 0.01}) {
    for (double L : {1.0, M_PI}) {
      const double mass = kernel_mass(eps, L, plane, threads);
      const double exact = 2.0 * M_PI * eps * L;
      const double rel = std::abs(mass / exact - 1.0);
      const double bound = M_PI * M_PI * eps * L;
      add_check(c3, rel < 1e-3,
                "eps=" + fmt(eps) + " L=" + fmt(L) + ": relative error " + fmt(rel) + " < 1e-3");
      add_check(c3, mass <= bound + 1e-3 * exact,
                "eps=" + fmt(eps) + " L=" + fmt(L) + ": mass " + fmt(mass) +
                    " within the pi^2 eps L bound " + fmt(bound));
    }
  }
  report.criteria.push_back(c3);

  // --- 4: cell-problem exactness on slabs ----------------------------------
  CriterionResult c4{4, "cell-problem exactness on slabs", true, {}, {}};
  {
    std::mt19937 rng(12345);
    const FilmGeometry slab(Profile::constant(0.3), Profile::constant(1.0), unit_square(), 0.7);
    for (int k = 0; k < 10; ++k) {
      const Xi xi = random_xi(rng);
      const CellSolution sol = solve_cell(slab, mesh, xi);
      const double exact = xi.squaredNorm() * 0.7;
      const double rel = std::abs(sol.energy - exact) / exact;
      double phimax = 0.0;
      for (const Vec3& v : sol.phi) phimax = std::max(phimax, v.cwiseAbs().maxCoeff());
      add_check(c4, rel < 1e-10 && phimax < 1e-12,
                "xi #" + std::to_string(k) + ": relative energy error " + fmt(rel) +
                    " < 1e-10, corrector sup " + fmt(phimax));
    }
  }
  report.criteria.push_back(c4);

  // --- 5: homogeneity and reconstruction -----------------------------------
  CriterionResult c5{5, "homogeneity and reconstruction", true, {}, {}};
  t0 = std::chrono::steady_clock::now();
  {
    std::mt19937 rng(777);
    const FilmGeometry rough = FilmGeometry::parallel(Profile::sine2_1d(), 1.0);
    for (int k = 0; k < 2; ++k) {
      const Xi xi = random_xi(rng);
      const double base = solve_cell(rough, mesh, xi).energy;
      for (double lam : {-2.0, 0.5, 3.0}) {
        const double scaled = solve_cell(rough, mesh, Xi(lam * xi)).energy;
        const double rel = std::abs(scaled - lam * lam * base) / std::max(lam * lam * base, 1e-30);
        add_check(c5, rel < 1e-8,
                  "homogeneity lambda=" + fmt(lam) + " xi #" + std::to_string(k) +
                      ": relative error " + fmt(rel) + " < 1e-8");
      }
    }
    const ExchangeTensor G = exchange_tensor(rough, mesh);
    for (int k = 0; k < 10; ++k) {
      const Xi xi = random_xi(rng);
      const double direct = solve_cell(rough, mesh, xi).energy;
      double rec = 0.0;
      for (int r = 0; r < 3; ++r) {
        const Vec2 row(xi(r, 0), xi(r, 1));
        rec += row.dot(G.G * row);
      }
      const double err = std::abs(direct - rec);
      const double tol = 1e-6 * (1.0 + xi.squaredNorm());
      add_check(c5, err < tol,
                "reconstruction xi #" + std::to_string(k) + ": |direct - quadratic| = " +
                    fmt(err) + " < " + fmt(tol));
    }
  }
  c5.timing_notes.push_back("cell solves took " + fmt(seconds_since(t0)) + " s");
  report.criteria.push_back(c5);

  // --- 6: null-direction property -------------------------------------------
  CriterionResult c6{6, "null-direction property", true, {}, {}};
  {
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const FilmGeometry rough = FilmGeometry::parallel(Profile::sine2_1d(), 0.5);
    for (int k = 0; k < 3; ++k) {
      Vec3 s(u(rng), u(rng), u(rng));
      s.normalize();
      // Columns of xi orthogonal to s: xi = u1 a^T + u2 b^T with u1, u2 _|_ s.
      const Vec3 u1 = s.unitOrthogonal();
      const Vec3 u2 = s.cross(u1);
      const Vec2 a(u(rng), u(rng));
      const Vec2 b(u(rng), u(rng));
      const Xi xi = u1 * a.transpose() + u2 * b.transpose();
      const CellSolution sol = solve_cell(rough, mesh, xi);
      double along = 0.0;
      for (const Vec3& v : sol.phi) along = std::max(along, std::abs(v.dot(s)));
      add_check(c6, along < 1e-8,
                "s #" + std::to_string(k) + ": sup |phi . s| = " + fmt(along) + " < 1e-8");
    }
  }
  report.criteria.push_back(c6);

  // --- 7: gamma-convergence validation --------------------------------------
  CriterionResult c7{7, "gamma-convergence validation", true, {}, {}};
  t0 = std::chrono::steady_clock::now();
  {
    const EpsSweep flat_sweep = sweep(flat, Vec3::UnitZ(), {0.25, 0.125, 0.0625, 0.03125},
                                      flat_general, gres, threads);
    bool decreasing = true;
    for (size_t i = 0; i + 1 < flat_sweep.records.size(); ++i)
      decreasing = decreasing &&
                   flat_sweep.records[i + 1].abs_error < flat_sweep.records[i].abs_error;
    std::string seq;
    for (const SweepRecord& r : flat_sweep.records) seq += " " + fmt(r.abs_error);
    add_check(c7, decreasing, "flat slab m=e3: abs errors strictly decreasing:" + seq);
    const double extrap_err = std::abs(flat_sweep.extrapolated - 1.0);
    add_check(c7, extrap_err <= 0.02,
              "flat slab m=e3: Richardson extrapolation " + fmt(flat_sweep.extrapolated) +
                  " within 2% of 1.0 (error " + fmt(extrap_err) + ")");

    const FilmGeometry sine_half = FilmGeometry::parallel(Profile::sine2_1d(), 0.5);
    const AnisotropyTensor& sine_half_target = cross_parallel[0];  // sine2_1d a=0.5
    const std::vector<Vec3> test_dirs = {Vec3::UnitX(), Vec3::UnitZ()};
    for (const Vec3& m : test_dirs) {
      const EpsSweep s = sweep(sine_half, m, {0.125, 0.0625, 0.03125}, sine_half_target, gres,
                               threads);
      bool dec = true;
      for (size_t i = 0; i + 1 < s.records.size(); ++i)
        dec = dec && s.records[i + 1].abs_error < s.records[i].abs_error;
      std::string sq;
      for (const SweepRecord& r : s.records) sq += " " + fmt(r.abs_error);
      add_check(c7, dec,
                std::string("sine2_1d a=0.5 m=") + (m[0] > 0.5 ? "e1" : "e3") +
                    ": errors decreasing vs parallel target:" + sq);
    }
    const double sweep_elapsed = seconds_since(t0);
    add_check(c7, sweep_elapsed < 600.0, "total sweep runtime under 10 min");
    c7.timing_notes.push_back("sweeps took " + fmt(sweep_elapsed) + " s");
  }
  report.criteria.push_back(c7);

  // --- 8: structural invariants ---------------------------------------------
  CriterionResult c8{8, "structural invariants", true, {}, {}};
  t0 = std::chrono::steady_clock::now();
  {
    struct Bench {
      std::string name;
      AnisotropyTensor tensor;
      bool x2_independent;
      bool swap_symmetric;
    };
    std::vector<Bench> benches;
    benches.push_back({"flat slab", flat_general, true, true});
    benches.push_back({"sine2_1d a=0.5", cross_general[0], true, false});
    benches.push_back({"sine2_1d a=1", cross_general[1], true, false});
    benches.push_back({"sine2_2d a=0.5", cross_general[2], false, true});
    const FilmGeometry pair1(Profile::sine2_1d(), Profile::constant(1.25));
    benches.push_back({"sine2_1d/const pair", compute_general(pair1, cell, plane, threads),
                       true, false});
    const FilmGeometry pair2(Profile::constant(0.0), Profile::sine2_2d().shifted(0.5));
    benches.push_back({"const/sine2_2d pair", compute_general(pair2, cell, plane, threads),
                       false, true});

    for (const Bench& b : benches) {
      const Eigen::SelfAdjointEigenSolver<Mat3> es(b.tensor.sym);
      const double lmin = es.eigenvalues()[0];
      add_check(c8, lmin >= -1e-6, b.name + ": min eigenvalue " + fmt(lmin) + " >= -1e-6");
      const double asym1 = max_abs(b.tensor.terms[0] - b.tensor.terms[0].transpose());
      const double asym2 = max_abs(b.tensor.terms[1] - b.tensor.terms[1].transpose());
      add_check(c8, asym1 < 2e-3 && asym2 < 2e-3,
                b.name + ": terms 1-2 symmetric (dev " + fmt(asym1) + ", " + fmt(asym2) + ")");
      if (b.x2_independent) {
        const Mat3& A = b.tensor.total;
        const double mixed = std::max(std::max(std::abs(A(0, 1)), std::abs(A(1, 0))),
                                      std::max(std::abs(A(1, 2)), std::abs(A(2, 1))));
        add_check(c8, mixed < 1e-3,
                  b.name + ": mixed x2 entries " + fmt(mixed) + " < 1e-3");
      }
      if (b.swap_symmetric) {
        const double d11 = std::abs(b.tensor.total(0, 0) - b.tensor.total(1, 1));
        add_check(c8, d11 < 2e-3, b.name + ": |A11 - A22| = " + fmt(d11) + " < 2e-3");
      }
    }
  }
  c8.timing_notes.push_back("structural invariants took " + fmt(seconds_since(t0)) + " s");
  report.criteria.push_back(c8);

  // --- 9: determinism probe --------------------------------------------------
  CriterionResult c9{9, "determinism", true, {}, {}};
  {
    PlaneRule probe_plane;
    probe_plane.n_rad = 16;
    probe_plane.n_ang = 64;
    probe_plane.n_outer = 30;
    CellRule probe_cell{8};
    const FilmGeometry rough = FilmGeometry::parallel(Profile::sine2_1d(), 0.5);
    const Mat3 a1 = compute_parallel(rough, probe_cell, probe_plane, 1).total;
    const Mat3 a4 = compute_parallel(rough, probe_cell, probe_plane, 4).total;
    const Mat3 a4b = compute_parallel(rough, probe_cell, probe_plane, 4).total;
    add_check(c9, bit_equal(a1, a4), "compute_parallel bit-identical for 1 vs 4 threads");
    add_check(c9, bit_equal(a4, a4b), "compute_parallel bit-identical across repeated runs");

    GammaResolution low;
    low.base = 32;
    low.min_per_period = 4;
    low.cell_pts = 4;
    const double g1 = finite_eps_energy(rough, Vec3::UnitZ(), 0.125, low, 1).value;
    const double g4 = finite_eps_energy(rough, Vec3::UnitZ(), 0.125, low, 4).value;
    add_check(c9, std::memcmp(&g1, &g4, sizeof(double)) == 0,
              "finite_eps_energy bit-identical for 1 vs 4 threads");
  }
  report.criteria.push_back(c9);

  report.all_passed = true;
  for (const CriterionResult& c : report.criteria) report.all_passed = report.all_passed && c.passed;
  return report;
}

}  // namespace roughfilm::selftest
