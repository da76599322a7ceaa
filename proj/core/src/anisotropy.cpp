#include "roughfilm/anisotropy.hpp"

#include <cmath>

namespace roughfilm {

namespace {

constexpr double kInv4Pi = 1.0 / (4.0 * M_PI);
constexpr double kInv2Pi = 1.0 / (2.0 * M_PI);

// Value type for the four-term kernel so all terms share one profile pass.
struct GeneralTerms {
  Mat3 t1, t2, t3, t4;

  static GeneralTerms Zero() {
    return GeneralTerms{Mat3::Zero(), Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};
  }
  GeneralTerms& operator+=(const GeneralTerms& o) {
    t1 += o.t1;
    t2 += o.t2;
    t3 += o.t3;
    t4 += o.t4;
    return *this;
  }
  friend GeneralTerms operator*(const GeneralTerms& g, double s) {
    return GeneralTerms{g.t1 * s, g.t2 * s, g.t3 * s, g.t4 * s};
  }
};

void check_finite(const Mat3& m, const char* what) {
  if (!m.allFinite())
    throw NumericalError(std::string(what) + " produced a non-finite matrix entry");
}

}  // namespace

const char* to_string(AnisotropyFormula f) {
  return f == AnisotropyFormula::General ? "general" : "parallel";
}

AnisotropyTensor compute_general(const FilmGeometry& geom, const CellRule& cell,
                                 const PlaneRule& plane, int threads) {
  const Profile& f1 = geom.f1();
  const Profile& f2 = geom.f2();

  const GeneralTerms sums = integrate_cell<GeneralTerms>(
      cell,
      [&](const Vec2& x) {
        const auto [f1x, g1x] = f1.eval_grad(x);
        const auto [f2x, g2x] = f2.eval_grad(x);
        const Vec3 n1x(-g1x[0], -g1x[1], 1.0);
        const Vec3 n2x(-g2x[0], -g2x[1], 1.0);
        const double gx = f2x - f1x;

        return integrate_plane<GeneralTerms>(plane, [&](const Vec2& z) {
          const Vec2 w = x + z;
          const auto [f1w, g1w] = f1.eval_grad(w);
          const auto [f2w, g2w] = f2.eval_grad(w);
          const Vec3 n1w(-g1w[0], -g1w[1], 1.0);
          const Vec3 n2w(-g2w[0], -g2w[1], 1.0);
          const double r2 = z.squaredNorm();

          const double d1 = f1w - f1x;
          const double d2 = f2w - f2x;
          const double d3 = f2w - f1x;

          GeneralTerms out;
          out.t1 = (kInv4Pi * inv_sqrt_diff(r2, d1 * d1, 1.0)) * (n1x * n1w.transpose());
          out.t2 = (kInv4Pi * inv_sqrt_diff(r2, d2 * d2, 1.0)) * (n2x * n2w.transpose());
          out.t3 = (-kInv2Pi * inv_sqrt_diff(r2, d3 * d3, 1.0)) * (n1x * n2w.transpose());

          const double s3 = std::pow(r2 + 1.0, -1.5);
          const double s5 = s3 / (r2 + 1.0);
          Mat3 m4 = Mat3::Zero();
          m4(0, 0) = s3 - 3.0 * z[0] * z[0] * s5;
          m4(1, 1) = s3 - 3.0 * z[1] * z[1] * s5;
          m4(0, 1) = m4(1, 0) = -3.0 * z[0] * z[1] * s5;
          out.t4 = (kInv4Pi * (f2w - f1w) * gx) * m4;
          return out;
        });
      },
      threads);

  AnisotropyTensor t;
  t.terms = {sums.t1, sums.t2, sums.t3, sums.t4};
  t.total = sums.t1 + sums.t2 + sums.t3 + sums.t4;
  t.sym = 0.5 * (t.total + t.total.transpose());
  t.formula_used = AnisotropyFormula::General;
  check_finite(t.total, "compute_general");
  return t;
}

AnisotropyTensor compute_parallel(const FilmGeometry& geom, const CellRule& cell,
                                  const PlaneRule& plane, int threads) {
  if (!geom.parallel_offset())
    throw ConfigError("compute_parallel requires a geometry with parallel_offset (f2 = f1 + a)");
  const double a = *geom.parallel_offset();
  const Profile& f = geom.f1();

  const Mat3 total = integrate_cell<Mat3>(
      cell,
      [&](const Vec2& x) {
        const auto [fx, gx] = f.eval_grad(x);
        const Vec3 nx(-gx[0], -gx[1], 1.0);
        return integrate_plane<Mat3>(plane, [&](const Vec2& z) -> Mat3 {
          const Vec2 w = x + z;
          const auto [fw, gw] = f.eval_grad(w);
          const Vec3 nw(-gw[0], -gw[1], 1.0);
          const double df = fw - fx;
          const double k =
              kInv2Pi * inv_sqrt_diff(z.squaredNorm(), df * df, (a + df) * (a + df));
          return k * (nx * nw.transpose());
        });
      },
      threads);

  AnisotropyTensor t;
  t.total = total;
  t.sym = 0.5 * (total + total.transpose());
  t.formula_used = AnisotropyFormula::Parallel;
  check_finite(t.total, "compute_parallel");
  return t;
}

EasyAxis easy_axis(const AnisotropyTensor& t) {
  if (!t.sym.allFinite()) throw NumericalError("easy_axis called on a non-finite tensor");

  Eigen::SelfAdjointEigenSolver<Mat3> es(t.sym);
  const Vec3 ev = es.eigenvalues();  // ascending
  const Mat3 V = es.eigenvectors();

  EasyAxis out;
  out.spectrum = ev;
  out.value = ev[0];
  out.degenerate = (ev[1] - ev[0]) < 1e-8;

  Vec3 axis;
  if (!out.degenerate) {
    axis = V.col(0);
  } else {
    // Projector onto the degenerate subspace of the smallest eigenvalue.
    Mat3 P = V.col(0) * V.col(0).transpose() + V.col(1) * V.col(1).transpose();
    if ((ev[2] - ev[0]) < 1e-8) P += V.col(2) * V.col(2).transpose();
    Vec3 cand = P * Vec3::UnitZ();
    if (cand.norm() <= 1e-9) cand = P * Vec3::UnitX();
    if (cand.norm() <= 1e-9) cand = P * Vec3::UnitY();
    axis = cand.normalized();
  }

  for (int i = 0; i < 3; ++i) {
    if (std::abs(axis[i]) > 1e-12) {
      if (axis[i] < 0.0) axis = -axis;
      break;
    }
  }
  out.axis = axis.normalized();
  return out;
}

}  // namespace roughfilm
