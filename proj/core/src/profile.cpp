#include "roughfilm/profile.hpp"

#include <algorithm>
#include <cmath>

namespace roughfilm {

namespace {

constexpr double kPi = 3.14159265358979323846;

double frac01(double t) {
  double f = t - std::floor(t);
  if (f >= 1.0) f -= 1.0;  // guards against floor rounding at negative inputs
  return f;
}

// sin^2(pi t) and its derivative pi sin(2 pi t) from one sincos.
void sine2(double t, double& s2, double& ds2) {
  const double s = std::sin(kPi * t);
  const double c = std::cos(kPi * t);
  s2 = s * s;
  ds2 = 2.0 * kPi * s * c;
}

// Catmull-Rom weights for the four taps at offsets {-1, 0, 1, 2}.
void cr_weights(double s, double w[4]) {
  const double s2 = s * s, s3 = s2 * s;
  w[0] = 0.5 * (-s3 + 2.0 * s2 - s);
  w[1] = 0.5 * (3.0 * s3 - 5.0 * s2 + 2.0);
  w[2] = 0.5 * (-3.0 * s3 + 4.0 * s2 + s);
  w[3] = 0.5 * (s3 - s2);
}

void cr_dweights(double s, double w[4]) {
  const double s2 = s * s;
  w[0] = 0.5 * (-3.0 * s2 + 4.0 * s - 1.0);
  w[1] = 0.5 * (9.0 * s2 - 10.0 * s);
  w[2] = 0.5 * (-9.0 * s2 + 8.0 * s + 1.0);
  w[3] = 0.5 * (3.0 * s2 - 2.0 * s);
}

// Largest |grad f| of sin^2(pi x1) sin^2(pi x2), found once by grid scan with
// local refinement.
double sine2_2d_lipschitz() {
  auto g2 = [](double x, double y) {
    const double sx = std::sin(kPi * x), cx = std::cos(kPi * x);
    const double sy = std::sin(kPi * y), cy = std::cos(kPi * y);
    const double gx = 2.0 * kPi * sx * cx * sy * sy;
    const double gy = sx * sx * 2.0 * kPi * sy * cy;
    return gx * gx + gy * gy;
  };
  double best = 0.0, bx = 0.0, by = 0.0;
  const int n = 256;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double v = g2((i + 0.5) / n, (j + 0.5) / n);
      if (v > best) {
        best = v;
        bx = (i + 0.5) / n;
        by = (j + 0.5) / n;
      }
    }
  double h = 1.0 / n;
  for (int pass = 0; pass < 30; ++pass) {
    double nx = bx, ny = by;
    for (int dj = -2; dj <= 2; ++dj)
      for (int di = -2; di <= 2; ++di) {
        const double v = g2(bx + di * h * 0.25, by + dj * h * 0.25);
        if (v > best) {
          best = v;
          nx = bx + di * h * 0.25;
          ny = by + dj * h * 0.25;
        }
      }
    bx = nx;
    by = ny;
    h *= 0.5;
  }
  return std::sqrt(best);
}

}  // namespace

const char* to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::Constant: return "constant";
    case ProfileKind::Sine2X: return "sine2_1d";
    case ProfileKind::Sine2XY: return "sine2_2d";
    case ProfileKind::Sampled: return "sampled";
  }
  return "unknown";
}

Profile Profile::constant(double c) {
  Profile p;
  p.kind_ = ProfileKind::Constant;
  p.value_ = c;
  p.lipschitz_ = 0.0;
  p.min_ = p.max_ = c;
  return p;
}

Profile Profile::sine2_1d() {
  Profile p;
  p.kind_ = ProfileKind::Sine2X;
  p.lipschitz_ = kPi;  // max |d/dx sin^2(pi x)| = pi
  p.min_ = 0.0;
  p.max_ = 1.0;
  return p;
}

Profile Profile::sine2_2d() {
  static const double lip = sine2_2d_lipschitz();
  Profile p;
  p.kind_ = ProfileKind::Sine2XY;
  p.lipschitz_ = lip;
  p.min_ = 0.0;
  p.max_ = 1.0;
  return p;
}

Profile Profile::sampled(std::vector<double> values, int n) {
  if (n < 4) throw ConfigError("sampled profile grid must be at least 4x4");
  if (values.size() != static_cast<size_t>(n) * static_cast<size_t>(n))
    throw ConfigError("sampled profile grid size mismatch: expected " +
                      std::to_string(n) + "x" + std::to_string(n) + " values");
  for (double v : values)
    if (!std::isfinite(v)) throw ConfigError("sampled profile grid contains a non-finite value");

  auto data = std::make_shared<SampledData>();
  data->n = n;
  data->v = std::move(values);

  Profile p;
  p.kind_ = ProfileKind::Sampled;
  p.grid_ = data;
  p.min_ = *std::min_element(data->v.begin(), data->v.end());
  p.max_ = *std::max_element(data->v.begin(), data->v.end());

  // Max central-difference slope over the grid, times a 1.1 safety factor.
  double slope2 = 0.0;
  auto at = [&](int i, int j) {
    return data->v[static_cast<size_t>(((j % n + n) % n)) * n + ((i % n + n) % n)];
  };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double gx = (at(i + 1, j) - at(i - 1, j)) * 0.5 * n;
      const double gy = (at(i, j + 1) - at(i, j - 1)) * 0.5 * n;
      slope2 = std::max(slope2, gx * gx + gy * gy);
    }
  p.lipschitz_ = 1.1 * std::sqrt(slope2);
  return p;
}

Profile Profile::shifted(double a) const {
  Profile p = *this;
  p.offset_ += a;
  return p;
}

int Profile::grid_size() const { return grid_ ? grid_->n : 0; }

std::pair<double, Vec2> Profile::eval_grad(const Vec2& x) const {
  const double u = frac01(x[0]);
  const double v = frac01(x[1]);
  switch (kind_) {
    case ProfileKind::Constant:
      return {value_ + offset_, Vec2::Zero()};
    case ProfileKind::Sine2X: {
      double f, df;
      sine2(u, f, df);
      return {f + offset_, Vec2(df, 0.0)};
    }
    case ProfileKind::Sine2XY: {
      double fx, dfx, fy, dfy;
      sine2(u, fx, dfx);
      sine2(v, fy, dfy);
      return {fx * fy + offset_, Vec2(dfx * fy, fx * dfy)};
    }
    case ProfileKind::Sampled: {
      const int n = grid_->n;
      const double su = u * n, sv = v * n;
      int iu = static_cast<int>(std::floor(su));
      int iv = static_cast<int>(std::floor(sv));
      const double tu = su - iu, tv = sv - iv;
      double wu[4], wv[4], du[4], dv[4];
      cr_weights(tu, wu);
      cr_weights(tv, wv);
      cr_dweights(tu, du);
      cr_dweights(tv, dv);
      int ix[4], iy[4];
      for (int k = 0; k < 4; ++k) {
        ix[k] = ((iu + k - 1) % n + n) % n;
        iy[k] = ((iv + k - 1) % n + n) % n;
      }
      double val = 0.0, gx = 0.0, gy = 0.0;
      for (int b = 0; b < 4; ++b) {
        const double* row = grid_->v.data() + static_cast<size_t>(iy[b]) * n;
        double rv = 0.0, rd = 0.0;
        for (int a = 0; a < 4; ++a) {
          const double g = row[ix[a]];
          rv += wu[a] * g;
          rd += du[a] * g;
        }
        val += wv[b] * rv;
        gx += wv[b] * rd;
        gy += dv[b] * rv;
      }
      return {val + offset_, Vec2(gx * n, gy * n)};
    }
  }
  return {0.0, Vec2::Zero()};
}

double Profile::eval(const Vec2& x) const { return eval_grad(x).first; }

Vec2 Profile::grad(const Vec2& x) const { return eval_grad(x).second; }

Vec3 Profile::normal(const Vec2& x) const {
  const Vec2 g = grad(x);
  return Vec3(-g[0], -g[1], 1.0);
}

}  // namespace roughfilm
