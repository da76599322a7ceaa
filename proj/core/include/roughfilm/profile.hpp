#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "roughfilm/types.hpp"

namespace roughfilm {

enum class ProfileKind { Constant, Sine2X, Sine2XY, Sampled };

const char* to_string(ProfileKind kind);

/// Q-periodic Lipschitz surface profile on the unit cell Q = (0,1)^2.
///
/// Built-in kinds are evaluated analytically; sampled profiles use C^1
/// periodic bicubic (Catmull-Rom) interpolation of an N x N grid so the
/// gradient is defined everywhere. Profiles are immutable and cheap to copy;
/// all operations are pure and safe to call concurrently.
class Profile {
 public:
  static Profile constant(double c);
  static Profile sine2_1d();  // sin^2(pi x1)
  static Profile sine2_2d();  // sin^2(pi x1) sin^2(pi x2)
  static Profile sampled(std::vector<double> values, int n);

  /// Same profile shifted vertically by `a`.
  Profile shifted(double a) const;

  /// f(x') with periodic extension; the argument is reduced mod 1 per axis.
  double eval(const Vec2& x) const;
  /// grad f(x').
  Vec2 grad(const Vec2& x) const;
  /// Value and gradient in one pass.
  std::pair<double, Vec2> eval_grad(const Vec2& x) const;
  /// The (unnormalized) surface vector (-grad f(x'), 1).
  Vec3 normal(const Vec2& x) const;

  ProfileKind kind() const { return kind_; }
  double offset() const { return offset_; }
  double lipschitz_bound() const { return lipschitz_; }
  double range_min() const { return min_ + offset_; }
  double range_max() const { return max_ + offset_; }

  /// Constant value for ProfileKind::Constant.
  double constant_value() const { return value_ + offset_; }
  int grid_size() const;

 private:
  Profile() = default;

  struct SampledData {
    int n = 0;
    std::vector<double> v;  // v[j * n + i], node (i/n, j/n)
  };

  ProfileKind kind_ = ProfileKind::Constant;
  double value_ = 0.0;   // Constant kind
  double offset_ = 0.0;  // additive vertical shift, f -> f + offset
  double lipschitz_ = 0.0;
  double min_ = 0.0;
  double max_ = 0.0;
  std::shared_ptr<const SampledData> grid_;
};

}  // namespace roughfilm
