#pragma once

#include <optional>

#include "roughfilm/profile.hpp"
#include "roughfilm/types.hpp"

namespace roughfilm {

/// Ordered profile pair (f1 < f2) plus the in-plane domain omega.
///
/// The strict ordering is verified on a 256x256 sample of Q at construction;
/// a violation raises ConfigError naming the violating sample point. When
/// `parallel_offset` is set the pair satisfies f2 = f1 + a (also verified).
class FilmGeometry {
 public:
  FilmGeometry(Profile f1, Profile f2, Rect omega = unit_square(),
               std::optional<double> parallel_offset = std::nullopt);

  /// Parallel roughness f2 = f1 + a.
  static FilmGeometry parallel(Profile f, double a, Rect omega = unit_square());

  const Profile& f1() const { return f1_; }
  const Profile& f2() const { return f2_; }
  const Rect& omega() const { return omega_; }
  std::optional<double> parallel_offset() const { return parallel_offset_; }

 private:
  Profile f1_;
  Profile f2_;
  Rect omega_;
  std::optional<double> parallel_offset_;
};

}  // namespace roughfilm
