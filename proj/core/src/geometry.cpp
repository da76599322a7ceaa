#include "roughfilm/geometry.hpp"

#include <cmath>
#include <sstream>

namespace roughfilm {

namespace {
constexpr int kOrderingSamples = 256;
}

FilmGeometry::FilmGeometry(Profile f1, Profile f2, Rect omega,
                           std::optional<double> parallel_offset)
    : f1_(std::move(f1)), f2_(std::move(f2)), omega_(omega), parallel_offset_(parallel_offset) {
  if (!(omega_.width > 0.0) || !(omega_.height > 0.0))
    throw ConfigError("omega must have positive area");
  if (parallel_offset_ && !(*parallel_offset_ > 0.0))
    throw ConfigError("parallel_offset must be positive");

  const int n = kOrderingSamples;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Vec2 x((i + 0.5) / n, (j + 0.5) / n);
      const double a = f1_.eval(x);
      const double b = f2_.eval(x);
      if (!(a < b)) {
        std::ostringstream msg;
        msg << "profile ordering violated: f1(" << x[0] << ", " << x[1] << ") = " << a
            << " >= f2(" << x[0] << ", " << x[1] << ") = " << b;
        throw ConfigError(msg.str());
      }
      if (parallel_offset_ && std::abs(b - a - *parallel_offset_) > 1e-9) {
        std::ostringstream msg;
        msg << "parallel_offset " << *parallel_offset_ << " inconsistent with profiles at ("
            << x[0] << ", " << x[1] << "): f2 - f1 = " << (b - a);
        throw ConfigError(msg.str());
      }
    }
  }
}

FilmGeometry FilmGeometry::parallel(Profile f, double a, Rect omega) {
  Profile top = f.shifted(a);
  return FilmGeometry(std::move(f), std::move(top), omega, a);
}

}  // namespace roughfilm
