#pragma once

#include <array>

#include "roughfilm/geometry.hpp"
#include "roughfilm/quadrature.hpp"
#include "roughfilm/types.hpp"

namespace roughfilm {

enum class AnisotropyFormula { General, Parallel };

const char* to_string(AnisotropyFormula f);

/// Homogenized anisotropy matrix with per-term breakdown.
///
/// `terms` holds the four pieces of the general formula (the fourth lives in
/// the in-plane block, third row and column zero); it is left zero when the
/// parallel formula produced `total`. Only the symmetrized matrix `sym`
/// enters the reduced energy and the easy-axis extraction.
struct AnisotropyTensor {
  std::array<Mat3, 4> terms{Mat3::Zero(), Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};
  Mat3 total = Mat3::Zero();
  Mat3 sym = Mat3::Zero();
  AnisotropyFormula formula_used = AnisotropyFormula::General;
};

/// Easy axis of the quadratic form e -> sym e . e over the unit sphere.
struct EasyAxis {
  Vec3 axis = Vec3::UnitZ();
  double value = 0.0;
  Vec3 spectrum = Vec3::Zero();  // eigenvalues ascending
  bool degenerate = false;       // two smallest eigenvalues within 1e-8
};

/// Four-term formula for general roughness pairs (f1, f2).
AnisotropyTensor compute_general(const FilmGeometry& geom, const CellRule& cell,
                                 const PlaneRule& plane, int threads = 1);

/// Single-kernel formula for parallel roughness f2 = f1 + a.
/// Rejects geometries without parallel_offset.
AnisotropyTensor compute_parallel(const FilmGeometry& geom, const CellRule& cell,
                                  const PlaneRule& plane, int threads = 1);

/// Minimizer of sym e . e over the unit sphere. Deterministic tie-breaking in
/// the degenerate subspace: largest |e3 component|, then largest
/// |e1 component|, then positive leading nonzero entry.
EasyAxis easy_axis(const AnisotropyTensor& t);

}  // namespace roughfilm
