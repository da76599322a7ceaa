#pragma once

#include <optional>
#include <string>

#include "roughfilm/cell_solver.hpp"
#include "roughfilm/energy.hpp"
#include "roughfilm/gamma_validator.hpp"
#include "roughfilm/geometry.hpp"
#include "roughfilm/quadrature.hpp"

namespace roughfilm {

struct ProfileSpec {
  std::string kind = "constant";  // constant | sine2_1d | sine2_2d | sampled
  double value = 0.0;             // constant only
  std::string grid_path;          // sampled only, CSV of N rows x N values
};

struct GeometrySpec {
  ProfileSpec f1;
  std::optional<ProfileSpec> f2;  // may be omitted when parallel_offset is set
  Rect omega = unit_square();
  std::optional<double> parallel_offset;
};

struct OutputSpec {
  std::string format = "json";  // json | csv
  std::string path;             // empty: stdout only
};

struct Config {
  GeometrySpec geometry;
  PlaneRule plane_rule;
  CellRule cell_rule;
  MeshParams mesh;
  GammaResolution gamma;
  EnergyParams params;
  OutputSpec output;
};

/// Parses a config from JSON text. Unknown keys are rejected.
Config parse_config(const std::string& text);
/// Loads and parses a config file.
Config load_config(const std::string& path);
/// Canonical JSON form: every field explicit, keys sorted.
/// parse(canonical(parse(text))) == parse(text).
std::string canonical_json(const Config& cfg);

/// Builds the profile, reading sampled grids relative to `base_dir`.
Profile build_profile(const ProfileSpec& spec, const std::string& base_dir = "");
/// Builds the validated film geometry. With parallel_offset set and f2
/// omitted, f2 := f1 + a; when both are given their consistency is checked.
FilmGeometry build_geometry(const GeometrySpec& spec, const std::string& base_dir = "");

/// Reads an N x N comma-separated grid (profile heightmap).
std::vector<double> load_grid_csv(const std::string& path, int& n);
/// Reads a magnetization field CSV with columns x_index, y_index, m1, m2, m3.
MagnetizationField load_field_csv(const std::string& path, const Rect& omega);

}  // namespace roughfilm
