#include "roughfilm/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace roughfilm {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key))
      throw ConfigError("unknown key \"" + key + "\" in " + where);
}

double get_num(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ConfigError(std::string("\"") + key + "\" must be a number");
  return obj[key].get<double>();
}

int get_int(const json& obj, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer())
    throw ConfigError(std::string("\"") + key + "\" must be an integer");
  return obj[key].get<int>();
}

ProfileSpec parse_profile(const json& obj, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  reject_unknown(obj, {"kind", "value", "grid_path"}, where);
  ProfileSpec spec;
  if (!obj.contains("kind") || !obj["kind"].is_string())
    throw ConfigError(where + " needs a string \"kind\"");
  spec.kind = obj["kind"].get<std::string>();
  if (spec.kind != "constant" && spec.kind != "sine2_1d" && spec.kind != "sine2_2d" &&
      spec.kind != "sampled")
    throw ConfigError(where + ": unknown profile kind \"" + spec.kind + "\"");
  spec.value = get_num(obj, "value", 0.0);
  if (obj.contains("grid_path")) spec.grid_path = obj["grid_path"].get<std::string>();
  if (spec.kind == "sampled" && spec.grid_path.empty())
    throw ConfigError(where + ": sampled profiles need \"grid_path\"");
  return spec;
}

json profile_json(const ProfileSpec& spec) {
  json j;
  j["kind"] = spec.kind;
  if (spec.kind == "constant") j["value"] = spec.value;
  if (spec.kind == "sampled") j["grid_path"] = spec.grid_path;
  return j;
}

}  // namespace

Config parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be an object");
  reject_unknown(root, {"geometry", "rules", "mesh", "gamma", "params", "output"}, "config");

  Config cfg;

  if (!root.contains("geometry")) throw ConfigError("config needs a \"geometry\" section");
  const json& g = root["geometry"];
  reject_unknown(g, {"f1", "f2", "omega", "parallel_offset"}, "geometry");
  if (!g.contains("f1")) throw ConfigError("geometry needs \"f1\"");
  cfg.geometry.f1 = parse_profile(g["f1"], "geometry.f1");
  if (g.contains("f2")) cfg.geometry.f2 = parse_profile(g["f2"], "geometry.f2");
  if (g.contains("parallel_offset"))
    cfg.geometry.parallel_offset = g["parallel_offset"].get<double>();
  if (!cfg.geometry.f2 && !cfg.geometry.parallel_offset)
    throw ConfigError("geometry needs \"f2\" or \"parallel_offset\"");
  if (g.contains("omega")) {
    const json& om = g["omega"];
    reject_unknown(om, {"x0", "y0", "width", "height"}, "geometry.omega");
    cfg.geometry.omega.x0 = get_num(om, "x0", 0.0);
    cfg.geometry.omega.y0 = get_num(om, "y0", 0.0);
    cfg.geometry.omega.width = get_num(om, "width", 1.0);
    cfg.geometry.omega.height = get_num(om, "height", 1.0);
  }

  if (root.contains("rules")) {
    const json& r = root["rules"];
    reject_unknown(r, {"plane_rule", "cell_rule"}, "rules");
    if (r.contains("plane_rule")) {
      const json& p = r["plane_rule"];
      reject_unknown(p, {"r_inner", "R_cut", "n_rad", "n_ang", "n_outer", "tail_order",
                         "max_wavenumber"},
                     "rules.plane_rule");
      cfg.plane_rule.r_inner = get_num(p, "r_inner", cfg.plane_rule.r_inner);
      cfg.plane_rule.R_cut = get_num(p, "R_cut", cfg.plane_rule.R_cut);
      cfg.plane_rule.n_rad = get_int(p, "n_rad", cfg.plane_rule.n_rad);
      cfg.plane_rule.n_ang = get_int(p, "n_ang", cfg.plane_rule.n_ang);
      cfg.plane_rule.n_outer = get_int(p, "n_outer", cfg.plane_rule.n_outer);
      cfg.plane_rule.tail_order = get_num(p, "tail_order", cfg.plane_rule.tail_order);
      cfg.plane_rule.max_wavenumber = get_num(p, "max_wavenumber", cfg.plane_rule.max_wavenumber);
    }
    if (r.contains("cell_rule")) {
      reject_unknown(r["cell_rule"], {"n"}, "rules.cell_rule");
      cfg.cell_rule.n = get_int(r["cell_rule"], "n", cfg.cell_rule.n);
    }
  }

  if (root.contains("mesh")) {
    const json& m = root["mesh"];
    reject_unknown(m, {"n_h", "n_v", "cg_tol"}, "mesh");
    cfg.mesh.n_h = get_int(m, "n_h", cfg.mesh.n_h);
    cfg.mesh.n_v = get_int(m, "n_v", cfg.mesh.n_v);
    cfg.mesh.cg_tol = get_num(m, "cg_tol", cfg.mesh.cg_tol);
  }

  if (root.contains("gamma")) {
    const json& gm = root["gamma"];
    reject_unknown(gm, {"base", "min_per_period", "cell_pts"}, "gamma");
    cfg.gamma.base = get_int(gm, "base", cfg.gamma.base);
    cfg.gamma.min_per_period = get_int(gm, "min_per_period", cfg.gamma.min_per_period);
    cfg.gamma.cell_pts = get_int(gm, "cell_pts", cfg.gamma.cell_pts);
  }

  if (root.contains("params")) {
    reject_unknown(root["params"], {"d"}, "params");
    cfg.params.d = get_num(root["params"], "d", cfg.params.d);
    if (!(cfg.params.d > 0.0)) throw ConfigError("params.d must be positive");
  }

  if (root.contains("output")) {
    const json& o = root["output"];
    reject_unknown(o, {"format", "path"}, "output");
    if (o.contains("format")) {
      cfg.output.format = o["format"].get<std::string>();
      if (cfg.output.format != "json" && cfg.output.format != "csv")
        throw ConfigError("output.format must be \"json\" or \"csv\"");
    }
    if (o.contains("path")) cfg.output.path = o["path"].get<std::string>();
  }

  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string canonical_json(const Config& cfg) {
  json root;
  json& g = root["geometry"];
  g["f1"] = profile_json(cfg.geometry.f1);
  if (cfg.geometry.f2) g["f2"] = profile_json(*cfg.geometry.f2);
  if (cfg.geometry.parallel_offset) g["parallel_offset"] = *cfg.geometry.parallel_offset;
  g["omega"] = {{"x0", cfg.geometry.omega.x0},
                {"y0", cfg.geometry.omega.y0},
                {"width", cfg.geometry.omega.width},
                {"height", cfg.geometry.omega.height}};
  root["rules"]["plane_rule"] = {{"r_inner", cfg.plane_rule.r_inner},
                                 {"R_cut", cfg.plane_rule.R_cut},
                                 {"n_rad", cfg.plane_rule.n_rad},
                                 {"n_ang", cfg.plane_rule.n_ang},
                                 {"n_outer", cfg.plane_rule.n_outer},
                                 {"tail_order", cfg.plane_rule.tail_order},
                                 {"max_wavenumber", cfg.plane_rule.max_wavenumber}};
  root["rules"]["cell_rule"] = {{"n", cfg.cell_rule.n}};
  root["mesh"] = {{"n_h", cfg.mesh.n_h}, {"n_v", cfg.mesh.n_v}, {"cg_tol", cfg.mesh.cg_tol}};
  root["gamma"] = {{"base", cfg.gamma.base},
                   {"min_per_period", cfg.gamma.min_per_period},
                   {"cell_pts", cfg.gamma.cell_pts}};
  root["params"] = {{"d", cfg.params.d}};
  root["output"] = {{"format", cfg.output.format}, {"path", cfg.output.path}};
  return root.dump(2);
}

Profile build_profile(const ProfileSpec& spec, const std::string& base_dir) {
  if (spec.kind == "constant") return Profile::constant(spec.value);
  if (spec.kind == "sine2_1d") return Profile::sine2_1d();
  if (spec.kind == "sine2_2d") return Profile::sine2_2d();
  std::filesystem::path p(spec.grid_path);
  if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
  int n = 0;
  std::vector<double> grid = load_grid_csv(p.string(), n);
  return Profile::sampled(std::move(grid), n);
}

FilmGeometry build_geometry(const GeometrySpec& spec, const std::string& base_dir) {
  Profile f1 = build_profile(spec.f1, base_dir);
  if (!spec.f2) {
    if (!spec.parallel_offset) throw ConfigError("geometry needs \"f2\" or \"parallel_offset\"");
    return FilmGeometry::parallel(std::move(f1), *spec.parallel_offset, spec.omega);
  }
  Profile f2 = build_profile(*spec.f2, base_dir);
  return FilmGeometry(std::move(f1), std::move(f2), spec.omega, spec.parallel_offset);
}

std::vector<double> load_grid_csv(const std::string& path, int& n) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open grid CSV: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        row.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw ConfigError("grid CSV " + path + ": bad number \"" + tok + "\"");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("grid CSV " + path + " is empty");
  n = static_cast<int>(rows.size());
  std::vector<double> out;
  out.reserve(static_cast<size_t>(n) * n);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n)
      throw ConfigError("grid CSV " + path + " must be square (N rows x N values)");
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

MagnetizationField load_field_csv(const std::string& path, const Rect& omega) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open field CSV: " + path);
  std::map<std::pair<int, int>, Vec3> entries;
  int max_idx = -1;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    std::vector<std::string> cols;
    while (std::getline(ss, tok, ',')) cols.push_back(tok);
    if (lineno == 1 && !cols.empty() && cols[0] == "x_index") continue;  // header
    if (cols.size() != 5)
      throw ConfigError("field CSV " + path + " line " + std::to_string(lineno) +
                        ": expected x_index, y_index, m1, m2, m3");
    try {
      const int i = std::stoi(cols[0]);
      const int j = std::stoi(cols[1]);
      const Vec3 m(std::stod(cols[2]), std::stod(cols[3]), std::stod(cols[4]));
      if (i < 0 || j < 0) throw ConfigError("field CSV: negative index");
      entries[{i, j}] = m;
      max_idx = std::max(max_idx, std::max(i, j));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("field CSV " + path + " line " + std::to_string(lineno) +
                        ": bad number");
    }
  }
  const int n = max_idx + 1;
  if (n < 2) throw ConfigError("field CSV " + path + " needs at least a 2x2 grid");
  if (entries.size() != static_cast<size_t>(n) * static_cast<size_t>(n))
    throw ConfigError("field CSV " + path + ": expected " + std::to_string(n) + "x" +
                      std::to_string(n) + " complete grid, got " +
                      std::to_string(entries.size()) + " nodes");
  std::vector<Vec3> values(static_cast<size_t>(n) * n);
  for (const auto& [idx, m] : entries)
    values[static_cast<size_t>(idx.second) * n + idx.first] = m;
  return MagnetizationField(std::move(values), n, omega);
}

}  // namespace roughfilm
