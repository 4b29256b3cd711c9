/**
 * @file config.cpp
 * @brief Presets, INI-style parsing and key overrides.
 */

#include "pff/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace pff {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string where(int line) {
  return line >= 0 ? "config line " + std::to_string(line) + ": " : "override: ";
}

double to_double(const std::string& v, const std::string& key, int line) {
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty()) {
    throw ConfigError(where(line) + "invalid number '" + v + "' for " + key);
  }
  return out;
}

int to_int(const std::string& v, const std::string& key, int line) {
  std::size_t pos = 0;
  long out = 0;
  try {
    out = std::stol(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty()) {
    throw ConfigError(where(line) + "invalid integer '" + v + "' for " + key);
  }
  return static_cast<int>(out);
}

bool to_bool(const std::string& v, const std::string& key, int line) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw ConfigError(where(line) + "invalid boolean '" + v + "' for " + key);
}

}  // namespace

PresetKind parse_preset(const std::string& name) {
  if (name == "tbt") return PresetKind::tbt;
  if (name == "eh") return PresetKind::eh;
  if (name == "sent") return PresetKind::sent;
  if (name == "sens") return PresetKind::sens;
  if (name == "rect") return PresetKind::rect;
  throw ConfigError("unknown preset '" + name + "'");
}

std::string preset_name(PresetKind kind) {
  switch (kind) {
    case PresetKind::tbt: return "tbt";
    case PresetKind::eh: return "eh";
    case PresetKind::sent: return "sent";
    case PresetKind::sens: return "sens";
    case PresetKind::rect: return "rect";
  }
  return "?";
}

RunConfig preset_config(PresetKind kind) {
  RunConfig cfg;
  cfg.geo.preset = kind;
  switch (kind) {
    case PresetKind::tbt:
      // Tapered bar in tension: soft material, coarse regularization.
      cfg.geo.nx = 40;
      cfg.geo.ny = 8;
      cfg.mat.lambda = 0.0;
      cfg.mat.mu = 50.0;
      cfg.mat.gc = 1.0;
      cfg.mat.ell = 0.25;
      cfg.mat.split = Split::none;
      cfg.solve.stepsize = 1e-2;
      cfg.solve.dtau_max = 0.0125;
      cfg.solve.max_steps = 600;
      cfg.solve.lambda_max = 0.60;
      cfg.solve.g_final = 0.70;
      cfg.amr.phi_threshold = 0.2;
      cfg.amr.max_depth = 4;
      break;
    case PresetKind::eh:
      // Square plate with an off-center hole, tension on the top edge.
      cfg.geo.nx = 32;
      cfg.geo.ny = 32;
      cfg.mat.lambda = 121154.0;  // 121.154 GPa
      cfg.mat.mu = 80769.0;       // 80.769 GPa
      cfg.mat.gc = 2.7;           // 2700 N/m
      cfg.mat.ell = 2e-2;
      cfg.mat.split = Split::rankine;
      cfg.solve.stepsize = 1e-4;
      cfg.solve.dtau_max = 0.05;
      cfg.solve.max_steps = 800;
      cfg.solve.lambda_max = 0.05;
      cfg.solve.g_final = 1.30;
      cfg.amr.phi_threshold = 0.2;
      cfg.amr.max_depth = 4;
      break;
    case PresetKind::sent:
      // Single-edge notched square in tension.
      cfg.geo.nx = 32;
      cfg.geo.ny = 32;
      cfg.geo.pre_refine = 1;
      cfg.mat.lambda = 121154.0;
      cfg.mat.mu = 80769.0;
      cfg.mat.gc = 2.7;
      cfg.mat.ell = 2e-2;
      cfg.mat.split = Split::none;
      cfg.solve.stepsize = 1e-4;
      cfg.solve.dtau_max = 0.025;
      cfg.solve.max_steps = 800;
      cfg.solve.lambda_max = 0.02;
      cfg.solve.g_final = 1.10;
      cfg.amr.phi_threshold = 0.2;
      cfg.amr.max_depth = 4;
      break;
    case PresetKind::sens:
      // Single-edge notched square in shear.
      cfg.geo.nx = 32;
      cfg.geo.ny = 32;
      cfg.geo.pre_refine = 1;
      cfg.mat.lambda = 121154.0;
      cfg.mat.mu = 80769.0;
      cfg.mat.gc = 2.7;
      cfg.mat.ell = 2e-2;
      cfg.mat.split = Split::rankine;
      cfg.solve.stepsize = 5e-4;
      cfg.solve.dtau_max = 0.025;
      cfg.solve.max_steps = 800;
      cfg.solve.lambda_max = 0.04;
      cfg.solve.g_final = 1.80;
      cfg.amr.phi_threshold = 0.1;
      cfg.amr.max_depth = 4;
      break;
    case PresetKind::rect:
      // Plain rectangle for experiments and tests.
      cfg.mat.lambda = 1.0;
      cfg.mat.mu = 1.0;
      cfg.mat.gc = 1.0;
      cfg.mat.ell = 0.1;
      cfg.solve.stepsize = 1e-3;
      cfg.solve.dtau_max = 0.025;
      cfg.amr.enabled = false;
      break;
  }
  return cfg;
}

void apply_setting(RunConfig& cfg, const std::string& sec,
                   const std::string& key, const std::string& value, int line) {
  const std::string full = sec + "." + key;
  if (sec == "geometry") {
    if (key == "preset") { cfg.geo.preset = parse_preset(value); return; }
    if (key == "nx") { cfg.geo.nx = to_int(value, full, line); return; }
    if (key == "ny") { cfg.geo.ny = to_int(value, full, line); return; }
    if (key == "size_x") { cfg.geo.size_x = to_double(value, full, line); return; }
    if (key == "size_y") { cfg.geo.size_y = to_double(value, full, line); return; }
    if (key == "tbt_length") { cfg.geo.tbt_length = to_double(value, full, line); return; }
    if (key == "tbt_width_fixed") { cfg.geo.tbt_width_fixed = to_double(value, full, line); return; }
    if (key == "tbt_width_loaded") { cfg.geo.tbt_width_loaded = to_double(value, full, line); return; }
    if (key == "hole_cx") { cfg.geo.hole_cx = to_double(value, full, line); return; }
    if (key == "hole_cy") { cfg.geo.hole_cy = to_double(value, full, line); return; }
    if (key == "hole_r") { cfg.geo.hole_r = to_double(value, full, line); return; }
    if (key == "notch_length") { cfg.geo.notch_length = to_double(value, full, line); return; }
    if (key == "pre_refine") { cfg.geo.pre_refine = to_int(value, full, line); return; }
  } else if (sec == "material") {
    if (key == "lambda") { cfg.mat.lambda = to_double(value, full, line); return; }
    if (key == "mu") { cfg.mat.mu = to_double(value, full, line); return; }
    if (key == "gc") { cfg.mat.gc = to_double(value, full, line); return; }
    if (key == "length_scale") { cfg.mat.ell = to_double(value, full, line); return; }
    if (key == "cw") { cfg.mat.cw = to_double(value, full, line); return; }
    if (key == "degradation") {
      if (value == "quadratic") cfg.mat.degradation = Degradation::quadratic;
      else if (value == "cubic") cfg.mat.degradation = Degradation::cubic;
      else if (value == "rational") cfg.mat.degradation = Degradation::rational;
      else throw ConfigError(where(line) + "unknown degradation '" + value + "'");
      return;
    }
    if (key == "cubic_s") { cfg.mat.cubic_s = to_double(value, full, line); return; }
    if (key == "rational_p") { cfg.mat.rat_p = to_double(value, full, line); return; }
    if (key == "rational_a1") { cfg.mat.rat_a1 = to_double(value, full, line); return; }
    if (key == "rational_a2") { cfg.mat.rat_a2 = to_double(value, full, line); return; }
    if (key == "rational_a3") { cfg.mat.rat_a3 = to_double(value, full, line); return; }
    if (key == "split") {
      if (value == "none") cfg.mat.split = Split::none;
      else if (value == "spectral") cfg.mat.split = Split::spectral;
      else if (value == "rankine") cfg.mat.split = Split::rankine;
      else throw ConfigError(where(line) + "unknown split '" + value + "'");
      return;
    }
  } else if (sec == "solver") {
    if (key == "type") {
      if (value == "monolithic") cfg.solve.kind = SolverKind::monolithic;
      else if (value == "monolithic-no-relax") cfg.solve.kind = SolverKind::monolithic_no_relax;
      else if (value == "staggered") cfg.solve.kind = SolverKind::staggered;
      else throw ConfigError(where(line) + "unknown solver type '" + value + "'");
      return;
    }
    if (key == "tolerance") { cfg.solve.tol = to_double(value, full, line); return; }
    if (key == "max_iterations") { cfg.solve.max_iter = to_int(value, full, line); return; }
    if (key == "stepsize") { cfg.solve.stepsize = to_double(value, full, line); return; }
    if (key == "dtau_max") { cfg.solve.dtau_max = to_double(value, full, line); return; }
    if (key == "switch_energy") { cfg.solve.switch_energy = to_double(value, full, line); return; }
    if (key == "optiter") { cfg.solve.optiter = to_int(value, full, line); return; }
    if (key == "dtau_grow") { cfg.solve.dtau_grow = to_double(value, full, line); return; }
    if (key == "dtau_shrink_base") { cfg.solve.dtau_shrink_base = to_double(value, full, line); return; }
    if (key == "dtau_shrink_exp") { cfg.solve.dtau_shrink_exp = to_double(value, full, line); return; }
    if (key == "beta_grow") { cfg.solve.beta_grow = to_double(value, full, line); return; }
    if (key == "beta_cut") { cfg.solve.beta_cut = to_double(value, full, line); return; }
    if (key == "beta_floor") { cfg.solve.beta_floor = to_double(value, full, line); return; }
    if (key == "dlambda_floor") { cfg.solve.dlambda_floor = to_double(value, full, line); return; }
    if (key == "dtau_floor") { cfg.solve.dtau_floor = to_double(value, full, line); return; }
    if (key == "max_steps") { cfg.solve.max_steps = to_int(value, full, line); return; }
    if (key == "lambda_max") { cfg.solve.lambda_max = to_double(value, full, line); return; }
    if (key == "g_final") { cfg.solve.g_final = to_double(value, full, line); return; }
    if (key == "stagger_tol") { cfg.solve.stagger_tol = to_double(value, full, line); return; }
    if (key == "stagger_max") { cfg.solve.stagger_max = to_int(value, full, line); return; }
  } else if (sec == "amr") {
    if (key == "enabled") { cfg.amr.enabled = to_bool(value, full, line); return; }
    if (key == "phi_threshold") { cfg.amr.phi_threshold = to_double(value, full, line); return; }
    if (key == "max_depth") { cfg.amr.max_depth = to_int(value, full, line); return; }
    if (key == "resolve_after_refine") { cfg.amr.resolve_after_refine = to_bool(value, full, line); return; }
  } else if (sec == "output") {
    if (key == "vtk_every") { cfg.out.vtk_every = to_int(value, full, line); return; }
    if (key == "mesh_vtk") { cfg.out.mesh_vtk = to_bool(value, full, line); return; }
  } else {
    throw ConfigError(where(line) + "unknown section [" + sec + "]");
  }
  throw ConfigError(where(line) + "unknown key '" + full + "'");
}

RunConfig load_config_text(const std::string& text, const RunConfig& base) {
  struct Entry {
    std::string sec, key, value;
    int line;
  };
  std::vector<Entry> entries;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("config line " + std::to_string(lineno) + ": malformed section");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    if (section.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) + ": key outside a section");
    }
    entries.push_back({section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), lineno});
  }

  RunConfig cfg = base;
  for (const Entry& e : entries) {
    if (e.sec == "geometry" && e.key == "preset") {
      try {
        cfg = preset_config(parse_preset(e.value));
      } catch (const ConfigError& err) {
        throw ConfigError("config line " + std::to_string(e.line) + ": " + err.what());
      }
      break;
    }
  }
  for (const Entry& e : entries) {
    if (e.sec == "geometry" && e.key == "preset") continue;
    apply_setting(cfg, e.sec, e.key, e.value, e.line);
  }
  return cfg;
}

void validate_config(const RunConfig& cfg) {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  need(cfg.geo.nx >= 1 && cfg.geo.ny >= 1, "geometry: nx and ny must be positive");
  if (cfg.geo.preset == PresetKind::sent || cfg.geo.preset == PresetKind::sens) {
    need(cfg.geo.nx % 2 == 0 && cfg.geo.ny % 2 == 0,
         "geometry: notched presets need even nx and ny");
    need(cfg.geo.notch_length > 0.0 && cfg.geo.notch_length < cfg.geo.size_x,
         "geometry: notch_length must lie inside the domain");
  }
  if (cfg.geo.preset == PresetKind::eh) {
    need(cfg.geo.hole_r > 0.0, "geometry: hole_r must be positive");
    need(cfg.geo.hole_cx - cfg.geo.hole_r > 0.0 &&
             cfg.geo.hole_cx + cfg.geo.hole_r < cfg.geo.size_x &&
             std::abs(cfg.geo.hole_cy) + cfg.geo.hole_r < 0.5 * cfg.geo.size_y,
         "geometry: hole must lie strictly inside the plate");
  }
  need(cfg.geo.pre_refine >= 0, "geometry: pre_refine must be >= 0");
  need(cfg.mat.mu > 0.0, "material: mu must be positive");
  need(cfg.mat.lambda + cfg.mat.mu > 0.0, "material: lambda + mu must be positive");
  need(cfg.mat.gc > 0.0, "material: gc must be positive");
  need(cfg.mat.ell > 0.0, "material: length_scale must be positive");
  need(cfg.mat.cw > 0.0, "material: cw must be positive");
  need(cfg.mat.cubic_s > 0.0 && cfg.mat.cubic_s <= 1.0,
       "material: cubic_s must be in (0, 1]");
  need(cfg.mat.rat_p >= 2.0, "material: rational_p must be >= 2");
  need(cfg.solve.tol > 0.0, "solver: tolerance must be positive");
  need(cfg.solve.max_iter >= 1, "solver: max_iterations must be >= 1");
  need(cfg.solve.stepsize > 0.0, "solver: stepsize must be positive");
  need(cfg.solve.dtau_max > 0.0, "solver: dtau_max must be positive");
  need(cfg.solve.optiter >= 1, "solver: optiter must be >= 1");
  need(cfg.solve.dtau_grow >= 1.0, "solver: dtau_grow must be >= 1");
  need(cfg.solve.dtau_shrink_base > 0.0 && cfg.solve.dtau_shrink_base < 1.0,
       "solver: dtau_shrink_base must be in (0, 1)");
  need(cfg.solve.dtau_shrink_exp > 0.0, "solver: dtau_shrink_exp must be positive");
  need(cfg.solve.beta_grow >= 1.0, "solver: beta_grow must be >= 1");
  need(cfg.solve.beta_cut > 1.0, "solver: beta_cut must be > 1");
  need(cfg.solve.beta_floor > 0.0, "solver: beta_floor must be positive");
  need(cfg.solve.max_steps >= 1, "solver: max_steps must be >= 1");
  need(cfg.solve.stagger_tol > 0.0, "solver: stagger_tol must be positive");
  need(cfg.solve.stagger_max >= 1, "solver: stagger_max must be >= 1");
  need(cfg.solve.threads >= 1, "solver: threads must be >= 1");
  need(cfg.amr.phi_threshold > 0.0 && cfg.amr.phi_threshold < 1.0,
       "amr: phi_threshold must be in (0, 1)");
  need(cfg.amr.max_depth >= 0, "amr: max_depth must be >= 0");
  need(cfg.out.vtk_every >= 0, "output: vtk_every must be >= 0");
}

}  // namespace pff
