/**
 * @file config.hpp
 * @brief Run configuration: presets, INI-style files and key overrides.
 *
 * Units are mm, N and MPa throughout; fracture toughness in N/mm. See
 * docs/config.md for the full key reference.
 */

#pragma once

#include <stdexcept>
#include <string>

#include "pff/amr.hpp"
#include "pff/material.hpp"
#include "pff/model.hpp"
#include "pff/solver.hpp"

namespace pff {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class PresetKind { tbt, eh, sent, sens, rect };

struct GeometrySettings {
  PresetKind preset = PresetKind::rect;
  int nx = 8;
  int ny = 8;
  double size_x = 1.0;
  double size_y = 1.0;
  // Tapered bar: length and the widths of the fixed / loaded ends.
  double tbt_length = 5.0;
  double tbt_width_fixed = 0.75;
  double tbt_width_loaded = 2.0;
  // Plate with hole.
  double hole_cx = 0.6;
  double hole_cy = 0.0;
  double hole_r = 0.2;
  // Edge notch (slit from the left edge at mid height).
  double notch_length = 0.5;
  int pre_refine = 0;  // refinement rounds around the notch tip
};

struct OutputSettings {
  int vtk_every = 10;   // converged steps between field dumps; 0 disables
  bool mesh_vtk = false;
};

struct RunConfig {
  GeometrySettings geo;
  MaterialParams mat;
  SolveSettings solve;
  AmrPolicy amr;
  OutputSettings out;
};

PresetKind parse_preset(const std::string& name);
std::string preset_name(PresetKind kind);

// Built-in parameter set of one benchmark.
RunConfig preset_config(PresetKind kind);

// Applies one key to a config; section and key follow docs/config.md.
// line < 0 marks a command-line override in error messages.
void apply_setting(RunConfig& cfg, const std::string& section,
                   const std::string& key, const std::string& value, int line);

// Parses a whole config text. A geometry.preset key rebases the config on
// that preset before the remaining keys apply; otherwise `base` is used.
RunConfig load_config_text(const std::string& text, const RunConfig& base);

// Range and consistency checks; throws ConfigError.
void validate_config(const RunConfig& cfg);

// Builds mesh, boundary conditions and initial state for the configured
// geometry (presets.cpp).
Model build_model(const RunConfig& cfg);

}  // namespace pff
