/**
 * @file helpers.hpp
 * @brief Shared builders for the test suite.
 */

#pragma once

#include <random>

#include "pff/config.hpp"
#include "pff/model.hpp"

namespace pfft {

// n x m unit-spaced rectangle grid, optionally scaled, no boundary specs.
inline pff::HierMesh grid_mesh(int nx, int ny, double sx = -1.0,
                               double sy = -1.0) {
  if (sx < 0) sx = nx;
  if (sy < 0) sy = ny;
  pff::HierMesh mesh;
  const int left = mesh.tag_id("left");
  const int right = mesh.tag_id("right");
  const int bottom = mesh.tag_id("bottom");
  const int top = mesh.tag_id("top");
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      std::uint32_t tags = 0;
      if (i == 0) tags |= 1u << left;
      if (i == nx) tags |= 1u << right;
      if (j == 0) tags |= 1u << bottom;
      if (j == ny) tags |= 1u << top;
      mesh.add_node(sx * i / nx, sy * j / ny, tags);
    }
  }
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      mesh.add_elem({j * (nx + 1) + i, j * (nx + 1) + i + 1,
                     (j + 1) * (nx + 1) + i + 1, (j + 1) * (nx + 1) + i});
    }
  }
  return mesh;
}

inline pff::MaterialParams simple_material() {
  pff::MaterialParams mat;
  mat.lambda = 0.0;
  mat.mu = 50.0;
  mat.gc = 1.0;
  mat.ell = 0.25;
  return mat;
}

inline pff::MaterialParams sent_material() {
  pff::MaterialParams mat;
  mat.lambda = 121154.0;
  mat.mu = 80769.0;
  mat.gc = 2.7;
  mat.ell = 2e-2;
  return mat;
}

// Deterministic uniform draws in [lo, hi].
struct Rng {
  std::mt19937 gen{12345};
  double operator()(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
  }
};

}  // namespace pfft
