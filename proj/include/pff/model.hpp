/**
 * @file model.hpp
 * @brief Aggregate of mesh, constraints, material and solution state.
 */

#pragma once

#include <vector>

#include "pff/constraints.hpp"
#include "pff/material.hpp"
#include "pff/mesh.hpp"
#include "pff/state.hpp"

namespace pff {

// Everything a step solve needs. Copyable, so the controller can snapshot
// the whole model before a step and roll back across mesh refinements.
struct Model {
  HierMesh mesh;
  std::vector<DirichletSpec> bcs;
  DofMap dofs;
  MaterialParams mat;
  SimState state;

  void rebuild_dofs() { dofs = build_constraints(mesh, bcs); }

  void init_state() {
    rebuild_dofs();
    state.init(dofs.n_total, mesh.elems.size());
  }
};

}  // namespace pff
