/**
 * @file staggered.cpp
 * @brief Alternating-minimization reference solver at fixed load factor.
 *
 * Each sweep solves the momentum block with the phase frozen, refreshes the
 * history field, then solves the phase block with the displacements frozen.
 * Sweeps repeat until the combined field change per sweep is small. Only
 * the diagonal blocks are ever assembled, so each subproblem is a plain
 * (nearly linear) Newton solve.
 */

#include <cmath>
#include <vector>

#include <Eigen/SparseLU>

#include "pff/assembly.hpp"
#include "pff/solver.hpp"

namespace pff {

namespace {

struct SubMap {
  std::vector<int> col_of_free;  // free column -> subsystem column or -1
  std::vector<int> free_of_col;  // subsystem column -> free column
  int n = 0;
};

// Splits the free columns into the u block (dof < 2*n_nodes) and phase block.
void build_submaps(const DofMap& dofs, SubMap& u, SubMap& p) {
  u.col_of_free.assign(dofs.n_free, -1);
  p.col_of_free.assign(dofs.n_free, -1);
  for (int col = 0; col < dofs.n_free; ++col) {
    const bool is_u = dofs.free_dofs[col] < 2 * dofs.n_nodes;
    SubMap& m = is_u ? u : p;
    m.col_of_free[col] = m.n++;
    m.free_of_col.push_back(col);
  }
}

struct SubSystem {
  Eigen::SparseMatrix<double> A;
  Eigen::VectorXd rhs;
  Eigen::VectorXd f_full;
  double res = 0.0;
};

// Assembles one diagonal block (u if want_u, else phase) at the current
// state. History is taken from st.H as-is; the momentum block does not
// depend on it and the phase block freezes it per sweep.
SubSystem assemble_block(const Model& model, bool want_u, const SubMap& sub) {
  const HierMesh& mesh = model.mesh;
  const DofMap& dofs = model.dofs;
  const SimState& st = model.state;

  SubSystem out;
  out.f_full = Eigen::VectorXd::Zero(dofs.n_total);
  out.rhs = Eigen::VectorXd::Zero(sub.n);
  std::vector<Eigen::Triplet<double>> trips;

  for (int e : mesh.active_elems()) {
    const auto& c = mesh.elems[e].corners;
    Eigen::Matrix<double, 8, 1> u_e;
    Eigen::Vector4d phi_e, dphi_e;
    int gd_u[8], gd_p[4];
    for (int k = 0; k < 4; ++k) {
      gd_u[2 * k] = DofMap::udof(c[k], 0);
      gd_u[2 * k + 1] = DofMap::udof(c[k], 1);
      gd_p[k] = dofs.pdof(c[k]);
      u_e[2 * k] = st.x[gd_u[2 * k]];
      u_e[2 * k + 1] = st.x[gd_u[2 * k + 1]];
      phi_e[k] = st.x[gd_p[k]];
      dphi_e[k] = phi_e[k] - st.x_n[gd_p[k]];
    }
    const ElementSystem es =
        element_system(mesh, e, model.mat, u_e, phi_e, dphi_e, st.H[e]);

    const int nloc = want_u ? 8 : 4;
    const int* gd = want_u ? gd_u : gd_p;
    for (int i = 0; i < nloc; ++i) {
      const double fi = want_u ? es.fu[i] : es.fp[i];
      out.f_full[gd[i]] += fi;
      for (const MasterTerm& ri : dofs.row_terms[gd[i]]) {
        const int r = sub.col_of_free[ri.col];
        out.rhs[r] -= ri.w * fi;
        for (int j = 0; j < nloc; ++j) {
          const double kij = want_u ? es.Kuu(i, j) : es.Kpp(i, j);
          for (const MasterTerm& cj : dofs.row_terms[gd[j]]) {
            trips.emplace_back(r, sub.col_of_free[cj.col], ri.w * cj.w * kij);
          }
        }
      }
    }
  }
  out.A.resize(sub.n, sub.n);
  out.A.setFromTriplets(trips.begin(), trips.end());
  out.res = out.rhs.norm();
  return out;
}

// Newton on one diagonal block; the u block is linear and converges in one
// solve, the phase block may need a few for non-quadratic degradation.
bool solve_block(Model& model, const SolveSettings& cfg, bool want_u,
                 const SubMap& sub, int iter_cap, Eigen::VectorXd* f_out) {
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  for (int it = 0;; ++it) {
    const SubSystem sys = assemble_block(model, want_u, sub);
    if (!std::isfinite(sys.res)) return false;
    if (sys.res < cfg.tol) {
      if (f_out) *f_out = sys.f_full;
      return true;
    }
    if (it >= iter_cap) return false;
    lu.compute(sys.A);
    if (lu.info() != Eigen::Success) return false;
    const Eigen::VectorXd d = lu.solve(sys.rhs);
    if (!d.allFinite()) return false;
    Eigen::VectorXd d_free = Eigen::VectorXd::Zero(model.dofs.n_free);
    for (int scol = 0; scol < sub.n; ++scol) d_free[sub.free_of_col[scol]] = d[scol];
    model.dofs.expand_add(d_free, 0.0, model.state.x);
  }
}

}  // namespace

StepResult staggered_step(Model& model, const SolveSettings& cfg) {
  SimState& st = model.state;
  SubMap usub, psub;
  build_submaps(model.dofs, usub, psub);

  Eigen::VectorXd f_last;
  for (int sweep = 1; sweep <= cfg.stagger_max; ++sweep) {
    const Eigen::VectorXd x_before = st.x;

    if (!solve_block(model, cfg, true, usub, 8, nullptr)) return {false, sweep, 0.0};

    // Refresh history from the new strains before the phase solve.
    for (int e : model.mesh.active_elems()) {
      const auto& c = model.mesh.elems[e].corners;
      Eigen::Matrix<double, 8, 1> u_e;
      for (int k = 0; k < 4; ++k) {
        u_e[2 * k] = st.x[DofMap::udof(c[k], 0)];
        u_e[2 * k + 1] = st.x[DofMap::udof(c[k], 1)];
      }
      st.H[e] = element_history(model.mesh, e, model.mat, u_e, st.H_n[e]);
    }

    if (!solve_block(model, cfg, false, psub, 12, nullptr)) return {false, sweep, 0.0};

    if ((st.x - x_before).norm() < cfg.stagger_tol) {
      // Reaction at the converged pair; one momentum evaluation.
      const SubSystem sys = assemble_block(model, true, usub);
      return {true, sweep, reaction_load(model.dofs, sys.f_full)};
    }
  }
  return {false, cfg.stagger_max, 0.0};
}

}  // namespace pff
