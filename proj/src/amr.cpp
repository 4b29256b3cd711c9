/**
 * @file amr.cpp
 * @brief Phase-field driven adaptive refinement between load steps.
 */

#include "pff/amr.hpp"

namespace pff {

std::vector<int> mark_elements(const HierMesh& mesh, const Eigen::VectorXd& x,
                               double phi_threshold, int max_depth) {
  const int n_nodes = static_cast<int>(mesh.nodes.size());
  std::vector<int> marks;
  for (int e : mesh.active_elems()) {
    if (mesh.elems[e].level >= max_depth) continue;
    double phi_max = 0.0;
    for (int c : mesh.elems[e].corners) {
      phi_max = std::max(phi_max, x[2 * n_nodes + c]);
    }
    if (phi_max > phi_threshold) marks.push_back(e);
  }
  return marks;
}

namespace {

// Nodal transfer of a full [u | phi] vector, component by component.
Eigen::VectorXd transfer_full(const HierMesh& coarse, const HierMesh& fine,
                              const Eigen::VectorXd& x) {
  const int n_old = static_cast<int>(coarse.nodes.size());
  const int n_new = static_cast<int>(fine.nodes.size());
  Eigen::VectorXd out(3 * n_new);
  Eigen::VectorXd comp(n_old), mapped;
  for (int c = 0; c < 2; ++c) {
    for (int n = 0; n < n_old; ++n) comp[n] = x[2 * n + c];
    transfer_nodal(coarse, fine, comp, mapped, false);
    for (int n = 0; n < n_new; ++n) out[2 * n + c] = mapped[n];
  }
  for (int n = 0; n < n_old; ++n) comp[n] = x[2 * n_old + n];
  transfer_nodal(coarse, fine, comp, mapped, true);
  out.tail(n_new) = mapped;
  return out;
}

}  // namespace

AmrOutcome amr_cycle(Model& model, const AmrPolicy& policy,
                     const std::function<bool(Model&)>& resolve) {
  AmrOutcome out;
  for (int cycle = 0; cycle < policy.max_cycles; ++cycle) {
    const std::vector<int> marks = mark_elements(
        model.mesh, model.state.x, policy.phi_threshold, policy.max_depth);
    if (marks.empty()) break;

    HierMesh fine = model.mesh;
    fine.refine(marks, policy.max_depth);

    SimState& st = model.state;
    const Eigen::VectorXd x_new = transfer_full(model.mesh, fine, st.x);
    // The last converged snapshot moves along so increments since step
    // start stay well defined on the new mesh.
    const Eigen::VectorXd xn_new = transfer_full(model.mesh, fine, st.x_n);
    std::vector<std::array<double, 4>> h_new, hn_new;
    transfer_history(model.mesh, fine, st.H, h_new);
    transfer_history(model.mesh, fine, st.H_n, hn_new);

    model.mesh = std::move(fine);
    model.rebuild_dofs();
    st.x = x_new;
    st.x_n = xn_new;
    st.H = std::move(h_new);
    st.H_n = std::move(hn_new);
    model.dofs.apply(st.x, st.lambda);
    model.dofs.apply(st.x_n, st.lambda_n);
    ++out.cycles;

    if (policy.resolve_after_refine && resolve) {
      if (!resolve(model)) {
        out.resolve_failed = true;
        break;
      }
    }
  }
  return out;
}

}  // namespace pff
