/**
 * @file constraints.cpp
 * @brief Dof classification, Dirichlet data and hanging-node constraints.
 */

#include "pff/constraints.hpp"

#include <cmath>
#include <stdexcept>

namespace pff {

namespace {

struct Prescription {
  bool set = false;
  bool driven = false;
  double value = 0.0;
};

}  // namespace

void DofMap::apply(Eigen::VectorXd& x, double lambda) const {
  for (int d = 0; d < n_total; ++d) {
    switch (cls[d]) {
      case DofClass::fixed:
      case DofClass::driven:
        x[d] = fixed_eff[d] + lambda * uhat_eff[d];
        break;
      default:
        break;
    }
  }
  // Hanging values follow their masters, which are set by now.
  for (int d = 0; d < n_total; ++d) {
    if (cls[d] != DofClass::hanging) continue;
    double v = fixed_eff[d] + lambda * uhat_eff[d];
    for (const MasterTerm& t : row_terms[d]) v += t.w * x[free_dofs[t.col]];
    x[d] = v;
  }
}

void DofMap::expand_add(const Eigen::VectorXd& d_free, double dlambda,
                        Eigen::VectorXd& x) const {
  for (int d = 0; d < n_total; ++d) {
    double dv = uhat_eff[d] * dlambda;
    for (const MasterTerm& t : row_terms[d]) dv += t.w * d_free[t.col];
    x[d] += dv;
  }
}

Eigen::VectorXd DofMap::condense(const Eigen::VectorXd& full) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_free);
  for (int d = 0; d < n_total; ++d) {
    for (const MasterTerm& t : row_terms[d]) out[t.col] += t.w * full[d];
  }
  return out;
}

DofMap build_constraints(const HierMesh& mesh,
                         const std::vector<DirichletSpec>& bcs) {
  DofMap map;
  map.n_nodes = static_cast<int>(mesh.nodes.size());
  map.n_total = 3 * map.n_nodes;
  map.cls.assign(map.n_total, DofClass::free_dof);
  map.uhat_eff.assign(map.n_total, 0.0);
  map.fixed_eff.assign(map.n_total, 0.0);
  map.row_terms.assign(map.n_total, {});

  // Every node must be a corner of an active element, otherwise its dofs
  // would produce empty rows.
  {
    std::vector<char> used(map.n_nodes, 0);
    for (int e : mesh.active_elems()) {
      for (int c : mesh.elems[e].corners) used[c] = 1;
    }
    for (int n = 0; n < map.n_nodes; ++n) {
      if (!used[n]) throw std::logic_error("constraints: orphan node " + std::to_string(n));
    }
  }

  std::vector<Prescription> presc(map.n_total);
  for (const DirichletSpec& bc : bcs) {
    const int tag = mesh.find_tag(bc.tag);
    if (tag < 0) {
      throw std::runtime_error("constraints: unknown boundary tag '" + bc.tag + "'");
    }
    if (bc.comp < 0 || bc.comp > 2) {
      throw std::runtime_error("constraints: dof component must be 0, 1 or 2");
    }
    if (bc.comp == 2 && bc.driven) {
      throw std::runtime_error("constraints: phase dofs cannot be driven");
    }
    for (int n : mesh.nodes_with_tag(tag)) {
      const int d = bc.comp == 2 ? map.pdof(n) : DofMap::udof(n, bc.comp);
      Prescription& p = presc[d];
      if (p.set && (p.driven != bc.driven || p.value != bc.value)) {
        throw std::runtime_error("constraints: conflicting conditions on a dof of '" +
                                 bc.tag + "'");
      }
      p = {true, bc.driven, bc.value};
    }
  }
  for (int d = 0; d < map.n_total; ++d) {
    if (!presc[d].set) continue;
    map.cls[d] = presc[d].driven ? DofClass::driven : DofClass::fixed;
    (presc[d].driven ? map.uhat_eff : map.fixed_eff)[d] = presc[d].value;
  }

  // Hanging nodes: midpoint of an edge that some active element owns whole.
  std::vector<std::array<int, 2>> masters(map.n_nodes, {-1, -1});
  std::vector<char> hanging(map.n_nodes, 0);
  const auto& registry = mesh.edge_midpoints();
  for (int e : mesh.active_elems()) {
    const auto& c = mesh.elems[e].corners;
    for (int k = 0; k < 4; ++k) {
      const int a = c[k], b = c[(k + 1) % 4];
      auto it = registry.find(HierMesh::edge_key(a, b));
      if (it == registry.end()) continue;
      hanging[it->second] = 1;
      masters[it->second] = {a, b};
    }
  }
  for (int n = 0; n < map.n_nodes; ++n) {
    if (!hanging[n]) continue;
    for (int comp = 0; comp < 3; ++comp) {
      const int d = comp == 2 ? map.pdof(n) : DofMap::udof(n, comp);
      if (map.cls[d] != DofClass::free_dof) {
        throw std::logic_error("constraints: hanging dof carries a Dirichlet condition");
      }
      map.cls[d] = DofClass::hanging;
    }
  }

  // Free numbering, then master expansions.
  map.free_index.assign(map.n_total, -1);
  for (int d = 0; d < map.n_total; ++d) {
    if (map.cls[d] == DofClass::free_dof) {
      map.free_index[d] = map.n_free++;
      map.free_dofs.push_back(d);
    }
  }
  for (int d = 0; d < map.n_total; ++d) {
    switch (map.cls[d]) {
      case DofClass::free_dof:
        map.row_terms[d].push_back({map.free_index[d], 1.0});
        break;
      case DofClass::hanging: {
        const int node = d < 2 * map.n_nodes ? d / 2 : d - 2 * map.n_nodes;
        const int comp = d < 2 * map.n_nodes ? d % 2 : 2;
        for (int m : masters[node]) {
          const int md = comp == 2 ? map.pdof(m) : DofMap::udof(m, comp);
          switch (map.cls[md]) {
            case DofClass::free_dof:
              map.row_terms[d].push_back({map.free_index[md], 0.5});
              break;
            case DofClass::fixed:
            case DofClass::driven:
              map.fixed_eff[d] += 0.5 * map.fixed_eff[md];
              map.uhat_eff[d] += 0.5 * map.uhat_eff[md];
              break;
            case DofClass::hanging:
              throw std::logic_error("constraints: hanging master of a hanging dof");
          }
        }
        break;
      }
      default:
        break;
    }
  }
  return map;
}

}  // namespace pff
