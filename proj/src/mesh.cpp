/**
 * @file mesh.cpp
 * @brief Hierarchical quadtree mesh of bilinear quads with hanging nodes.
 */

#include "pff/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pff/shape.hpp"

namespace pff {

//-----------------------------------------------------------------------
//   construction
//-----------------------------------------------------------------------

int HierMesh::add_node(double x, double y, std::uint32_t tags) {
  nodes.push_back({x, y, tags});
  return static_cast<int>(nodes.size()) - 1;
}

int HierMesh::add_elem(const std::array<int, 4>& corners, int level) {
  for (int c : corners) {
    if (c < 0 || c >= static_cast<int>(nodes.size())) {
      throw std::invalid_argument("mesh: element corner out of range");
    }
  }
  Elem e;
  e.corners = corners;
  e.level = level;
  elems.push_back(e);
  return static_cast<int>(elems.size()) - 1;
}

int HierMesh::tag_id(const std::string& name) {
  for (std::size_t i = 0; i < tag_names.size(); ++i) {
    if (tag_names[i] == name) return static_cast<int>(i);
  }
  if (tag_names.size() >= 32) throw std::runtime_error("mesh: tag bits exhausted");
  tag_names.push_back(name);
  return static_cast<int>(tag_names.size()) - 1;
}

int HierMesh::find_tag(const std::string& name) const {
  for (std::size_t i = 0; i < tag_names.size(); ++i) {
    if (tag_names[i] == name) return static_cast<int>(i);
  }
  return -1;
}

bool HierMesh::node_has_tag(int node, int tag) const {
  return tag >= 0 && (nodes[node].tags >> tag) & 1u;
}

std::vector<int> HierMesh::nodes_with_tag(int tag) const {
  std::vector<int> out;
  for (int n = 0; n < static_cast<int>(nodes.size()); ++n) {
    if (node_has_tag(n, tag)) out.push_back(n);
  }
  return out;
}

//-----------------------------------------------------------------------
//   queries
//-----------------------------------------------------------------------

int HierMesh::active_count() const {
  int n = 0;
  for (const Elem& e : elems) n += e.active ? 1 : 0;
  return n;
}

std::vector<int> HierMesh::active_elems() const {
  std::vector<int> out;
  out.reserve(elems.size());
  for (int e = 0; e < static_cast<int>(elems.size()); ++e) {
    if (elems[e].active) out.push_back(e);
  }
  return out;
}

Eigen::Matrix<double, 4, 2> HierMesh::elem_coords(int e) const {
  Eigen::Matrix<double, 4, 2> c;
  for (int k = 0; k < 4; ++k) {
    c(k, 0) = nodes[elems[e].corners[k]].x;
    c(k, 1) = nodes[elems[e].corners[k]].y;
  }
  return c;
}

double HierMesh::elem_area(int e) const {
  const Eigen::Matrix<double, 4, 2> c = elem_coords(e);
  double area = 0.0;
  for (int qp = 0; qp < kQuadPoints; ++qp) {
    area += gauss_weight(qp) * quad_geometry(c, gauss_point(qp)).detJ;
  }
  return area;
}

double HierMesh::total_active_area() const {
  double area = 0.0;
  for (int e : active_elems()) area += elem_area(e);
  return area;
}

std::uint64_t HierMesh::edge_key(int a, int b) {
  const std::uint64_t lo = static_cast<std::uint32_t>(std::min(a, b));
  const std::uint64_t hi = static_cast<std::uint32_t>(std::max(a, b));
  return (hi << 32) | lo;
}

bool HierMesh::midpoint_parents(int node, int& a, int& b) const {
  auto it = midpoint_of_.find(node);
  if (it == midpoint_of_.end()) return false;
  a = it->second.first;
  b = it->second.second;
  return true;
}

//-----------------------------------------------------------------------
//   refinement
//-----------------------------------------------------------------------

int HierMesh::edge_midpoint_node(int a, int b) {
  const std::uint64_t key = edge_key(a, b);
  auto it = edge_midpoint_.find(key);
  if (it != edge_midpoint_.end()) return it->second;

  double x = 0.5 * (nodes[a].x + nodes[b].x);
  double y = 0.5 * (nodes[a].y + nodes[b].y);
  std::uint32_t tags = nodes[a].tags & nodes[b].tags;
  if (snap && node_has_tag(a, snap->tag) && node_has_tag(b, snap->tag)) {
    const double dx = x - snap->cx, dy = y - snap->cy;
    const double d = std::hypot(dx, dy);
    if (d > 0.0) {
      x = snap->cx + snap->r * dx / d;
      y = snap->cy + snap->r * dy / d;
    }
  }
  const int m = add_node(x, y, tags);
  edge_midpoint_.emplace(key, m);
  midpoint_of_.emplace(m, std::make_pair(a, b));
  return m;
}

HierMesh::EdgeElems HierMesh::active_edge_map() const {
  EdgeElems edges;
  edges.reserve(elems.size() * 4);
  for (int e = 0; e < static_cast<int>(elems.size()); ++e) {
    if (!elems[e].active) continue;
    const auto& c = elems[e].corners;
    for (int k = 0; k < 4; ++k) {
      auto& slot = edges.try_emplace(edge_key(c[k], c[(k + 1) % 4]),
                                     std::array<int, 2>{-1, -1}).first->second;
      slot[slot[0] < 0 ? 0 : 1] = e;
    }
  }
  return edges;
}

int HierMesh::coarser_neighbor(int a, int b, const EdgeElems& edges) const {
  int x = a, y = b;
  // Walk up through containing edges until an active element is found.
  for (;;) {
    int pa = -1, pb = -1;
    int ma, mb;
    if (midpoint_parents(x, ma, mb) && (y == ma || y == mb)) {
      pa = ma;
      pb = mb;
    } else if (midpoint_parents(y, ma, mb) && (x == ma || x == mb)) {
      pa = ma;
      pb = mb;
    } else {
      return -1;
    }
    auto it = edges.find(edge_key(pa, pb));
    if (it != edges.end()) {
      for (int e : it->second) {
        if (e >= 0 && elems[e].active) return e;
      }
    }
    x = pa;
    y = pb;
  }
}

std::vector<int> HierMesh::refine(const std::vector<int>& ids, int max_level) {
  for (int id : ids) {
    if (id < 0 || id >= static_cast<int>(elems.size()) || !elems[id].active) {
      throw std::invalid_argument("mesh: refine id " + std::to_string(id) +
                                  " is not an active element");
    }
  }
  EdgeElems edges = active_edge_map();
  std::vector<int> log;
  for (int id : ids) {
    refine_one(id, max_level, edges, log);
  }
  return log;
}

void HierMesh::refine_one(int e, int max_level, EdgeElems& edges,
                          std::vector<int>& log) {
  if (!elems[e].active) return;  // refined already by an earlier cascade
  if (elems[e].level >= max_level) return;

  // 2:1 balance: a strictly coarser active edge neighbor splits first.
  for (int k = 0; k < 4; ++k) {
    for (;;) {
      const auto& c = elems[e].corners;
      const int n = coarser_neighbor(c[k], c[(k + 1) % 4], edges);
      if (n < 0) break;
      refine_one(n, max_level, edges, log);
    }
  }

  const std::array<int, 4> c = elems[e].corners;
  const int level = elems[e].level;
  for (int k = 0; k < 4; ++k) {
    auto it = edges.find(edge_key(c[k], c[(k + 1) % 4]));
    if (it != edges.end()) {
      for (int& slot : it->second) {
        if (slot == e) slot = -1;
      }
    }
  }

  std::array<int, 4> mid;
  for (int k = 0; k < 4; ++k) mid[k] = edge_midpoint_node(c[k], c[(k + 1) % 4]);
  double cx = 0.0, cy = 0.0;
  std::uint32_t ctags = ~0u;
  for (int k = 0; k < 4; ++k) {
    cx += 0.25 * nodes[c[k]].x;
    cy += 0.25 * nodes[c[k]].y;
    ctags &= nodes[c[k]].tags;
  }
  const int cc = add_node(cx, cy, ctags);
  center_of_.emplace(cc, c);

  const std::array<std::array<int, 4>, 4> kid_corners = {{
      {c[0], mid[0], cc, mid[3]},
      {mid[0], c[1], mid[1], cc},
      {cc, mid[1], c[2], mid[2]},
      {mid[3], cc, mid[2], c[3]},
  }};
  elems[e].active = false;
  for (int q = 0; q < 4; ++q) {
    const int kid = add_elem(kid_corners[q], level + 1);
    elems[kid].parent = e;
    elems[e].children[q] = kid;
    const auto& kc = elems[kid].corners;
    for (int k = 0; k < 4; ++k) {
      auto& slot = edges.try_emplace(edge_key(kc[k], kc[(k + 1) % 4]),
                                     std::array<int, 2>{-1, -1}).first->second;
      slot[slot[0] < 0 ? 0 : 1] = kid;
    }
  }
  log.push_back(e);
}

//-----------------------------------------------------------------------
//   state transfer
//-----------------------------------------------------------------------

void require_descendant(const HierMesh& coarse, const HierMesh& fine) {
  if (fine.nodes.size() < coarse.nodes.size() ||
      fine.elems.size() < coarse.elems.size()) {
    throw std::invalid_argument("transfer: fine mesh is not a refinement of coarse");
  }
  for (std::size_t n = 0; n < coarse.nodes.size(); ++n) {
    if (coarse.nodes[n].x != fine.nodes[n].x ||
        coarse.nodes[n].y != fine.nodes[n].y) {
      throw std::invalid_argument("transfer: node prefix mismatch");
    }
  }
  for (std::size_t e = 0; e < coarse.elems.size(); ++e) {
    if (coarse.elems[e].corners != fine.elems[e].corners ||
        coarse.elems[e].level != fine.elems[e].level) {
      throw std::invalid_argument("transfer: element prefix mismatch");
    }
  }
}

void transfer_nodal(const HierMesh& coarse, const HierMesh& fine,
                    const Eigen::VectorXd& field, Eigen::VectorXd& out,
                    bool clamp_unit) {
  require_descendant(coarse, fine);
  if (field.size() != static_cast<Eigen::Index>(coarse.nodes.size())) {
    throw std::invalid_argument("transfer: field size does not match mesh");
  }
  out.resize(static_cast<Eigen::Index>(fine.nodes.size()));
  out.head(field.size()) = field;
  // New nodes are numbered after their interpolation sources, so a single
  // increasing pass resolves cascaded refinements.
  for (int n = static_cast<int>(coarse.nodes.size());
       n < static_cast<int>(fine.nodes.size()); ++n) {
    int a, b;
    if (fine.midpoint_parents(n, a, b)) {
      out[n] = 0.5 * (out[a] + out[b]);
    } else {
      auto it = fine.center_of_.find(n);
      if (it == fine.center_of_.end()) {
        throw std::invalid_argument("transfer: node without refinement parents");
      }
      out[n] = 0.25 * (out[it->second[0]] + out[it->second[1]] +
                       out[it->second[2]] + out[it->second[3]]);
    }
  }
  if (clamp_unit) out = out.cwiseMax(0.0).cwiseMin(1.0);
}

void transfer_history(const HierMesh& coarse, const HierMesh& fine,
                      const std::vector<std::array<double, 4>>& field,
                      std::vector<std::array<double, 4>>& out) {
  require_descendant(coarse, fine);
  if (field.size() != coarse.elems.size()) {
    throw std::invalid_argument("transfer: history size does not match mesh");
  }
  out.assign(fine.elems.size(), {0.0, 0.0, 0.0, 0.0});
  std::copy(field.begin(), field.end(), out.begin());

  // Quadrant offsets of child reference squares inside the parent.
  for (int e = 0; e < static_cast<int>(fine.elems.size()); ++e) {
    const bool newly_split =
        fine.elems[e].children[0] >= 0 &&
        (e >= static_cast<int>(coarse.elems.size()) ||
         coarse.elems[e].children[0] < 0);
    if (!newly_split) continue;
    for (int q = 0; q < 4; ++q) {
      const int kid = fine.elems[e].children[q];
      const Eigen::Vector2d off(0.5 * kXiCorner[q], 0.5 * kEtaCorner[q]);
      for (int gp = 0; gp < kQuadPoints; ++gp) {
        const Eigen::Vector2d p = off + 0.5 * gauss_point(gp);
        int nearest = 0;
        double best = (p - gauss_point(0)).squaredNorm();
        for (int j = 1; j < kQuadPoints; ++j) {
          const double d = (p - gauss_point(j)).squaredNorm();
          if (d < best) {
            best = d;
            nearest = j;
          }
        }
        out[kid][gp] = out[e][nearest];
      }
    }
  }
}

}  // namespace pff
