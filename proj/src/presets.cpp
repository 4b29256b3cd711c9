/**
 * @file presets.cpp
 * @brief Procedural construction of the benchmark geometries.
 *
 * All presets produce axis-ordered structured grids; the notched presets
 * duplicate the node row along the slit so the cut is topologically open,
 * and the holed plate removes cells overlapping the circle and pulls the
 * rim nodes onto it (the polygon converges to the circle under refinement
 * via the snap registry).
 */

#include "pff/config.hpp"

#include <cmath>
#include <unordered_map>

#include "pff/shape.hpp"

namespace pff {

namespace {

constexpr double kGeomTol = 1e-9;

void add_tag(HierMesh& mesh, int node, int tag) {
  mesh.nodes[node].tags |= (1u << tag);
}

// Every Gauss point of every active element must see a positive Jacobian;
// node snapping and grading could otherwise tangle cells silently.
void check_element_quality(const HierMesh& mesh) {
  for (int e : mesh.active_elems()) {
    const auto coords = mesh.elem_coords(e);
    for (int qp = 0; qp < kQuadPoints; ++qp) {
      const QuadGeometry g = quad_geometry(coords, gauss_point(qp));
      if (!(g.detJ > 0.0)) {
        throw ConfigError("geometry: element " + std::to_string(e) +
                          " is degenerate (non-positive Jacobian)");
      }
    }
  }
}

struct SideTags {
  int left, right, bottom, top;
};

SideTags register_side_tags(HierMesh& mesh) {
  return {mesh.tag_id("left"), mesh.tag_id("right"), mesh.tag_id("bottom"),
          mesh.tag_id("top")};
}

void tag_grid_sides(HierMesh& mesh, int node, int i, int j, int nx, int ny,
                    const SideTags& t) {
  if (i == 0) add_tag(mesh, node, t.left);
  if (i == nx) add_tag(mesh, node, t.right);
  if (j == 0) add_tag(mesh, node, t.bottom);
  if (j == ny) add_tag(mesh, node, t.top);
}

// Full structured grid with a per-(i,j) coordinate map. Node id = j*(nx+1)+i.
template <typename CoordFn>
void build_grid(HierMesh& mesh, int nx, int ny, CoordFn coord) {
  const SideTags t = register_side_tags(mesh);
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      double x, y;
      coord(i, j, x, y);
      const int n = mesh.add_node(x, y);
      tag_grid_sides(mesh, n, i, j, nx, ny, t);
    }
  }
  const auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      mesh.add_elem({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
}

HierMesh build_rect_mesh(const GeometrySettings& g) {
  HierMesh mesh;
  build_grid(mesh, g.nx, g.ny, [&](int i, int j, double& x, double& y) {
    x = g.size_x * i / g.nx;
    y = g.size_y * j / g.ny;
  });
  return mesh;
}

// Bar of length tbt_length whose cross-section grows linearly from
// tbt_width_fixed at x=0 to tbt_width_loaded at x=L, centered on y=0.
HierMesh build_tapered_mesh(const GeometrySettings& g) {
  HierMesh mesh;
  build_grid(mesh, g.nx, g.ny, [&](int i, int j, double& x, double& y) {
    x = g.tbt_length * i / g.nx;
    const double half =
        0.5 * (g.tbt_width_fixed +
               (g.tbt_width_loaded - g.tbt_width_fixed) * x / g.tbt_length);
    y = half * (2.0 * j / g.ny - 1.0);
  });
  return mesh;
}

// Rectangle [0,sx] x [-sy/2, sy/2] minus a circular hole: cells with any
// corner inside the circle are dropped, rim nodes are pulled radially onto
// the circle, then registered for snap projection of refinement midpoints.
HierMesh build_holed_mesh(const GeometrySettings& g) {
  HierMesh mesh;
  const SideTags t = register_side_tags(mesh);
  const double hx = g.size_x / g.nx;
  const double hy = g.size_y / g.ny;
  const double r2 = g.hole_r * g.hole_r;
  const auto coord = [&](int i, int j, double& x, double& y) {
    x = i * hx;
    y = -0.5 * g.size_y + j * hy;
  };
  const auto inside = [&](int i, int j) {
    double x, y;
    coord(i, j, x, y);
    const double dx = x - g.hole_cx;
    const double dy = y - g.hole_cy;
    return dx * dx + dy * dy < r2 * (1.0 - 1e-12);
  };

  std::unordered_map<long, int> node_of;
  const auto get_node = [&](int i, int j) {
    const long key = static_cast<long>(j) * (g.nx + 1) + i;
    auto it = node_of.find(key);
    if (it != node_of.end()) return it->second;
    double x, y;
    coord(i, j, x, y);
    const int n = mesh.add_node(x, y);
    tag_grid_sides(mesh, n, i, j, g.nx, g.ny, t);
    node_of.emplace(key, n);
    return n;
  };

  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (inside(i, j) || inside(i + 1, j) || inside(i + 1, j + 1) ||
          inside(i, j + 1)) {
        continue;
      }
      mesh.add_elem({get_node(i, j), get_node(i + 1, j), get_node(i + 1, j + 1),
                     get_node(i, j + 1)});
    }
  }
  if (mesh.elems.empty()) throw ConfigError("geometry: hole removes all cells");

  // Rim = edges used by exactly one cell whose endpoints do not share an
  // outer side of the rectangle.
  std::unordered_map<std::uint64_t, int> edge_count;
  for (const Elem& e : mesh.elems) {
    for (int k = 0; k < 4; ++k) {
      ++edge_count[HierMesh::edge_key(e.corners[k], e.corners[(k + 1) % 4])];
    }
  }
  const int hole_tag = mesh.tag_id("hole");
  const std::uint32_t outer_bits = (1u << t.left) | (1u << t.right) |
                                   (1u << t.bottom) | (1u << t.top);
  std::vector<int> rim;
  for (const Elem& e : mesh.elems) {
    for (int k = 0; k < 4; ++k) {
      const int a = e.corners[k];
      const int b = e.corners[(k + 1) % 4];
      if (edge_count[HierMesh::edge_key(a, b)] != 1) continue;
      if ((mesh.nodes[a].tags & mesh.nodes[b].tags & outer_bits) != 0) continue;
      rim.push_back(a);
      rim.push_back(b);
    }
  }
  for (int n : rim) {
    if (mesh.node_has_tag(n, hole_tag)) continue;
    add_tag(mesh, n, hole_tag);
    Node& nd = mesh.nodes[n];
    const double dx = nd.x - g.hole_cx;
    const double dy = nd.y - g.hole_cy;
    const double d = std::hypot(dx, dy);
    nd.x = g.hole_cx + g.hole_r * dx / d;
    nd.y = g.hole_cy + g.hole_r * dy / d;
  }
  mesh.snap = SnapCircle{g.hole_cx, g.hole_cy, g.hole_r, hole_tag};
  return mesh;
}

// Unit-style rectangle with a horizontal slit at mid-height from the left
// edge to notch_length: the node row under the cells above the slit is
// duplicated, so the two flanks share only the tip node.
HierMesh build_notched_mesh(const GeometrySettings& g, int& tip_node) {
  HierMesh mesh;
  build_grid(mesh, g.nx, g.ny, [&](int i, int j, double& x, double& y) {
    x = g.size_x * i / g.nx;
    y = g.size_y * j / g.ny;
  });
  const double hx = g.size_x / g.nx;
  const int it = static_cast<int>(std::llround(g.notch_length / hx));
  if (std::abs(it * hx - g.notch_length) > kGeomTol * g.size_x || it < 1 ||
      it >= g.nx) {
    throw ConfigError("geometry: notch_length must land on an interior grid "
                      "line of the base mesh");
  }
  const int jmid = g.ny / 2;
  const auto id = [&](int i, int j) { return j * (g.nx + 1) + i; };
  tip_node = id(it, jmid);

  std::vector<int> dup(it, -1);
  for (int i = 0; i < it; ++i) {
    const Node& base = mesh.nodes[id(i, jmid)];
    dup[i] = mesh.add_node(base.x, base.y, base.tags);
  }
  for (int i = 0; i < g.nx; ++i) {
    Elem& cell = mesh.elems[jmid * g.nx + i];
    if (i < it) cell.corners[0] = dup[i];
    if (i + 1 < it) cell.corners[1] = dup[i + 1];
  }
  return mesh;
}

void prerefine(HierMesh& mesh, const GeometrySettings& g, int tip_node) {
  const bool at_tip = tip_node >= 0;
  for (int round = 0; round < g.pre_refine; ++round) {
    std::vector<int> marks;
    for (int e : mesh.active_elems()) {
      const auto& c = mesh.elems[e].corners;
      if (!at_tip || c[0] == tip_node || c[1] == tip_node || c[2] == tip_node ||
          c[3] == tip_node) {
        marks.push_back(e);
      }
    }
    mesh.refine(marks);
  }
}

DirichletSpec fix(const std::string& tag, int comp) {
  return DirichletSpec{tag, comp, false, 0.0};
}

DirichletSpec drive(const std::string& tag, int comp) {
  return DirichletSpec{tag, comp, true, 1.0};
}

}  // namespace

Model build_model(const RunConfig& cfg) {
  validate_config(cfg);
  Model m;
  m.mat = cfg.mat;
  int tip_node = -1;
  switch (cfg.geo.preset) {
    case PresetKind::tbt:
      m.mesh = build_tapered_mesh(cfg.geo);
      m.bcs = {fix("left", 0), fix("left", 1), drive("right", 0)};
      break;
    case PresetKind::eh:
      m.mesh = build_holed_mesh(cfg.geo);
      m.bcs = {fix("bottom", 0), fix("bottom", 1), drive("top", 1)};
      break;
    case PresetKind::sent:
      m.mesh = build_notched_mesh(cfg.geo, tip_node);
      m.bcs = {fix("bottom", 0), fix("bottom", 1), drive("top", 1)};
      break;
    case PresetKind::sens:
      m.mesh = build_notched_mesh(cfg.geo, tip_node);
      m.bcs = {fix("bottom", 0), fix("bottom", 1), fix("left", 1),
               fix("right", 1), drive("top", 0)};
      break;
    case PresetKind::rect:
      m.mesh = build_rect_mesh(cfg.geo);
      m.bcs = {fix("bottom", 0), fix("bottom", 1), drive("top", 1)};
      break;
  }
  prerefine(m.mesh, cfg.geo, tip_node);
  check_element_quality(m.mesh);
  m.init_state();
  return m;
}

}  // namespace pff
