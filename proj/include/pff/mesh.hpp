/**
 * @file mesh.hpp
 * @brief Hierarchical quadtree mesh of bilinear quads with hanging nodes.
 *
 * Refinement splits a quad into four children and never coarsens. Edge
 * midpoints are shared through a persistent registry keyed by node-id pairs,
 * so a geometric slit built from duplicated nodes stays topologically open.
 */

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace pff {

struct Node {
  double x = 0.0;
  double y = 0.0;
  std::uint32_t tags = 0;  // bitmask into HierMesh::tag_names
};

struct Elem {
  std::array<int, 4> corners{};  // counter-clockwise
  int level = 0;
  int parent = -1;
  std::array<int, 4> children = {-1, -1, -1, -1};  // child k in corner-k quadrant
  bool active = true;
};

// Snaps refinement nodes created on a tagged boundary back onto a circle,
// used for polygonal hole approximations that converge to the true arc.
struct SnapCircle {
  double cx = 0.0;
  double cy = 0.0;
  double r = 0.0;
  int tag = -1;
};

class HierMesh {
 public:
  std::vector<Node> nodes;
  std::vector<Elem> elems;
  std::vector<std::string> tag_names;
  std::optional<SnapCircle> snap;

  int add_node(double x, double y, std::uint32_t tags = 0);
  int add_elem(const std::array<int, 4>& corners, int level = 0);

  // Registers a tag name, reusing the bit if already present.
  int tag_id(const std::string& name);
  // Lookup without registration; -1 if unknown.
  int find_tag(const std::string& name) const;
  bool node_has_tag(int node, int tag) const;
  std::vector<int> nodes_with_tag(int tag) const;

  int active_count() const;
  std::vector<int> active_elems() const;
  Eigen::Matrix<double, 4, 2> elem_coords(int e) const;
  double elem_area(int e) const;
  double total_active_area() const;

  // Midpoint registry: sorted node pair -> midpoint node, and the inverse.
  const std::unordered_map<std::uint64_t, int>& edge_midpoints() const {
    return edge_midpoint_;
  }
  bool midpoint_parents(int node, int& a, int& b) const;
  static std::uint64_t edge_key(int a, int b);

  // Splits each listed active element into four children, cascading into
  // coarser edge neighbors so active levels never differ by more than one
  // across an edge. Ids must be active in the mesh as passed; elements
  // already at max_level are skipped. Returns the refined element ids.
  std::vector<int> refine(const std::vector<int>& ids,
                          int max_level = 1 << 20);

 private:
  using EdgeElems = std::unordered_map<std::uint64_t, std::array<int, 2>>;

  std::unordered_map<std::uint64_t, int> edge_midpoint_;
  std::unordered_map<int, std::pair<int, int>> midpoint_of_;
  std::unordered_map<int, std::array<int, 4>> center_of_;

  int edge_midpoint_node(int a, int b);
  EdgeElems active_edge_map() const;
  // Active element whose edge strictly contains (a,b), found by walking the
  // midpoint registry upward. -1 if the edge is not a half of a split edge.
  int coarser_neighbor(int a, int b, const EdgeElems& edges) const;
  void refine_one(int e, int max_level, EdgeElems& edges,
                  std::vector<int>& log);

  friend void transfer_nodal(const HierMesh&, const HierMesh&,
                             const Eigen::VectorXd&, Eigen::VectorXd&, bool);
};

// Interpolates a nodal field from a mesh onto one derived from it by
// refinement: new nodes take the parent-element bilinear value, which is the
// endpoint average for edge midpoints and the corner average for centers.
// clamp_unit clips the result to [0,1] (phase field).
void transfer_nodal(const HierMesh& coarse, const HierMesh& fine,
                    const Eigen::VectorXd& field, Eigen::VectorXd& out,
                    bool clamp_unit = false);

// Moves a per-element quadrature-point field onto the refined mesh: each
// child quadrature point takes the value of the nearest parent Gauss point
// measured in the parent reference square.
void transfer_history(const HierMesh& coarse, const HierMesh& fine,
                      const std::vector<std::array<double, 4>>& field,
                      std::vector<std::array<double, 4>>& out);

// Both transfers require fine to be a refinement descendant of coarse;
// this checks the shared node/element prefix and throws otherwise.
void require_descendant(const HierMesh& coarse, const HierMesh& fine);

}  // namespace pff
