/**
 * @file energy.cpp
 * @brief Quadrature of fracture and elastic energies over the active mesh.
 */

#include "pff/energy.hpp"

#include "pff/shape.hpp"

namespace pff {

namespace {

// Gathers element phase values; x holds [u | phi] per the dof layout.
Eigen::Vector4d phi_local(const HierMesh& mesh, const Eigen::VectorXd& x, int e) {
  const int n_nodes = static_cast<int>(mesh.nodes.size());
  Eigen::Vector4d p;
  for (int k = 0; k < 4; ++k) p[k] = x[2 * n_nodes + mesh.elems[e].corners[k]];
  return p;
}

}  // namespace

double fracture_energy(const HierMesh& mesh, const MaterialParams& mat,
                       const Eigen::VectorXd& x) {
  const double a_l = mat.gc / (mat.cw * mat.ell);
  double total = 0.0;
  for (int e : mesh.active_elems()) {
    const Eigen::Matrix<double, 4, 2> coords = mesh.elem_coords(e);
    const Eigen::Vector4d phi_e = phi_local(mesh, x, e);
    for (int qp = 0; qp < kQuadPoints; ++qp) {
      const QuadGeometry geom = quad_geometry(coords, gauss_point(qp));
      const double phi = shape_values(gauss_point(qp)).dot(phi_e);
      const Eigen::Vector2d grad = geom.grad_x.transpose() * phi_e;
      total += gauss_weight(qp) * geom.detJ * a_l *
               (dissipation(phi).w + mat.ell * mat.ell * grad.squaredNorm());
    }
  }
  return total;
}

double incremental_dissipation(const HierMesh& mesh, const MaterialParams& mat,
                               const Eigen::VectorXd& x,
                               const Eigen::VectorXd& x_start) {
  const double a_l = mat.gc / (mat.cw * mat.ell);
  double total = 0.0;
  for (int e : mesh.active_elems()) {
    const Eigen::Matrix<double, 4, 2> coords = mesh.elem_coords(e);
    const Eigen::Vector4d phi_e = phi_local(mesh, x, e);
    const Eigen::Vector4d dphi_e = phi_e - phi_local(mesh, x_start, e);
    for (int qp = 0; qp < kQuadPoints; ++qp) {
      const QuadGeometry geom = quad_geometry(coords, gauss_point(qp));
      const Eigen::Vector4d N = shape_values(gauss_point(qp));
      const Eigen::Vector2d grad = geom.grad_x.transpose() * phi_e;
      const Eigen::Vector2d dgrad = geom.grad_x.transpose() * dphi_e;
      total += gauss_weight(qp) * geom.detJ * a_l *
               (dissipation(N.dot(phi_e)).dw * N.dot(dphi_e) +
                2.0 * mat.ell * mat.ell * grad.dot(dgrad));
    }
  }
  return total;
}

double elastic_energy(const HierMesh& mesh, const MaterialParams& mat,
                      const Eigen::VectorXd& x) {
  double total = 0.0;
  for (int e : mesh.active_elems()) {
    const Eigen::Matrix<double, 4, 2> coords = mesh.elem_coords(e);
    const Eigen::Vector4d phi_e = phi_local(mesh, x, e);
    Eigen::Matrix<double, 8, 1> u_e;
    for (int k = 0; k < 4; ++k) {
      u_e[2 * k] = x[2 * mesh.elems[e].corners[k]];
      u_e[2 * k + 1] = x[2 * mesh.elems[e].corners[k] + 1];
    }
    for (int qp = 0; qp < kQuadPoints; ++qp) {
      const QuadGeometry geom = quad_geometry(coords, gauss_point(qp));
      Eigen::Vector3d eps;
      const auto& g = geom.grad_x;
      eps[0] = eps[1] = eps[2] = 0.0;
      for (int k = 0; k < 4; ++k) {
        eps[0] += g(k, 0) * u_e[2 * k];
        eps[1] += g(k, 1) * u_e[2 * k + 1];
        eps[2] += g(k, 1) * u_e[2 * k] + g(k, 0) * u_e[2 * k + 1];
      }
      const double phi = shape_values(gauss_point(qp)).dot(phi_e);
      total += gauss_weight(qp) * geom.detJ * degradation(mat, phi).g *
               split_energy(mat, eps).psi_total;
    }
  }
  return total;
}

}  // namespace pff
