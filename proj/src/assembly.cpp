/**
 * @file assembly.cpp
 * @brief Element systems and global assembly of the coupled problem.
 */

#include "pff/assembly.hpp"

#include <cmath>
#include <thread>

#include "pff/shape.hpp"

namespace pff {

namespace {

Eigen::Matrix<double, 3, 8> strain_matrix(const Eigen::Matrix<double, 4, 2>& grad) {
  Eigen::Matrix<double, 3, 8> B = Eigen::Matrix<double, 3, 8>::Zero();
  for (int k = 0; k < 4; ++k) {
    B(0, 2 * k) = grad(k, 0);
    B(1, 2 * k + 1) = grad(k, 1);
    B(2, 2 * k) = grad(k, 1);
    B(2, 2 * k + 1) = grad(k, 0);
  }
  return B;
}

}  // namespace

std::array<double, 4> element_history(const HierMesh& mesh, int e,
                                      const MaterialParams& mat,
                                      const Eigen::Matrix<double, 8, 1>& u_e,
                                      const std::array<double, 4>& h_start) {
  const Eigen::Matrix<double, 4, 2> coords = mesh.elem_coords(e);
  std::array<double, 4> h = h_start;
  for (int qp = 0; qp < kQuadPoints; ++qp) {
    const QuadGeometry geom = quad_geometry(coords, gauss_point(qp));
    const Eigen::Vector3d eps = strain_matrix(geom.grad_x) * u_e;
    h[qp] = update_history(h_start[qp], split_energy(mat, eps).psi_f);
  }
  return h;
}

ElementSystem element_system(const HierMesh& mesh, int e,
                             const MaterialParams& mat,
                             const Eigen::Matrix<double, 8, 1>& u_e,
                             const Eigen::Vector4d& phi_e,
                             const Eigen::Vector4d& dphi_e,
                             const std::array<double, 4>& h_e) {
  ElementSystem out;
  out.Kuu.setZero();
  out.Kup.setZero();
  out.Kpu.setZero();
  out.Kpp.setZero();
  out.fu.setZero();
  out.fp.setZero();
  out.arc_row.setZero();

  const Eigen::Matrix<double, 4, 2> coords = mesh.elem_coords(e);
  const double a_l = mat.gc / (mat.cw * mat.ell);      // local dissipation
  const double b_l = 2.0 * mat.gc * mat.ell / mat.cw;  // gradient dissipation

  for (int qp = 0; qp < kQuadPoints; ++qp) {
    const QuadGeometry geom = quad_geometry(coords, gauss_point(qp));
    if (!(geom.detJ > 0.0)) throw AssemblyError(e, "non-positive Jacobian");
    const double w = gauss_weight(qp) * geom.detJ;

    const Eigen::Vector4d N = shape_values(gauss_point(qp));
    const Eigen::Matrix<double, 3, 8> B = strain_matrix(geom.grad_x);
    const Eigen::Vector3d eps = B * u_e;
    const SplitValue sv = split_energy(mat, eps);

    const double phi = N.dot(phi_e);
    const double dphi = N.dot(dphi_e);
    const Eigen::Vector2d grad_phi = geom.grad_x.transpose() * phi_e;
    const Eigen::Vector2d grad_dphi = geom.grad_x.transpose() * dphi_e;

    const DegradationValue g = degradation(mat, phi);
    const DissipationValue wv = dissipation(phi);
    const double H = h_e[qp];
    const bool driving = sv.psi_f >= H;  // loading: history follows psi_f

    out.Kuu += (w * g.g) * (B.transpose() * sv.C * B);
    out.Kup += (w * g.dg) * (B.transpose() * sv.sigma) * N.transpose();
    if (driving) {
      out.Kpu += (w * g.dg) * N * (sv.dpsi_f.transpose() * B);
    }
    out.Kpp += w * (b_l * (geom.grad_x * geom.grad_x.transpose()) +
                    (g.ddg * H + a_l * wv.ddw) * (N * N.transpose()));

    out.fu += (w * g.g) * (B.transpose() * sv.sigma);
    out.fp += w * (b_l * (geom.grad_x * grad_phi) + (g.dg * H + a_l * wv.dw) * N);

    out.dG += w * a_l * (wv.dw * dphi + 2.0 * mat.ell * mat.ell * grad_phi.dot(grad_dphi));
    out.arc_row += (w * a_l) * ((wv.ddw * dphi + wv.dw) * N +
                                2.0 * mat.ell * mat.ell *
                                    (geom.grad_x * (grad_dphi + grad_phi)));
  }

  if (!out.Kuu.allFinite() || !out.Kup.allFinite() || !out.Kpu.allFinite() ||
      !out.Kpp.allFinite() || !out.fu.allFinite() || !out.fp.allFinite() ||
      !out.arc_row.allFinite() || !std::isfinite(out.dG)) {
    throw AssemblyError(e, "non-finite element system");
  }
  return out;
}

//-----------------------------------------------------------------------
//   global assembly
//-----------------------------------------------------------------------

namespace {

struct Chunk {
  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd f_full;
  double dG = 0.0;
  std::exception_ptr error;
};

void assemble_range(const HierMesh& mesh, const DofMap& dofs,
                    const MaterialParams& mat, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& x_start,
                    const std::vector<std::array<double, 4>>& H_start,
                    bool bordered, const std::vector<int>& active,
                    std::size_t lo, std::size_t hi,
                    std::vector<std::array<double, 4>>& H_new, Chunk& out) {
  out.f_full = Eigen::VectorXd::Zero(dofs.n_total);
  out.trips.reserve((hi - lo) * 180);
  const int lam_idx = dofs.n_free;

  for (std::size_t idx = lo; idx < hi; ++idx) {
    const int e = active[idx];
    const auto& c = mesh.elems[e].corners;

    Eigen::Matrix<double, 8, 1> u_e;
    Eigen::Vector4d phi_e, dphi_e;
    int gd[12];
    for (int k = 0; k < 4; ++k) {
      gd[2 * k] = DofMap::udof(c[k], 0);
      gd[2 * k + 1] = DofMap::udof(c[k], 1);
      gd[8 + k] = dofs.pdof(c[k]);
      u_e[2 * k] = x[gd[2 * k]];
      u_e[2 * k + 1] = x[gd[2 * k + 1]];
      phi_e[k] = x[gd[8 + k]];
      dphi_e[k] = phi_e[k] - x_start[gd[8 + k]];
    }

    H_new[e] = element_history(mesh, e, mat, u_e, H_start[e]);
    const ElementSystem es = element_system(mesh, e, mat, u_e, phi_e, dphi_e, H_new[e]);

    Eigen::Matrix<double, 12, 12> K;
    K.block<8, 8>(0, 0) = es.Kuu;
    K.block<8, 4>(0, 8) = es.Kup;
    K.block<4, 8>(8, 0) = es.Kpu;
    K.block<4, 4>(8, 8) = es.Kpp;
    Eigen::Matrix<double, 12, 1> f;
    f.head<8>() = es.fu;
    f.tail<4>() = es.fp;

    for (int i = 0; i < 12; ++i) {
      out.f_full[gd[i]] += f[i];
      for (const MasterTerm& ri : dofs.row_terms[gd[i]]) {
        for (int j = 0; j < 12; ++j) {
          const double kij = K(i, j);
          for (const MasterTerm& cj : dofs.row_terms[gd[j]]) {
            out.trips.emplace_back(ri.col, cj.col, ri.w * cj.w * kij);
          }
          if (bordered) {
            const double ue = dofs.uhat_eff[gd[j]];
            if (ue != 0.0) out.trips.emplace_back(ri.col, lam_idx, ri.w * kij * ue);
          }
        }
      }
    }
    if (bordered) {
      for (int j = 0; j < 4; ++j) {
        for (const MasterTerm& cj : dofs.row_terms[gd[8 + j]]) {
          out.trips.emplace_back(lam_idx, cj.col, cj.w * es.arc_row[j]);
        }
      }
    }
    out.dG += es.dG;
  }
}

}  // namespace

GlobalSystem assemble_global(const HierMesh& mesh, const DofMap& dofs,
                             const MaterialParams& mat,
                             const Eigen::VectorXd& x,
                             const Eigen::VectorXd& x_start,
                             const std::vector<std::array<double, 4>>& H_start,
                             bool bordered, double dtau, int threads) {
  if (H_start.size() != mesh.elems.size()) {
    throw std::invalid_argument("assemble: history size does not match mesh");
  }
  GlobalSystem sys;
  sys.bordered = bordered;
  sys.H_new = H_start;

  const std::vector<int> active = mesh.active_elems();
  const int nt = std::max(1, std::min<int>(threads, static_cast<int>(active.size())));
  std::vector<Chunk> chunks(nt);

  auto work = [&](int t) {
    const std::size_t lo = active.size() * t / nt;
    const std::size_t hi = active.size() * (t + 1) / nt;
    try {
      assemble_range(mesh, dofs, mat, x, x_start, H_start, bordered, active, lo,
                     hi, sys.H_new, chunks[t]);
    } catch (...) {
      chunks[t].error = std::current_exception();
    }
  };
  if (nt == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t) pool.emplace_back(work, t);
    for (std::thread& th : pool) th.join();
  }

  // Merge in chunk order so the result is independent of scheduling.
  sys.f_full = Eigen::VectorXd::Zero(dofs.n_total);
  std::vector<Eigen::Triplet<double>> trips;
  std::size_t total = 0;
  for (const Chunk& ch : chunks) total += ch.trips.size();
  trips.reserve(total);
  for (Chunk& ch : chunks) {
    if (ch.error) std::rethrow_exception(ch.error);
    trips.insert(trips.end(), ch.trips.begin(), ch.trips.end());
    sys.f_full += ch.f_full;
    sys.dG += ch.dG;
  }

  const int n = dofs.n_free + (bordered ? 1 : 0);
  sys.A.resize(n, n);
  sys.A.setFromTriplets(trips.begin(), trips.end());
  sys.rhs = Eigen::VectorXd::Zero(n);
  sys.rhs.head(dofs.n_free) = -dofs.condense(sys.f_full);
  sys.field_res = sys.rhs.head(dofs.n_free).norm();
  if (bordered) sys.rhs[dofs.n_free] = -(sys.dG - dtau);
  return sys;
}

double reaction_load(const DofMap& dofs, const Eigen::VectorXd& f_full) {
  return Eigen::Map<const Eigen::VectorXd>(dofs.uhat_eff.data(), dofs.n_total)
      .dot(f_full);
}

}  // namespace pff
