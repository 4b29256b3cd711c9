/**
 * @file material.cpp
 * @brief Isotropic elasticity, degradation functions and energy splits.
 */

#include "pff/material.hpp"

#include <cmath>

namespace pff {

DegradationValue degradation(const MaterialParams& mat, double phi) {
  const double q = 1.0 - phi;
  DegradationValue out;
  switch (mat.degradation) {
    case Degradation::quadratic:
      out.g = q * q;
      out.dg = -2.0 * q;
      out.ddg = 2.0;
      break;
    case Degradation::cubic: {
      const double s = mat.cubic_s;
      out.g = s * (q * q * q - q * q) + 3.0 * q * q - 2.0 * q * q * q;
      // One sign flip per phi-derivative of q.
      out.dg = -(s * (3.0 * q * q - 2.0 * q) + 6.0 * q - 6.0 * q * q);
      out.ddg = s * (6.0 * q - 2.0) + 6.0 - 12.0 * q;
      break;
    }
    case Degradation::rational: {
      const double p = mat.rat_p;
      const double a1 = mat.rat_a1, a2 = mat.rat_a2, a3 = mat.rat_a3;
      const double n = std::pow(q, p);
      const double dn = -p * std::pow(q, p - 1.0);
      const double ddn = p * (p - 1.0) * std::pow(q, p - 2.0);
      const double den = n + a1 * phi + a1 * a2 * phi * phi +
                         a1 * a2 * a3 * phi * phi * phi;
      const double dden = dn + a1 + 2.0 * a1 * a2 * phi +
                          3.0 * a1 * a2 * a3 * phi * phi;
      const double ddden = ddn + 2.0 * a1 * a2 + 6.0 * a1 * a2 * a3 * phi;
      out.g = n / den;
      out.dg = (dn * den - n * dden) / (den * den);
      out.ddg = (ddn - 2.0 * out.dg * dden - out.g * ddden) / den;
      break;
    }
  }
  return out;
}

DissipationValue dissipation(double phi) { return {phi * phi, 2.0 * phi, 2.0}; }

namespace {

// In-plane principal values and direction of a symmetric 2x2 tensor given
// as (xx, yy, xy). Returns (v1, v2, cos t, sin t) with v1 >= v2.
struct Principal {
  double v1, v2, c, s;
};

Principal principal2d(double xx, double yy, double xy) {
  const double mean = 0.5 * (xx + yy);
  const double dev = 0.5 * (xx - yy);
  const double r = std::hypot(dev, xy);
  const double t = 0.5 * std::atan2(2.0 * xy, xx - yy);
  return {mean + r, mean - r, std::cos(t), std::sin(t)};
}

double macaulay(double v) { return v > 0.0 ? v : 0.0; }

double rankine_psi(const MaterialParams& mat, const Eigen::Matrix3d& C,
                   const Eigen::Vector3d& eps) {
  const Eigen::Vector3d sig = C * eps;
  const Principal p = principal2d(sig[0], sig[1], sig[2]);
  const double s1 = macaulay(p.v1);
  return 0.5 * s1 * s1 / mat.youngs();
}

}  // namespace

SplitValue split_energy(const MaterialParams& mat, const Eigen::Vector3d& eps) {
  const double lam = mat.lambda, mu = mat.mu;
  SplitValue out;
  out.C << lam + 2.0 * mu, lam, 0.0,
           lam, lam + 2.0 * mu, 0.0,
           0.0, 0.0, mu;
  out.sigma = out.C * eps;
  const double tr = eps[0] + eps[1];
  const double exy = 0.5 * eps[2];
  out.psi_total = 0.5 * lam * tr * tr +
                  mu * (eps[0] * eps[0] + eps[1] * eps[1] + 2.0 * exy * exy);

  switch (mat.split) {
    case Split::none:
      out.psi_f = out.psi_total;
      out.psi_r = 0.0;
      out.dpsi_f = out.sigma;
      break;

    case Split::spectral: {
      const Principal p = principal2d(eps[0], eps[1], exy);
      const double trp = macaulay(tr), trm = tr - trp;
      const double e1p = macaulay(p.v1), e2p = macaulay(p.v2);
      const double e1m = p.v1 - e1p, e2m = p.v2 - e2p;
      out.psi_f = 0.5 * lam * trp * trp + mu * (e1p * e1p + e2p * e2p);
      out.psi_r = 0.5 * lam * trm * trm + mu * (e1m * e1m + e2m * e2m);
      // eps_plus = <v1> n1 n1^T + <v2> n2 n2^T with n2 = (-s, c).
      const double pxx = e1p * p.c * p.c + e2p * p.s * p.s;
      const double pyy = e1p * p.s * p.s + e2p * p.c * p.c;
      const double pxy = (e1p - e2p) * p.c * p.s;
      const double dtr = tr > 0.0 ? 1.0 : 0.0;
      out.dpsi_f[0] = lam * trp * dtr + 2.0 * mu * pxx;
      out.dpsi_f[1] = lam * trp * dtr + 2.0 * mu * pyy;
      out.dpsi_f[2] = 2.0 * mu * pxy;  // conjugate to gamma = 2 eps_xy
      break;
    }

    case Split::rankine: {
      const Principal p = principal2d(out.sigma[0], out.sigma[1], out.sigma[2]);
      const double s1 = macaulay(p.v1);
      const double E = mat.youngs();
      out.psi_f = 0.5 * s1 * s1 / E;
      out.psi_r = 0.0;  // unused by the hybrid scheme
      if (s1 == 0.0) {
        out.dpsi_f.setZero();
      } else if (p.v1 - p.v2 >
                 1e-12 * std::max(1.0, std::abs(p.v1) + std::abs(p.v2))) {
        const Eigen::Vector3d m(p.c * p.c, p.s * p.s, 2.0 * p.c * p.s);
        out.dpsi_f = (s1 / E) * (out.C * m);
      } else {
        // Equal principal stresses: the direction is ambiguous, fall back
        // to central differences of the value.
        const double h = 1e-8 * eps.norm();
        for (int k = 0; k < 3; ++k) {
          Eigen::Vector3d ep = eps, em = eps;
          ep[k] += h;
          em[k] -= h;
          out.dpsi_f[k] =
              (rankine_psi(mat, out.C, ep) - rankine_psi(mat, out.C, em)) /
              (2.0 * h);
        }
      }
      break;
    }
  }
  return out;
}

}  // namespace pff
