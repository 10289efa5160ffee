#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>

namespace qhfilt {

/// Closed-form static potentials of a flat triangle T at a point r:
///   i1  = integral over T of 1/R dS'
///   irho = integral over T of (r' - rho)/R dS'
/// where rho is the projection of r onto the triangle plane. Standard
/// edge-wise formulas (Wilton et al. 1984 for i1; the surface divergence
/// theorem reduces irho to edge antiderivatives of R).
struct TrianglePotentials {
  double i1 = 0.0;
  Eigen::Vector3d irho = Eigen::Vector3d::Zero();
  Eigen::Vector3d rho = Eigen::Vector3d::Zero();
};

inline TrianglePotentials trianglePotentials(
    const std::array<Eigen::Vector3d, 3>& q, const Eigen::Vector3d& r) {
  using Eigen::Vector3d;
  TrianglePotentials out;
  Vector3d n = (q[1] - q[0]).cross(q[2] - q[0]);
  double two_area = n.norm();
  n /= two_area;
  double w = (r - q[0]).dot(n);
  out.rho = r - w * n;

  double edge_scale = std::max({(q[1] - q[0]).norm(), (q[2] - q[1]).norm(),
                                (q[0] - q[2]).norm()});
  double tiny = 1e-14 * edge_scale;

  double sum_tf = 0.0, sum_beta = 0.0;
  Vector3d sum_edge = Vector3d::Zero();
  for (int i = 0; i < 3; ++i) {
    const Vector3d& a = q[i];
    const Vector3d& b = q[(i + 1) % 3];
    Vector3d s_hat = (b - a).normalized();
    Vector3d m_hat = s_hat.cross(n);  // outward in-plane edge normal
    double lm = (a - out.rho).dot(s_hat);
    double lp = (b - out.rho).dot(s_hat);
    double t = (a - out.rho).dot(m_hat);
    double r0sq = t * t + w * w;
    double rm = std::sqrt(lm * lm + r0sq);
    double rp = std::sqrt(lp * lp + r0sq);

    double f;
    if (r0sq < tiny * tiny && lm * lp >= 0.0) {
      // observation on the edge line but outside the segment; the t*f and
      // r0sq*f products vanish in the limit
      f = 0.0;
    } else if (lm >= 0.0) {
      f = std::log((rp + lp) / (rm + lm));
    } else if (lp <= 0.0) {
      f = std::log((rm - lm) / (rp - lp));
    } else {
      f = std::log((rp + lp) * (rm - lm) / r0sq);
    }

    sum_tf += t * f;
    sum_edge += m_hat * (r0sq * f + lp * rp - lm * rm);
    if (std::abs(w) > 0.0)
      sum_beta += std::atan2(t * lp, r0sq + std::abs(w) * rp) -
                  std::atan2(t * lm, r0sq + std::abs(w) * rm);
  }
  out.i1 = sum_tf - std::abs(w) * sum_beta;
  out.irho = 0.5 * sum_edge;
  return out;
}

}  // namespace qhfilt
