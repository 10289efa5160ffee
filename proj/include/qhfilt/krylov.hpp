#pragma once

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>

#include "qhfilt/errors.hpp"

namespace qhfilt {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using LinearOperator = std::function<VectorXcd(const VectorXcd&)>;

struct SolveReport {
  int iterations = 0;
  double residual = 0.0;  ///< final true relative residual
  double seconds = 0.0;
  double cond_before = std::numeric_limits<double>::quiet_NaN();
  double cond_after = std::numeric_limits<double>::quiet_NaN();
  bool converged = false;
};

/// Restarted GMRES with modified Gram-Schmidt Arnoldi and Givens rotations.
/// Returns the first iterate with ||Ax - b|| <= tol ||b||; on NoConvergence
/// the best iterate is returned with report.converged = false. Deterministic
/// for fixed inputs and restart length.
inline std::pair<VectorXcd, SolveReport> krylovSolve(
    const LinearOperator& apply, const VectorXcd& b, double tol = 1e-6,
    int max_iter = 2000, int restart = 50) {
  using complexd = std::complex<double>;
  auto t0 = std::chrono::steady_clock::now();
  SolveReport rep;
  const Eigen::Index n = b.size();
  VectorXcd x = VectorXcd::Zero(n);
  double bnorm = b.norm();
  if (bnorm == 0.0) {
    rep.converged = true;
    rep.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0).count();
    return {x, rep};
  }

  int total = 0;
  while (total < max_iter) {
    VectorXcd r = b - apply(x);
    double beta = r.norm();
    if (beta <= tol * bnorm) {
      rep.converged = true;
      break;
    }
    int m = std::min(restart, max_iter - total);
    MatrixXcd V(n, m + 1);
    MatrixXcd H = MatrixXcd::Zero(m + 1, m);
    VectorXcd cs(m), sn(m), g = VectorXcd::Zero(m + 1);
    V.col(0) = r / beta;
    g(0) = beta;

    int j = 0;
    for (; j < m; ++j) {
      VectorXcd w = apply(V.col(j));
      ++total;
      for (int i = 0; i <= j; ++i) {
        H(i, j) = V.col(i).dot(w);  // conjugated inner product
        w -= H(i, j) * V.col(i);
      }
      H(j + 1, j) = w.norm();
      if (std::abs(H(j + 1, j)) > 0.0) V.col(j + 1) = w / H(j + 1, j);

      for (int i = 0; i < j; ++i) {
        complexd t = std::conj(cs(i)) * H(i, j) + std::conj(sn(i)) * H(i + 1, j);
        H(i + 1, j) = -sn(i) * H(i, j) + cs(i) * H(i + 1, j);
        H(i, j) = t;
      }
      double denom = std::hypot(std::abs(H(j, j)), std::abs(H(j + 1, j)));
      if (denom == 0.0) {
        cs(j) = 1.0;
        sn(j) = 0.0;
      } else {
        cs(j) = H(j, j) / denom;
        sn(j) = H(j + 1, j) / denom;
      }
      H(j, j) = std::conj(cs(j)) * H(j, j) + std::conj(sn(j)) * H(j + 1, j);
      H(j + 1, j) = 0.0;
      g(j + 1) = -sn(j) * g(j);
      g(j) = std::conj(cs(j)) * g(j);

      if (std::abs(g(j + 1)) <= tol * bnorm) {
        ++j;
        break;
      }
    }
    // back-substitution on the j x j triangular system
    VectorXcd y = VectorXcd::Zero(j);
    for (int i = j - 1; i >= 0; --i) {
      complexd s = g(i);
      for (int l = i + 1; l < j; ++l) s -= H(i, l) * y(l);
      y(i) = s / H(i, i);
    }
    x += V.leftCols(j) * y;

    if ((b - apply(x)).norm() <= tol * bnorm) {
      rep.converged = true;
      break;
    }
  }

  rep.iterations = total;
  rep.residual = (b - apply(x)).norm() / bnorm;
  rep.converged = rep.residual <= tol;
  rep.seconds = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0).count();
  return {x, rep};
}

}  // namespace qhfilt
