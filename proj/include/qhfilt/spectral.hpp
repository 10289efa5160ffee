#pragma once

#include <Eigen/Dense>
#include <limits>
#include <string>
#include <vector>

#include "qhfilt/errors.hpp"

namespace qhfilt {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Relative spectral window [eps_low, eps_high) * lambda_max. eps_high may
/// be unbounded, in which case the top eigenvalue itself is retained.
struct SpectralWindow {
  double eps_low = 0.0;
  double eps_high = std::numeric_limits<double>::infinity();

  static SpectralWindow unbounded(double eps_low = 0.0) {
    return SpectralWindow{eps_low, std::numeric_limits<double>::infinity()};
  }
  static SpectralWindow band(double eps_low, double eps_high) {
    return SpectralWindow{eps_low, eps_high};
  }

  bool isUnbounded() const { return !std::isfinite(eps_high); }

  void validate() const {
    if (!(eps_low >= 0.0) || !(eps_low < eps_high))
      throw InvalidArgument("spectral window requires 0 <= eps_low < eps_high");
  }

  /// Membership test for an eigenvalue of a matrix with top eigenvalue
  /// lambda_max. Thresholds carry a 1e-12 relative guard so that an
  /// eigenvalue computed as lambda_max*(1 - eps_mach) still lands in the
  /// top band; the guard shifts every band edge identically, so the
  /// half-open bands still partition the spectrum.
  bool contains(double lambda, double lambda_max) const {
    constexpr double guard = 1e-12;
    double lo = eps_low * lambda_max * (1.0 - guard);
    if (lambda < lo) return false;
    if (isUnbounded()) return true;
    double hi = eps_high * lambda_max * (1.0 - guard);
    return lambda < hi;
  }
};

/// Full spectral decomposition of a symmetric positive semidefinite matrix,
/// eigenvalues sorted nonincreasing.
struct LaplacianEigen {
  VectorXd eigenvalues;   ///< nonincreasing, nonnegative up to roundoff
  MatrixXd eigenvectors;  ///< orthonormal columns, matching order
  std::string source;     ///< provenance tag ("vertex-graph", "cell-metric", ...)

  double lambdaMax() const {
    return eigenvalues.size() ? eigenvalues(0) : 0.0;
  }

  /// Eigenvalues at or below this threshold are exact-nullspace candidates
  /// and are never pseudo-inverted.
  double nullTolerance() const {
    return 1e-12 * lambdaMax() * static_cast<double>(eigenvalues.size());
  }
};

/// Dense symmetric eigendecomposition with nonincreasing ordering.
/// Throws SymmetryError if L deviates from symmetry by more than 1e-12
/// relative.
inline LaplacianEigen laplacianEigen(const MatrixXd& L,
                                     std::string source = "generic") {
  if (L.rows() != L.cols()) throw SymmetryError("matrix is not square");
  double scale = L.cwiseAbs().maxCoeff();
  double asym = (L - L.transpose()).cwiseAbs().maxCoeff();
  if (scale > 0.0 && asym > 1e-12 * scale)
    throw SymmetryError("matrix asymmetry " + std::to_string(asym / scale) +
                        " exceeds 1e-12 relative");

  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (L + L.transpose()));
  if (es.info() != Eigen::Success)
    throw Error("symmetric eigendecomposition failed");

  LaplacianEigen out;
  out.source = std::move(source);
  out.eigenvalues = es.eigenvalues().reverse();
  out.eigenvectors = es.eigenvectors().rowwise().reverse();
  return out;
}

/// Spectrally filtered pseudoinverse sum_{i in window} v_i v_i^T / lambda_i,
/// stored in factored form. Exact-nullspace eigenvalues are never retained.
struct FilteredPinv {
  MatrixXd basis;        ///< retained eigenvectors (N x r)
  VectorXd inv_values;   ///< 1 / lambda_i for the retained eigenpairs
  bool empty_window = false;  ///< warning flag: no eigenpair matched

  Eigen::Index rank() const { return basis.cols(); }

  VectorXd apply(const VectorXd& x) const {
    if (rank() == 0) return VectorXd::Zero(basis.rows());
    return basis * inv_values.cwiseProduct(basis.transpose() * x).matrix();
  }

  MatrixXd dense() const {
    if (rank() == 0) return MatrixXd::Zero(basis.rows(), basis.rows());
    return basis * inv_values.asDiagonal() * basis.transpose();
  }
};

/// Indices of the eigenpairs retained by the window, nullspace excluded.
inline std::vector<int> windowIndices(const LaplacianEigen& eig,
                                      const SpectralWindow& window) {
  window.validate();
  std::vector<int> idx;
  double lmax = eig.lambdaMax();
  double null_tol = eig.nullTolerance();
  for (int i = 0; i < eig.eigenvalues.size(); ++i) {
    double l = eig.eigenvalues(i);
    if (l <= null_tol) continue;
    if (window.contains(l, lmax)) idx.push_back(i);
  }
  return idx;
}

inline FilteredPinv filteredPinv(const LaplacianEigen& eig,
                                 const SpectralWindow& window) {
  auto idx = windowIndices(eig, window);
  FilteredPinv out;
  Eigen::Index n = eig.eigenvectors.rows();
  out.basis.resize(n, static_cast<Eigen::Index>(idx.size()));
  out.inv_values.resize(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) {
    out.basis.col(static_cast<Eigen::Index>(j)) = eig.eigenvectors.col(idx[j]);
    out.inv_values(static_cast<Eigen::Index>(j)) = 1.0 / eig.eigenvalues(idx[j]);
  }
  out.empty_window = idx.empty();
  return out;
}

}  // namespace qhfilt
