#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "qhfilt/incidence.hpp"
#include "qhfilt/spectral.hpp"

namespace qhfilt {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

enum class IncidenceKind { Loop, Star };  // Lambda / Sigma

/// Symmetric idempotent operator P = U U^T stored through its orthonormal
/// column basis U. Factored storage keeps idempotency exact by construction
/// and application O(N r).
struct ProjectorOperator {
  MatrixXd basis;          ///< N x r, orthonormal columns
  std::string space;       ///< metric tag: "primal", "primal:G", "dual:Gd"
  std::string provenance;  ///< e.g. "Lambda", "Sigma", "harmonic", "W_Lambda[2]"
  SpectralWindow window = SpectralWindow::unbounded();
  int band_index = -1;     ///< wavelet band index j, or -1
  bool empty_window = false;

  Eigen::Index size() const { return basis.rows(); }
  Eigen::Index rank() const { return basis.cols(); }

  VectorXd apply(const VectorXd& x) const {
    if (rank() == 0) return VectorXd::Zero(size());
    return basis * (basis.transpose() * x);
  }

  VectorXcd apply(const VectorXcd& x) const {
    if (rank() == 0) return VectorXcd::Zero(size());
    VectorXd re = apply(VectorXd(x.real()));
    VectorXd im = apply(VectorXd(x.imag()));
    return re + std::complex<double>(0, 1) * im;
  }

  MatrixXd dense() const {
    if (rank() == 0) return MatrixXd::Zero(size(), size());
    return basis * basis.transpose();
  }
};

/// Symmetric square root and inverse square root of an SPD metric.
struct MetricRoot {
  MatrixXd sqrt;
  MatrixXd inv_sqrt;
};

inline MetricRoot metricRoot(const MatrixXd& G) {
  if (G.rows() != G.cols()) throw MetricError("metric is not square");
  double scale = G.cwiseAbs().maxCoeff();
  if ((G - G.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw MetricError("metric is not symmetric within 1e-12 relative");
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (G + G.transpose()));
  if (es.info() != Eigen::Success)
    throw MetricError("metric eigendecomposition failed");
  const VectorXd& d = es.eigenvalues();
  if (d.minCoeff() <= 1e-12 * d.maxCoeff())
    throw MetricError("metric is not positive definite within tolerance");
  VectorXd rt = d.cwiseSqrt();
  MetricRoot out;
  out.sqrt = es.eigenvectors() * rt.asDiagonal() * es.eigenvectors().transpose();
  out.inv_sqrt = es.eigenvectors() * rt.cwiseInverse().asDiagonal() *
                 es.eigenvectors().transpose();
  return out;
}

namespace detail {

inline MatrixXd thinQ(const MatrixXd& A) {
  if (A.cols() == 0) return A;
  Eigen::HouseholderQR<MatrixXd> qr(A);
  return qr.householderQ() * MatrixXd::Identity(A.rows(), A.cols());
}

/// Orthogonal projector onto span{ M v_i : i in window } where the v_i are
/// eigenvectors of M^T M. In exact arithmetic M v_i / sqrt(lambda_i) is
/// already an orthonormal family; a final QR mops up roundoff.
inline ProjectorOperator projectorFromFactor(const MatrixXd& M,
                                             const LaplacianEigen& eig,
                                             const SpectralWindow& window,
                                             std::string space,
                                             std::string provenance,
                                             int band_index = -1) {
  auto idx = windowIndices(eig, window);
  MatrixXd scaled(M.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j)
    scaled.col(static_cast<Eigen::Index>(j)) =
        M * eig.eigenvectors.col(idx[j]) / std::sqrt(eig.eigenvalues(idx[j]));
  ProjectorOperator p;
  p.basis = thinQ(scaled);
  p.space = std::move(space);
  p.provenance = std::move(provenance);
  p.window = window;
  p.band_index = band_index;
  p.empty_window = idx.empty();
  return p;
}

/// Mapping factor M and reduced Laplacian M^T M for one projector family.
/// Primal: M = sqrt(G) Lambda A or sqrt(G^-1) Sigma B (Eqs. 2-3).
/// Dual:   M = sqrt(Gd^-1) Lambda C or sqrt(Gd) Sigma D (Eqs. 4-5).
inline MatrixXd projectorFactor(IncidenceKind kind, const IncidencePair& pair,
                                bool dual, const MatrixXd* metric,
                                const MatrixXd* reduction) {
  const SparseD& S = kind == IncidenceKind::Loop ? pair.Lambda : pair.Sigma;
  MatrixXd M = reduction ? MatrixXd(S * (*reduction)) : MatrixXd(S);
  if (metric) {
    MetricRoot root = metricRoot(*metric);
    bool use_sqrt = (kind == IncidenceKind::Loop) != dual;
    M = (use_sqrt ? root.sqrt : root.inv_sqrt) * M;
  }
  return M;
}

inline std::string spaceTag(bool dual, bool has_metric) {
  if (dual) return has_metric ? "dual:Gd" : "dual";
  return has_metric ? "primal:G" : "primal";
}

inline const char* kindName(IncidenceKind kind) {
  return kind == IncidenceKind::Loop ? "Lambda" : "Sigma";
}

}  // namespace detail

/// Filtered quasi-Helmholtz projector (Eq. 2 for Lambda, Eq. 3 for Sigma)
/// acting on the normalized (sqrt(G)-scaled) coefficient space. Both metric
/// and reduction default to the identity.
inline ProjectorOperator buildFilteredProjector(
    IncidenceKind kind, const IncidencePair& pair, const SpectralWindow& window,
    const MatrixXd* metric = nullptr, const MatrixXd* reduction = nullptr) {
  MatrixXd M = detail::projectorFactor(kind, pair, false, metric, reduction);
  LaplacianEigen eig = laplacianEigen(
      MatrixXd(M.transpose() * M),
      std::string(detail::kindName(kind)) + "-reduced");
  return detail::projectorFromFactor(M, eig, window,
                                     detail::spaceTag(false, metric != nullptr),
                                     detail::kindName(kind));
}

/// Dual-space filtered projectors (Eqs. 4-5) for operators discretized with
/// dual (BC/CW) functions; the caller supplies the dual Gram G_d.
inline ProjectorOperator buildDualFilteredProjector(
    IncidenceKind kind, const IncidencePair& pair, const SpectralWindow& window,
    const MatrixXd* dual_metric = nullptr, const MatrixXd* reduction = nullptr) {
  MatrixXd M = detail::projectorFactor(kind, pair, true, dual_metric, reduction);
  LaplacianEigen eig = laplacianEigen(
      MatrixXd(M.transpose() * M),
      std::string(detail::kindName(kind)) + "-dual-reduced");
  return detail::projectorFromFactor(
      M, eig, window, detail::spaceTag(true, dual_metric != nullptr),
      std::string("dual ") + detail::kindName(kind));
}

/// Harmonic complement P^H = I - P^Sigma - P^Lambda, re-orthonormalized.
/// Both inputs must be eps=0 projectors on the same space; the rank must be
/// even and equal to N - rank(P^Lambda) - rank(P^Sigma) = 2 * genus.
inline ProjectorOperator harmonicProjector(const ProjectorOperator& p_lambda,
                                           const ProjectorOperator& p_sigma) {
  if (p_lambda.size() != p_sigma.size())
    throw InvalidArgument("harmonicProjector: operand sizes differ");
  if (p_lambda.space != p_sigma.space)
    throw InvalidArgument("harmonicProjector: operands live on different spaces");
  for (const auto* p : {&p_lambda, &p_sigma})
    if (p->window.eps_low != 0.0 || !p->window.isUnbounded())
      throw InvalidArgument("harmonicProjector requires eps=0 projectors");

  Eigen::Index n = p_lambda.size();
  MatrixXd H = MatrixXd::Identity(n, n) - p_lambda.dense() - p_sigma.dense();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (H + H.transpose()));
  Eigen::Index expected = n - p_lambda.rank() - p_sigma.rank();

  // eigenvalues cluster at 0 and 1; count the unit cluster
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < n; ++i)
    if (es.eigenvalues()(i) > 0.5) keep.push_back(i);

  if (expected < 0 || expected % 2 != 0 ||
      static_cast<Eigen::Index>(keep.size()) != expected)
    throw RankError("harmonic projector rank " + std::to_string(keep.size()) +
                    " does not equal 2*genus = " + std::to_string(expected));

  ProjectorOperator p;
  p.basis.resize(n, expected);
  for (std::size_t j = 0; j < keep.size(); ++j)
    p.basis.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(keep[j]);
  p.basis = detail::thinQ(p.basis);
  p.space = p_lambda.space;
  p.provenance = "harmonic";
  return p;
}

/// Projector onto the direct sum of two orthogonal projector ranges
/// (used to fold the harmonic part into the loop projector).
inline ProjectorOperator combineProjectors(const ProjectorOperator& a,
                                           const ProjectorOperator& b) {
  if (a.size() != b.size() || a.space != b.space)
    throw InvalidArgument("combineProjectors: incompatible operands");
  ProjectorOperator p;
  p.basis.resize(a.size(), a.rank() + b.rank());
  p.basis << a.basis, b.basis;
  p.basis = detail::thinQ(p.basis);
  p.space = a.space;
  p.provenance = a.provenance + "+" + b.provenance;
  p.window = a.window;
  return p;
}

/// Half-open wavelet band window: j = 0 keeps the top eigenvalue subspace,
/// j >= 1 keeps [2^-j, 2^-j+1) * lambda_max.
inline SpectralWindow waveletWindow(int j) {
  if (j < 0) throw InvalidArgument("wavelet band index must be >= 0");
  if (j == 0) return SpectralWindow::unbounded(1.0);
  return SpectralWindow::band(std::ldexp(1.0, -j), std::ldexp(1.0, -j + 1));
}

/// Single wavelet band projector W_j. Equivalent to the difference of the
/// nested filtered projectors but built directly from one window.
inline ProjectorOperator waveletBand(IncidenceKind kind,
                                     const IncidencePair& pair, int j,
                                     const MatrixXd* metric = nullptr) {
  MatrixXd M = detail::projectorFactor(kind, pair, false, metric, nullptr);
  LaplacianEigen eig = laplacianEigen(
      MatrixXd(M.transpose() * M),
      std::string(detail::kindName(kind)) + "-reduced");
  return detail::projectorFromFactor(
      M, eig, waveletWindow(j), detail::spaceTag(false, metric != nullptr),
      std::string("W_") + detail::kindName(kind) + "[" + std::to_string(j) + "]",
      j);
}

/// Band count L = ceil(log2(min(N_Lambda, N_Sigma))) with
/// N_Lambda = N_v - 1 + 2g and N_Sigma = N_c - 1.
inline int waveletBandCount(const IncidencePair& pair) {
  int n_lambda = pair.num_vertices - 1 + 2 * pair.genus;
  int n_sigma = pair.num_cells - 1;
  double m = static_cast<double>(std::min(n_lambda, n_sigma));
  return static_cast<int>(std::ceil(std::log2(m)));
}

/// Ordered bands j = 0..L plus one terminal band [0, 2^-L) so the family
/// resolves the identity on the nonzero spectrum. Zero-rank bands are kept
/// as placeholders. All bands share one eigendecomposition, which makes the
/// half-open windows an exact partition.
inline std::vector<ProjectorOperator> waveletFamily(
    IncidenceKind kind, const IncidencePair& pair,
    const MatrixXd* metric = nullptr, int band_count_override = -1) {
  int L = band_count_override >= 0 ? band_count_override
                                   : waveletBandCount(pair);
  MatrixXd M = detail::projectorFactor(kind, pair, false, metric, nullptr);
  LaplacianEigen eig = laplacianEigen(
      MatrixXd(M.transpose() * M),
      std::string(detail::kindName(kind)) + "-reduced");
  std::string space = detail::spaceTag(false, metric != nullptr);

  std::vector<ProjectorOperator> bands;
  bands.reserve(static_cast<std::size_t>(L) + 2);
  for (int j = 0; j <= L; ++j)
    bands.push_back(detail::projectorFromFactor(
        M, eig, waveletWindow(j), space,
        std::string("W_") + detail::kindName(kind) + "[" + std::to_string(j) +
            "]",
        j));
  SpectralWindow tail = SpectralWindow::band(0.0, std::ldexp(1.0, -L));
  bands.push_back(detail::projectorFromFactor(
      M, eig, tail, space,
      std::string("W_") + detail::kindName(kind) + "[tail]", L + 1));
  return bands;
}

}  // namespace qhfilt
