#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <memory>
#include <vector>

#include "qhfilt/errors.hpp"
#include "qhfilt/mesh.hpp"
#include "qhfilt/parallel.hpp"
#include "qhfilt/quadrature.hpp"
#include "qhfilt/triangle_potentials.hpp"

namespace qhfilt {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::Vector3cd;
using Eigen::VectorXcd;
using complexd = std::complex<double>;

/// Time-harmonic plane wave k_hat-traveling, p_hat-polarized.
struct PlaneWave {
  Vector3d direction;
  Vector3d polarization;
  double amplitude = 1.0;  // V/m
  double k = 1.0;          // rad/m

  PlaneWave(const Vector3d& dir, const Vector3d& pol, double amp, double k_)
      : direction(dir), polarization(pol), amplitude(amp), k(k_) {
    if (std::abs(direction.norm() - 1.0) > 1e-12 ||
        std::abs(polarization.norm() - 1.0) > 1e-12)
      throw InvalidArgument("plane wave direction/polarization must be unit");
    if (std::abs(direction.dot(polarization)) > 1e-12)
      throw InvalidArgument("plane wave polarization must be orthogonal to "
                            "the propagation direction");
    if (!(k > 0.0)) throw InvalidArgument("plane wave wavenumber must be > 0");
  }

  Vector3cd field(const Vector3d& r) const {
    complexd phase = std::exp(complexd(0.0, k * direction.dot(r)));
    return amplitude * phase * polarization.cast<complexd>();
  }
};

/// Discretized EFIE: vector-potential block Ts, scalar-potential block Th,
/// T = Ts + Th symmetric (complex-symmetric, not Hermitian).
struct EfieSystem {
  double k = 0.0;
  MatrixXcd Ts;
  MatrixXcd Th;
  std::shared_ptr<const TriangleMesh> mesh;

  MatrixXcd T() const { return Ts + Th; }
  Eigen::Index size() const { return Ts.rows(); }
};

namespace detail {

/// Per-cell RWG bookkeeping: the three edges of the cell with their RWG
/// signs (+1 when the cell is the plus cell) and opposite (free) vertices.
/// The edge-length factor is deliberately absent from the basis definition,
/// f_e|_c = sign * (r - p) / (2 A_c), so that the {-1,0,1} loop combinations
/// are exactly divergence-free and loop functions are exactly the surface
/// curls of vertex hat functions.
struct CellBasis {
  std::array<Vector3d, 3> v;     // cell vertices
  std::array<int, 3> edge;       // global edge ids
  std::array<double, 3> sign;
  std::array<Vector3d, 3> free_vertex;
  std::array<int, 3> vidx;       // global vertex ids for adjacency tests
  double area = 0.0;
  Vector3d centroid;
  int n_edges = 0;
};

inline std::vector<CellBasis> buildCellBases(const TriangleMesh& mesh) {
  std::vector<CellBasis> cells(mesh.numCells());
  for (int c = 0; c < mesh.numCells(); ++c) {
    const auto& t = mesh.triangles()[c];
    auto& cb = cells[c];
    for (int i = 0; i < 3; ++i) {
      cb.v[i] = mesh.vertices()[t[i]];
      cb.vidx[i] = t[i];
    }
    cb.area = mesh.cellArea(c);
    cb.centroid = mesh.cellCentroid(c);
  }
  for (int e = 0; e < mesh.numEdges(); ++e) {
    const auto& ed = mesh.edges()[e];
    for (auto [c, s] : {std::pair{ed.plus_cell, 1.0},
                        std::pair{ed.minus_cell, -1.0}}) {
      auto& cb = cells[c];
      const auto& t = mesh.triangles()[c];
      int opp = -1;
      for (int i = 0; i < 3; ++i)
        if (t[i] != ed.a && t[i] != ed.b) opp = t[i];
      int slot = cb.n_edges++;
      cb.edge[slot] = e;
      cb.sign[slot] = s;
      cb.free_vertex[slot] = mesh.vertices()[opp];
    }
  }
  return cells;
}

inline int sharedVertices(const CellBasis& a, const CellBasis& b) {
  int n = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (a.vidx[i] == b.vidx[j]) ++n;
  return n;
}

/// Smooth kernel remainder (e^{ikR} - 1 - ikR) / (4 pi R); bounded with a
/// removable zero at R = 0.
inline complexd smoothKernel(double k, double R) {
  double kr = k * R;
  if (kr < 1e-4) {
    complexd ikr(0.0, kr);
    return k * ikr * (0.5 + ikr / 6.0 + ikr * ikr / 24.0) / (4.0 * M_PI);
  }
  double c = -2.0 * std::sin(0.5 * kr) * std::sin(0.5 * kr);
  return complexd(c, std::sin(kr) - kr) / (4.0 * M_PI * R);
}

inline complexd helmholtzKernel(double k, double R) {
  return std::exp(complexd(0.0, k * R)) / (4.0 * M_PI * R);
}

struct PairBlock {
  // scalar double integrals I_h = dbl-int K, and vector moments so that
  // dbl-int K (x - p)·(y - q) = mxy - mx·q - p·my + i_h p·q
  complexd i_h{0.0, 0.0};
  complexd mxy{0.0, 0.0};
  Vector3cd mx = Vector3cd::Zero();
  Vector3cd my = Vector3cd::Zero();

  void accumulate(complexd kval, const Vector3d& x, const Vector3d& y) {
    i_h += kval;
    mxy += kval * x.dot(y);
    mx += kval * x.cast<complexd>();
    my += kval * y.cast<complexd>();
  }

  complexd vectorMoment(const Vector3d& p, const Vector3d& q) const {
    return mxy - mx.dot(q.cast<complexd>()) - my.dot(p.cast<complexd>()) +
           i_h * p.dot(q);
  }
};

/// Physical quadrature points and area-weighted weights for one cell.
struct CellQuad {
  std::vector<Vector3d> x;
  std::vector<double> w;
};

inline CellQuad cellQuad(const CellBasis& c, const TriQuadRule& rule) {
  CellQuad q;
  q.x.reserve(rule.size());
  q.w.reserve(rule.size());
  for (int i = 0; i < rule.size(); ++i) {
    const auto& b = rule.points[i];
    q.x.push_back(b[0] * c.v[0] + b[1] * c.v[1] + b[2] * c.v[2]);
    q.w.push_back(rule.weights[i] * c.area);
  }
  return q;
}

inline void regularPair(const CellBasis& c1, const CellBasis& c2, double k,
                        const TriQuadRule& rule, PairBlock& blk) {
  CellQuad q1 = cellQuad(c1, rule), q2 = cellQuad(c2, rule);
  for (std::size_t i = 0; i < q1.x.size(); ++i)
    for (std::size_t j = 0; j < q2.x.size(); ++j) {
      double R = (q1.x[i] - q2.x[j]).norm();
      blk.accumulate(q1.w[i] * q2.w[j] * helmholtzKernel(k, R), q1.x[i],
                     q2.x[j]);
    }
}

/// Touching pairs: extract 1/(4 pi R) (analytic inner integral, numerical
/// outer) and the constant ik/(4 pi) (closed form); the remainder is smooth
/// and integrated with the escalated regular rule.
inline void singularPair(const CellBasis& c1, const CellBasis& c2, double k,
                         const TriQuadRule& outer, const TriQuadRule& smooth,
                         PairBlock& blk) {
  const std::array<Vector3d, 3> tri2 = {c2.v[0], c2.v[1], c2.v[2]};
  CellQuad q1 = cellQuad(c1, outer);
  const double inv4pi = 1.0 / (4.0 * M_PI);
  for (std::size_t i = 0; i < q1.x.size(); ++i) {
    TrianglePotentials pot = trianglePotentials(tri2, q1.x[i]);
    double wi = q1.w[i] * inv4pi;
    // inner integrals: int 1/R = i1, int y/R = irho + rho * i1
    Vector3d int_y = pot.irho + pot.rho * pot.i1;
    blk.i_h += wi * pot.i1;
    blk.mxy += wi * q1.x[i].dot(int_y);
    blk.mx += (wi * pot.i1) * q1.x[i].cast<complexd>();
    blk.my += wi * int_y.cast<complexd>();
  }
  // constant kernel term ik/(4 pi): separable closed form
  complexd c0 = complexd(0.0, k) * inv4pi * c1.area * c2.area;
  blk.i_h += c0;
  blk.mxy += c0 * c1.centroid.dot(c2.centroid);
  blk.mx += c0 * c1.centroid.cast<complexd>();
  blk.my += c0 * c2.centroid.cast<complexd>();

  CellQuad s1 = cellQuad(c1, smooth), s2 = cellQuad(c2, smooth);
  for (std::size_t i = 0; i < s1.x.size(); ++i)
    for (std::size_t j = 0; j < s2.x.size(); ++j) {
      double R = (s1.x[i] - s2.x[j]).norm();
      blk.accumulate(s1.w[i] * s2.w[j] * smoothKernel(k, R), s1.x[i], s2.x[j]);
    }
}

}  // namespace detail

/// RWG Gram matrix int f_m . f_n dS, assembled with an exact quadratic rule.
/// SPD; Lambda^T G Lambda reproduces the piecewise-linear stiffness matrix.
inline MatrixXd assembleGram(const TriangleMesh& mesh) {
  auto cells = detail::buildCellBases(mesh);
  TriQuadRule rule = triangleRule(3);  // degree 2, exact for the integrand
  MatrixXd G = MatrixXd::Zero(mesh.numEdges(), mesh.numEdges());
  for (const auto& c : cells) {
    detail::CellQuad q = detail::cellQuad(c, rule);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double acc = 0.0;
        for (std::size_t t = 0; t < q.x.size(); ++t)
          acc += q.w[t] *
                 (q.x[t] - c.free_vertex[i]).dot(q.x[t] - c.free_vertex[j]);
        G(c.edge[i], c.edge[j]) +=
            c.sign[i] * c.sign[j] * acc / (4.0 * c.area * c.area);
      }
  }
  return G;
}

/// Galerkin EFIE assembly with RWG basis and rotated-RWG testing. Kernel
/// e^{ikR}/(4 pi R); Ts carries ik times the single-layer on currents, Th
/// carries 1/(ik) times the gradient/divergence term. Unordered cell pairs
/// are evaluated once and mirrored, so T is symmetric by construction.
inline EfieSystem assembleEfie(const TriangleMesh& mesh, double k,
                               const QuadratureRule& quad = {}) {
  quad.validate();
  if (!(k > 0.0)) throw LimitError("wavenumber must be positive");
  MeshStats stats = meshStats(mesh);
  if (k * stats.h_avg >= 1.0 && !quad.allow_large_kh)
    throw LimitError("k*h_avg = " + std::to_string(k * stats.h_avg) +
                     " >= 1; refine the mesh or set allow_large_kh");

  auto cells = detail::buildCellBases(mesh);
  const int nc = mesh.numCells();
  const int ne = mesh.numEdges();

  TriQuadRule interior = triangleRule(quad.interior_order);
  TriQuadRule escalated = triangleRule(std::max(2 * quad.interior_order, 12));
  TriQuadRule outer = triangleRule(quad.singular_outer);
  double near_gap = quad.near_factor * stats.h_avg;

  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(nc) * (nc + 1) / 2);
  for (int c1 = 0; c1 < nc; ++c1)
    for (int c2 = c1; c2 < nc; ++c2) pairs.emplace_back(c1, c2);

  EfieSystem sys;
  sys.k = k;
  sys.mesh = std::make_shared<TriangleMesh>(mesh);
  sys.Ts = MatrixXcd::Zero(ne, ne);
  sys.Th = MatrixXcd::Zero(ne, ne);

  const complexd ik(0.0, k);
  const complexd inv_ik = 1.0 / ik;

  // blocks are computed in parallel into pair-indexed slots, then scattered
  // serially in fixed order: bit-identical results for any thread count
  constexpr std::size_t kChunk = 32768;
  std::vector<std::array<complexd, 18>> buf(std::min(kChunk, pairs.size()));
  for (std::size_t base = 0; base < pairs.size(); base += kChunk) {
    std::size_t count = std::min(kChunk, pairs.size() - base);
    parallelFor(count, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t t = lo; t < hi; ++t) {
        auto [c1, c2] = pairs[base + t];
        const auto& b1 = cells[c1];
        const auto& b2 = cells[c2];
        detail::PairBlock blk;
        if (detail::sharedVertices(b1, b2) > 0) {
          detail::singularPair(b1, b2, k, outer, escalated, blk);
        } else if ((b1.centroid - b2.centroid).norm() < near_gap) {
          detail::regularPair(b1, b2, k, escalated, blk);
        } else {
          detail::regularPair(b1, b2, k, interior, blk);
        }
        auto& out = buf[t];
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) {
            double sgn = b1.sign[i] * b2.sign[j];
            double inv_a = 1.0 / (b1.area * b2.area);
            complexd vs = ik * sgn * 0.25 * inv_a *
                          blk.vectorMoment(b1.free_vertex[i], b2.free_vertex[j]);
            complexd vh = inv_ik * sgn * inv_a * blk.i_h;
            out[3 * i + j] = vs;
            out[9 + 3 * i + j] = vh;
          }
      }
    });
    for (std::size_t t = 0; t < count; ++t) {
      auto [c1, c2] = pairs[base + t];
      const auto& b1 = cells[c1];
      const auto& b2 = cells[c2];
      auto& out = buf[t];
      for (int i = 0; i < 9; ++i)
        if (!std::isfinite(out[i].real()) || !std::isfinite(out[i].imag()) ||
            !std::isfinite(out[9 + i].real()) || !std::isfinite(out[9 + i].imag()))
          throw QuadratureError("singular quadrature failed on cell pair (" +
                                std::to_string(c1) + "," + std::to_string(c2) +
                                ")");
      if (c1 == c2) {
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) {
            // exact reciprocity: average the two quadrature realizations
            complexd vs = 0.5 * (out[3 * i + j] + out[3 * j + i]);
            complexd vh = 0.5 * (out[9 + 3 * i + j] + out[9 + 3 * j + i]);
            sys.Ts(b1.edge[i], b2.edge[j]) += vs;
            sys.Th(b1.edge[i], b2.edge[j]) += vh;
          }
      } else {
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) {
            complexd vs = out[3 * i + j];
            complexd vh = out[9 + 3 * i + j];
            sys.Ts(b1.edge[i], b2.edge[j]) += vs;
            sys.Ts(b2.edge[j], b1.edge[i]) += vs;
            sys.Th(b1.edge[i], b2.edge[j]) += vh;
            sys.Th(b2.edge[j], b1.edge[i]) += vh;
          }
      }
    }
  }
  return sys;
}

/// Tested excitation e_m = -int (n x f_m) . (n x E^i) dS = -int f_m . E^i dS.
inline VectorXcd assembleRhs(const TriangleMesh& mesh, const PlaneWave& wave,
                             const QuadratureRule& quad = {}) {
  quad.validate();
  auto cells = detail::buildCellBases(mesh);
  TriQuadRule rule = triangleRule(quad.rhs_order);
  VectorXcd e = VectorXcd::Zero(mesh.numEdges());
  for (const auto& c : cells) {
    detail::CellQuad q = detail::cellQuad(c, rule);
    for (int i = 0; i < 3; ++i) {
      complexd acc(0.0, 0.0);
      for (std::size_t t = 0; t < q.x.size(); ++t) {
        Vector3cd Ei = wave.field(q.x[t]);
        acc += q.w[t] * (q.x[t] - c.free_vertex[i]).cast<complexd>().dot(Ei);
      }
      e(c.edge[i]) -= c.sign[i] / (2.0 * c.area) * acc;
    }
  }
  return e;
}

/// Ratio of extreme singular values from a full dense SVD.
template <typename MatrixType>
double conditionNumber(const MatrixType& M) {
  if (M.rows() != M.cols()) throw InvalidArgument("matrix must be square");
  if (!M.allFinite()) throw InvalidArgument("matrix has non-finite entries");
  Eigen::BDCSVD<MatrixType> svd(M);
  double smax = svd.singularValues()(0);
  double smin = svd.singularValues()(M.rows() - 1);
  if (smin == 0.0)
    throw SingularError("smallest singular value is exactly zero; condition "
                        "number is infinite");
  return smax / smin;
}

/// All singular values, nonincreasing.
template <typename MatrixType>
VectorXd singularValues(const MatrixType& M) {
  Eigen::BDCSVD<MatrixType> svd(M);
  return svd.singularValues();
}

}  // namespace qhfilt
