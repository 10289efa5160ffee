#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <vector>

#include "qhfilt/errors.hpp"

namespace qhfilt {

/// Symmetric quadrature rule on the reference triangle, barycentric points
/// with weights summing to one (scale by the physical area).
struct TriQuadRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int size() const { return static_cast<int>(points.size()); }
};

/// 1D Gauss-Legendre nodes/weights on [-1, 1], Newton iteration on the
/// three-term recurrence.
inline void gaussLegendre(int n, std::vector<double>& x,
                          std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = -t;
    x[n - 1 - i] = t;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

namespace detail {

inline void addOrbit3(TriQuadRule& r, double a, double b, double w) {
  r.points.push_back({a, b, b});
  r.points.push_back({b, a, b});
  r.points.push_back({b, b, a});
  r.weights.insert(r.weights.end(), 3, w);
}

inline void addOrbit6(TriQuadRule& r, double a, double b, double c, double w) {
  r.points.push_back({a, b, c});
  r.points.push_back({a, c, b});
  r.points.push_back({b, a, c});
  r.points.push_back({b, c, a});
  r.points.push_back({c, a, b});
  r.points.push_back({c, b, a});
  r.weights.insert(r.weights.end(), 6, w);
}

inline void normalizeWeights(TriQuadRule& r) {
  double s = 0.0;
  for (double w : r.weights) s += w;
  for (double& w : r.weights) w /= s;
}

/// Duffy (collapsed square) rule from an n x n Gauss-Legendre grid; exact
/// for total degree n-1 and free of tabulation error at any size.
inline TriQuadRule duffyRule(int n) {
  std::vector<double> x, w;
  gaussLegendre(n, x, w);
  TriQuadRule r;
  for (int i = 0; i < n; ++i) {
    double u = 0.5 * (x[i] + 1.0);
    for (int j = 0; j < n; ++j) {
      double v = 0.5 * (x[j] + 1.0);
      // map (u, v) in unit square -> barycentric (1-u, u(1-v), uv)
      r.points.push_back({1.0 - u, u * (1.0 - v), u * v});
      r.weights.push_back(0.25 * w[i] * w[j] * u * 2.0);
    }
  }
  normalizeWeights(r);
  return r;
}

}  // namespace detail

/// Smallest available symmetric rule with at least `min_points` points.
/// Tabulated sizes: 1 (deg 1), 3 (deg 2), 6 (deg 4), 7 (deg 5), 12 (deg 6);
/// larger requests fall through to runtime-generated Duffy grids.
inline TriQuadRule triangleRule(int min_points) {
  if (min_points < 1) throw InvalidArgument("quadrature order must be >= 1");
  TriQuadRule r;
  if (min_points <= 1) {
    r.points.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3});
    r.weights.push_back(1.0);
  } else if (min_points <= 3) {
    detail::addOrbit3(r, 0.0, 0.5, 1.0 / 3);
  } else if (min_points <= 6) {
    detail::addOrbit3(r, 0.816847572980459, 0.091576213509771,
                      0.109951743655322);
    detail::addOrbit3(r, 0.108103018168070, 0.445948490915965,
                      0.223381589678011);
  } else if (min_points <= 7) {
    r.points.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3});
    r.weights.push_back(0.225);
    detail::addOrbit3(r, 0.797426985353087, 0.101286507323456,
                      0.125939180544827);
    detail::addOrbit3(r, 0.059715871789770, 0.470142064105115,
                      0.132394152788506);
  } else if (min_points <= 12) {
    detail::addOrbit3(r, 0.873821971016996, 0.063089014491502,
                      0.050844906370207);
    detail::addOrbit3(r, 0.501426509658179, 0.249286745170910,
                      0.116786275726379);
    detail::addOrbit6(r, 0.636502499121399, 0.310352451033785,
                      0.053145049844816, 0.082851075618374);
  } else {
    int n = 4;
    while (n * n < min_points && n < 16) ++n;
    return detail::duffyRule(n);
  }
  detail::normalizeWeights(r);
  return r;
}

/// Double-surface quadrature configuration for the EFIE assembler.
struct QuadratureRule {
  int interior_order = 6;      ///< points per triangle on disjoint pairs
  int rhs_order = 7;           ///< points per triangle for tested excitations
  int singular_outer = 12;     ///< outer points over the analytic inner integral
  double near_factor = 2.0;    ///< escalate when centroid gap < factor * h_avg
  bool allow_large_kh = false; ///< override the k*h_avg < 1 guard

  void validate() const {
    if (interior_order < 1 || rhs_order < 1 || singular_outer < 1)
      throw InvalidArgument("quadrature orders must be positive");
  }
};

}  // namespace qhfilt
