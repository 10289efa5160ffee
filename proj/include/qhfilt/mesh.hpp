#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "qhfilt/errors.hpp"

namespace qhfilt {

using Eigen::Vector3d;

/// Interior mesh edge with the RWG orientation attached: the triangle that
/// traverses (a, b) in that order is the plus cell, current flows from the
/// plus cell into the minus cell.
struct OrientedEdge {
  int a = -1;           ///< tail vertex (a < b)
  int b = -1;           ///< head vertex
  int plus_cell = -1;   ///< triangle traversing a -> b
  int minus_cell = -1;  ///< triangle traversing b -> a
  double length = 0.0;  ///< |v_b - v_a| in meters
};

struct MeshStats {
  int num_vertices = 0;
  int num_cells = 0;
  int num_edges = 0;
  int genus = 0;
  double h_avg = 0.0;
  double h_min = 0.0;
  double h_max = 0.0;
};

/// Closed oriented triangle 2-manifold. Construction validates manifoldness,
/// repairs inconsistent winding when the surface is orientable, flips the
/// global orientation so normals point outward (positive enclosed volume),
/// and derives the oriented interior edges. Instances are immutable after
/// construction and safe to share across threads.
class TriangleMesh {
 public:
  TriangleMesh(std::vector<Vector3d> vertices,
               std::vector<std::array<int, 3>> triangles)
      : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
    validateIndices();
    repairOrientation();
    orientOutward();
    buildEdges();
    checkEuler();
  }

  const std::vector<Vector3d>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<OrientedEdge>& edges() const { return edges_; }

  int numVertices() const { return static_cast<int>(vertices_.size()); }
  int numCells() const { return static_cast<int>(triangles_.size()); }
  int numEdges() const { return static_cast<int>(edges_.size()); }
  int genus() const { return genus_; }

  double cellArea(int c) const {
    const auto& t = triangles_[c];
    return 0.5 * (vertices_[t[1]] - vertices_[t[0]])
                     .cross(vertices_[t[2]] - vertices_[t[0]])
                     .norm();
  }

  Vector3d cellCentroid(int c) const {
    const auto& t = triangles_[c];
    return (vertices_[t[0]] + vertices_[t[1]] + vertices_[t[2]]) / 3.0;
  }

  Vector3d cellNormal(int c) const {
    const auto& t = triangles_[c];
    return (vertices_[t[1]] - vertices_[t[0]])
        .cross(vertices_[t[2]] - vertices_[t[0]])
        .normalized();
  }

  /// Total surface area.
  double area() const {
    double a = 0.0;
    for (int c = 0; c < numCells(); ++c) a += cellArea(c);
    return a;
  }

  /// Area-weighted centroid of the surface.
  Vector3d centroid() const {
    Vector3d num = Vector3d::Zero();
    double den = 0.0;
    for (int c = 0; c < numCells(); ++c) {
      double a = cellArea(c);
      num += a * cellCentroid(c);
      den += a;
    }
    return num / den;
  }

  /// Signed enclosed volume (positive for outward winding).
  double signedVolume() const {
    double v = 0.0;
    for (const auto& t : triangles_)
      v += vertices_[t[0]].dot(vertices_[t[1]].cross(vertices_[t[2]])) / 6.0;
    return v;
  }

 private:
  void validateIndices() const {
    if (vertices_.size() < 4 || triangles_.size() < 4)
      throw TopologyError("mesh too small to be a closed surface");
    int nv = numVertices();
    for (std::size_t c = 0; c < triangles_.size(); ++c) {
      const auto& t = triangles_[c];
      for (int i = 0; i < 3; ++i)
        if (t[i] < 0 || t[i] >= nv)
          throw ParseError("triangle " + std::to_string(c) +
                           " references vertex " + std::to_string(t[i]) +
                           " outside [0," + std::to_string(nv) + ")");
      if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
        throw TopologyError("triangle " + std::to_string(c) +
                            " is degenerate (repeated vertex)");
    }
  }

  static std::pair<int, int> key(int u, int v) {
    return {std::min(u, v), std::max(u, v)};
  }

  // Breadth-first winding propagation. Two triangles sharing an edge are
  // consistent iff they traverse it in opposite directions.
  void repairOrientation() {
    std::map<std::pair<int, int>, std::vector<int>> edge_cells;
    for (int c = 0; c < numCells(); ++c) {
      const auto& t = triangles_[c];
      for (int i = 0; i < 3; ++i) {
        auto k = key(t[i], t[(i + 1) % 3]);
        auto& lst = edge_cells[k];
        lst.push_back(c);
        if (lst.size() > 2)
          throw TopologyError("non-manifold edge (" + std::to_string(k.first) +
                              "," + std::to_string(k.second) +
                              ") shared by more than two triangles");
      }
    }
    for (const auto& [k, lst] : edge_cells)
      if (lst.size() != 2)
        throw TopologyError("boundary edge (" + std::to_string(k.first) + "," +
                            std::to_string(k.second) +
                            ") belongs to a single triangle");

    auto traversesForward = [&](int c, int u, int v) {
      const auto& t = triangles_[c];
      for (int i = 0; i < 3; ++i)
        if (t[i] == u && t[(i + 1) % 3] == v) return true;
      return false;
    };

    std::vector<int> state(numCells(), 0);  // 0 unseen, 1 keep, 2 flipped
    std::queue<int> bfs;
    state[0] = 1;
    bfs.push(0);
    int visited = 1;
    while (!bfs.empty()) {
      int c = bfs.front();
      bfs.pop();
      const auto& t = triangles_[c];
      for (int i = 0; i < 3; ++i) {
        int u = t[i], v = t[(i + 1) % 3];
        const auto& lst = edge_cells.at(key(u, v));
        int other = lst[0] == c ? lst[1] : lst[0];
        // c traverses u->v after any flip already applied to c; the
        // neighbor must traverse v->u in its final winding.
        bool other_ok = traversesForward(other, v, u);
        int want = other_ok ? 1 : 2;
        if (state[other] == 0) {
          if (want == 2) std::swap(triangles_[other][1], triangles_[other][2]);
          state[other] = 1;
          bfs.push(other);
          ++visited;
        } else if (!other_ok) {
          throw TopologyError("surface is non-orientable near triangle " +
                              std::to_string(other));
        }
      }
    }
    if (visited != numCells())
      throw TopologyError("surface is disconnected (" +
                          std::to_string(visited) + " of " +
                          std::to_string(numCells()) + " triangles reachable)");
  }

  void orientOutward() {
    if (signedVolume() < 0.0)
      for (auto& t : triangles_) std::swap(t[1], t[2]);
  }

  void buildEdges() {
    std::map<std::pair<int, int>, OrientedEdge> acc;
    for (int c = 0; c < numCells(); ++c) {
      const auto& t = triangles_[c];
      for (int i = 0; i < 3; ++i) {
        int u = t[i], v = t[(i + 1) % 3];
        auto k = key(u, v);
        auto& e = acc[k];
        e.a = k.first;
        e.b = k.second;
        if (u == e.a)
          e.plus_cell = c;  // traverses (a -> b)
        else
          e.minus_cell = c;
      }
    }
    edges_.reserve(acc.size());
    for (auto& [k, e] : acc) {
      if (e.plus_cell < 0 || e.minus_cell < 0)
        throw TopologyError("edge traversed twice in the same direction");
      e.length = (vertices_[e.b] - vertices_[e.a]).norm();
      edges_.push_back(e);
    }
  }

  void checkEuler() {
    int chi = numVertices() - numEdges() + numCells();
    if (chi > 2 || chi % 2 != 0)
      throw TopologyError("Euler characteristic " + std::to_string(chi) +
                          " is not 2-2g for integer genus");
    genus_ = (2 - chi) / 2;
  }

  std::vector<Vector3d> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<OrientedEdge> edges_;
  int genus_ = 0;
};

inline MeshStats meshStats(const TriangleMesh& mesh) {
  MeshStats s;
  s.num_vertices = mesh.numVertices();
  s.num_cells = mesh.numCells();
  s.num_edges = mesh.numEdges();
  s.genus = mesh.genus();
  s.h_min = std::numeric_limits<double>::infinity();
  s.h_max = 0.0;
  double sum = 0.0;
  for (const auto& e : mesh.edges()) {
    sum += e.length;
    s.h_min = std::min(s.h_min, e.length);
    s.h_max = std::max(s.h_max, e.length);
  }
  s.h_avg = sum / mesh.numEdges();
  return s;
}

/// Icosahedron subdivided `subdivisions` times, vertices projected onto the
/// sphere of the given radius. N_c = 20 * 4^s.
inline TriangleMesh makeIcosphere(int subdivisions, double radius) {
  if (subdivisions < 0 || subdivisions > 8)
    throw LimitError("icosphere subdivisions must be in [0, 8], got " +
                     std::to_string(subdivisions));
  if (!(radius > 0.0)) throw LimitError("icosphere radius must be positive");

  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vector3d> verts = {
      {-1, phi, 0}, {1, phi, 0},   {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi},   {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1},   {-phi, 0, -1}, {-phi, 0, 1}};
  std::vector<std::array<int, 3>> tris = {
      {0, 11, 5},  {0, 5, 1},   {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},   {5, 11, 4},  {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},   {3, 4, 2},   {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},   {2, 4, 11},  {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int u, int v) {
      auto k = std::make_pair(std::min(u, v), std::max(u, v));
      auto it = midpoint.find(k);
      if (it != midpoint.end()) return it->second;
      int idx = static_cast<int>(verts.size());
      verts.push_back(0.5 * (verts[u] + verts[v]));
      midpoint.emplace(k, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(tris.size() * 4);
    for (const auto& t : tris) {
      int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({t[1], bc, ab});
      next.push_back({t[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    tris = std::move(next);
  }
  for (auto& v : verts) v = radius * v.normalized();
  return TriangleMesh(std::move(verts), std::move(tris));
}

/// Genus-1 torus: tube of radius r swept around a circle of radius R, with
/// the quad grid split into triangles.
inline TriangleMesh makeTorus(int major_segments, int minor_segments, double R,
                              double r) {
  if (major_segments < 3 || minor_segments < 3)
    throw LimitError("torus segment counts must be >= 3");
  if (!(r > 0.0) || !(R > 0.0) || r >= R)
    throw LimitError("torus requires 0 < r < R (self-intersecting otherwise)");

  const double two_pi = 2.0 * M_PI;
  std::vector<Vector3d> verts;
  verts.reserve(static_cast<std::size_t>(major_segments) * minor_segments);
  for (int i = 0; i < major_segments; ++i) {
    double u = two_pi * i / major_segments;
    for (int j = 0; j < minor_segments; ++j) {
      double v = two_pi * j / minor_segments;
      double w = R + r * std::cos(v);
      verts.emplace_back(w * std::cos(u), w * std::sin(u), r * std::sin(v));
    }
  }
  auto id = [&](int i, int j) {
    return (i % major_segments) * minor_segments + (j % minor_segments);
  };
  std::vector<std::array<int, 3>> tris;
  tris.reserve(2u * major_segments * minor_segments);
  for (int i = 0; i < major_segments; ++i)
    for (int j = 0; j < minor_segments; ++j) {
      int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      tris.push_back({a, b, c});
      tris.push_back({a, c, d});
    }
  return TriangleMesh(std::move(verts), std::move(tris));
}

}  // namespace qhfilt
