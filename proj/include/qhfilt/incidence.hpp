#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "qhfilt/mesh.hpp"

namespace qhfilt {

using SparseD = Eigen::SparseMatrix<double>;

/// Normalized loop-to-RWG (Lambda, N_e x N_v) and star-to-RWG (Sigma,
/// N_e x N_c) incidence matrices with entries in {-1, 0, +1}. By
/// construction Lambda^T Lambda is the vertex graph Laplacian, Sigma^T Sigma
/// the cell graph Laplacian, and Sigma^T Lambda = 0 in exact (integer)
/// arithmetic.
struct IncidencePair {
  SparseD Lambda;
  SparseD Sigma;
  int num_vertices = 0;
  int num_cells = 0;
  int num_edges = 0;
  int genus = 0;
};

inline IncidencePair buildIncidence(const TriangleMesh& mesh) {
  IncidencePair pair;
  pair.num_vertices = mesh.numVertices();
  pair.num_cells = mesh.numCells();
  pair.num_edges = mesh.numEdges();
  pair.genus = mesh.genus();

  std::vector<Eigen::Triplet<double>> tl, ts;
  tl.reserve(2u * mesh.numEdges());
  ts.reserve(2u * mesh.numEdges());
  for (int e = 0; e < mesh.numEdges(); ++e) {
    const auto& ed = mesh.edges()[e];
    tl.emplace_back(e, ed.b, 1.0);   // edge head
    tl.emplace_back(e, ed.a, -1.0);  // edge tail
    ts.emplace_back(e, ed.plus_cell, 1.0);
    ts.emplace_back(e, ed.minus_cell, -1.0);
  }
  pair.Lambda.resize(mesh.numEdges(), mesh.numVertices());
  pair.Sigma.resize(mesh.numEdges(), mesh.numCells());
  pair.Lambda.setFromTriplets(tl.begin(), tl.end());
  pair.Sigma.setFromTriplets(ts.begin(), ts.end());
  pair.Lambda.makeCompressed();
  pair.Sigma.makeCompressed();
  return pair;
}

/// Vertex-adjacency graph Laplacian Lambda^T Lambda as a dense matrix.
inline Eigen::MatrixXd vertexLaplacian(const IncidencePair& pair) {
  return Eigen::MatrixXd(SparseD(pair.Lambda.transpose() * pair.Lambda));
}

/// Cell-adjacency graph Laplacian Sigma^T Sigma as a dense matrix.
inline Eigen::MatrixXd cellLaplacian(const IncidencePair& pair) {
  return Eigen::MatrixXd(SparseD(pair.Sigma.transpose() * pair.Sigma));
}

}  // namespace qhfilt
