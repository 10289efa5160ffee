#pragma once

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qhfilt/mesh.hpp"

namespace qhfilt {

enum class MeshFormat { OFF, OBJ };

namespace detail {

inline bool nextContentLine(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    auto h = line.find('#');
    if (h != std::string::npos) line.erase(h);
    if (line.find_first_not_of(" \t\r\n") != std::string::npos) return true;
  }
  return false;
}

}  // namespace detail

inline TriangleMesh loadOff(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::string line;
  if (!detail::nextContentLine(in, line))
    throw ParseError(path + ": empty file");
  std::istringstream hdr(line);
  std::string magic;
  hdr >> magic;
  if (magic != "OFF") throw ParseError(path + ": missing OFF header");

  long nv = -1, nf = -1, ne = -1;
  // Counts may share the header line or follow on the next one.
  if (!(hdr >> nv >> nf >> ne)) {
    if (!detail::nextContentLine(in, line))
      throw ParseError(path + ": missing counts line");
    std::istringstream cnt(line);
    if (!(cnt >> nv >> nf >> ne))
      throw ParseError(path + ": malformed counts line '" + line + "'");
  }
  if (nv <= 0 || nf <= 0)
    throw ParseError(path + ": non-positive vertex or face count");

  std::vector<Vector3d> verts;
  verts.reserve(nv);
  for (long i = 0; i < nv; ++i) {
    if (!detail::nextContentLine(in, line))
      throw ParseError(path + ": unexpected end of file in vertex block");
    std::istringstream vs(line);
    double x, y, z;
    if (!(vs >> x >> y >> z))
      throw ParseError(path + ": malformed vertex line '" + line + "'");
    verts.emplace_back(x, y, z);
  }
  std::vector<std::array<int, 3>> tris;
  tris.reserve(nf);
  for (long i = 0; i < nf; ++i) {
    if (!detail::nextContentLine(in, line))
      throw ParseError(path + ": unexpected end of file in face block");
    std::istringstream fs(line);
    int n, a, b, c;
    if (!(fs >> n >> a >> b >> c) || n != 3)
      throw ParseError(path + ": face " + std::to_string(i) +
                       " is not a triangle");
    tris.push_back({a, b, c});
  }
  return TriangleMesh(std::move(verts), std::move(tris));
}

inline TriangleMesh loadObj(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::vector<Vector3d> verts;
  std::vector<std::array<int, 3>> tris;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto h = line.find('#');
    if (h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z))
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": malformed vertex record");
      verts.emplace_back(x, y, z);
    } else if (tag == "f") {
      std::vector<long> idx;
      std::string tok;
      while (ls >> tok) {
        // "f v", "f v/t", "f v/t/n", "f v//n": the vertex index leads.
        long v = 0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || v == 0)
          throw ParseError(path + ":" + std::to_string(lineno) +
                           ": malformed face index '" + tok + "'");
        long n = static_cast<long>(verts.size());
        if (v < 0) v = n + v + 1;  // negative OBJ indices are relative
        idx.push_back(v - 1);
      }
      if (idx.size() != 3)
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": face is not a triangle");
      tris.push_back({static_cast<int>(idx[0]), static_cast<int>(idx[1]),
                      static_cast<int>(idx[2])});
    }
    // other records (vn, vt, usemtl, ...) are ignored
  }
  if (verts.empty() || tris.empty())
    throw ParseError(path + ": no vertices or faces found");
  return TriangleMesh(std::move(verts), std::move(tris));
}

/// Reads a closed triangle mesh from a text OFF or OBJ file. Binary formats
/// are rejected by the parsers.
inline TriangleMesh loadMesh(const std::string& path, MeshFormat format) {
  return format == MeshFormat::OFF ? loadOff(path) : loadObj(path);
}

/// Guesses the format from the file extension (.off / .obj).
inline TriangleMesh loadMesh(const std::string& path) {
  auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  for (auto& ch : ext) ch = static_cast<char>(std::tolower(ch));
  if (ext == ".obj") return loadMesh(path, MeshFormat::OBJ);
  return loadMesh(path, MeshFormat::OFF);
}

inline void saveOff(const TriangleMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << "OFF\n"
      << mesh.numVertices() << ' ' << mesh.numCells() << ' ' << mesh.numEdges()
      << '\n';
  out.precision(17);
  for (const auto& v : mesh.vertices())
    out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& t : mesh.triangles())
    out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  if (!out) throw ParseError("write failed for " + path);
}

}  // namespace qhfilt
