#pragma once

#include <stdexcept>
#include <string>

namespace qhfilt {

/// Base class for all qhfilt errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input file (OFF/OBJ/JSON).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Mesh is not a closed oriented 2-manifold (boundary edge, non-manifold
/// edge, non-orientable or disconnected surface).
class TopologyError : public Error {
 public:
  using Error::Error;
};

/// Parameter outside the desk-scale guard rails.
class LimitError : public Error {
 public:
  using Error::Error;
};

/// Matrix expected to be symmetric is not, within tolerance.
class SymmetryError : public Error {
 public:
  using Error::Error;
};

/// Metric matrix is not symmetric positive definite within tolerance.
class MetricError : public Error {
 public:
  using Error::Error;
};

/// Computed operator rank disagrees with the topological expectation.
class RankError : public Error {
 public:
  using Error::Error;
};

/// Singular quadrature scheme produced a non-finite value on a pair.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// Matrix is exactly singular; the condition number is infinite.
class SingularError : public Error {
 public:
  using Error::Error;
};

/// Supplied loop+harmonic and star projectors do not resolve the identity.
class ComplementarityError : public Error {
 public:
  using Error::Error;
};

/// Operation requires a genus-0 surface.
class GenusError : public Error {
 public:
  using Error::Error;
};

/// Sphere morphing left inverted triangles after smoothing.
class FoldError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument combination detected at an API boundary.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace qhfilt
