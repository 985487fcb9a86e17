#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "dwdt/vec.hpp"

namespace dwdt {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input/configuration problems (bad files, invalid ranges, broken patches).
struct ValidationError : Error {
  using Error::Error;
};

// Two sites coincide; no bisector exists.
struct DegeneratePairError : ValidationError {
  DegeneratePairError(int a, int b)
      : ValidationError("degenerate pair: vertices " + std::to_string(a) +
                        " and " + std::to_string(b) + " coincide"),
        a(a),
        b(b) {}
  int a = -1, b = -1;
};

// Collinear triple; the circumcenter system is singular.
struct DegenerateTriangleError : ValidationError {
  explicit DegenerateTriangleError(double det)
      : ValidationError("degenerate triangle: |det| = " + std::to_string(det)),
        det(det) {}
  double det = 0.0;
};

// A 4-tuple is power-cocircular within tolerance; the discrete WDT is not
// well defined for this input.
struct AmbiguousConfigurationError : Error {
  AmbiguousConfigurationError(int j, int k, int l, int m, double margin)
      : Error("ambiguous configuration: vertices (" + std::to_string(j) + "," +
              std::to_string(k) + "," + std::to_string(l) + "," +
              std::to_string(m) + ") are power-cocircular (margin " +
              std::to_string(margin) + ")"),
        tuple{j, k, l, m},
        margin(margin) {}
  std::array<int, 4> tuple{};
  double margin = 0.0;
};

// A differentiable primitive produced a non-finite value.
struct NumericFailureError : Error {
  explicit NumericFailureError(const char* primitive)
      : Error(std::string("numeric failure in primitive '") + primitive + "'"),
        primitive(primitive) {}
  std::string primitive;
};

struct OutsideDomainError : ValidationError {
  OutsideDomainError(const Vec2& query, const Vec2& nearest)
      : ValidationError("point (" + std::to_string(query.x) + "," +
                        std::to_string(query.y) +
                        ") lies outside the patch domain; nearest boundary "
                        "point (" +
                        std::to_string(nearest.x) + "," +
                        std::to_string(nearest.y) + ")"),
        query(query),
        nearest(nearest) {}
  Vec2 query{}, nearest{};
};

struct InvalidPatchError : ValidationError {
  using ValidationError::ValidationError;
};

struct EmptyTriangulationError : Error {
  using Error::Error;
};

struct UndefinedNormalizationError : Error {
  using Error::Error;
};

}  // namespace dwdt
