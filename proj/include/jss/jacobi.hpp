#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "json.hpp"
#include "jss/mesh.hpp"

namespace jss {

struct Mat2 {
  double m00 = 0.0, m01 = 0.0;
  double m10 = 0.0, m11 = 0.0;

  Vec2 operator*(Vec2 p) const { return {m00 * p.x + m01 * p.y, m10 * p.x + m11 * p.y}; }
  double determinant() const { return m00 * m11 - m01 * m10; }
};

/// Affine restriction of the field to one triangle: value(x) = a*x + b.
struct TriangleJacobian {
  Mat2 a;
  Vec2 b;
  double det = 0.0;         ///< det(a); sign is the triangle's orientation
  double range_area = 0.0;  ///< area of the triangle's image in (f, g) space
};

enum class Sign : std::int8_t { Negative = -1, Degenerate = 0, Positive = 1 };

inline int to_int(Sign s) { return static_cast<int>(s); }

/// Twice the signed image area: (f1-f0)(g2-g0) - (f2-f0)(g1-g0).
/// Exactly zero whenever two of the three values coincide.
inline double image_orient(Vec2 v0, Vec2 v1, Vec2 v2) {
  return (v1.x - v0.x) * (v2.y - v0.y) - (v2.x - v0.x) * (v1.y - v0.y);
}

TriangleJacobian jacobian(Vec2 p0, Vec2 p1, Vec2 p2, Vec2 v0, Vec2 v1, Vec2 v2);
TriangleJacobian jacobian(const TriField& field, TriId t);

/// Jacobian determinant of a triangle when its vertex values are v0, v1, v2.
double jacobian_det(const TriField& field, TriId t, Vec2 v0, Vec2 v1, Vec2 v2);
double jacobian_det(const TriField& field, TriId t);

inline Sign classify(double det, double epsilon = 0.0) {
  if (det > epsilon) return Sign::Positive;
  if (det < -epsilon) return Sign::Negative;
  return Sign::Degenerate;
}

inline Sign orientation(const TriangleJacobian& j, double epsilon = 0.0) { return classify(j.det, epsilon); }

std::vector<TriangleJacobian> jacobians(const TriField& field);
std::vector<Sign> orientations(const TriField& field, double epsilon = 0.0);

/// How degenerate triangles pick a side. Majority counts signs over the point
/// neighbourhood; the Prefer* policies take their sign as soon as one
/// neighbour carries it and fall back to majority otherwise.
enum class DegeneratePolicy { Majority, PreferNegative, PreferPositive };

using DegenerateAssignment = std::map<TriId, Sign>;

/// Resolves every Degenerate triangle to Positive or Negative by growing its
/// point neighbourhood ring by ring until the policy yields a decision.
/// Exhausting the mesh without one assigns Positive.
DegenerateAssignment assign_degenerate(const TriField& field, std::span<const Sign> orientations,
                                       DegeneratePolicy policy = DegeneratePolicy::Majority);

/// Orientation with degenerate triangles replaced by their assignment.
std::vector<Sign> effective_signs(std::span<const Sign> orientations, const DegenerateAssignment& assignment);

struct JacobiSet {
  std::vector<std::array<VertexId, 2>> edges;  ///< (low, high) vertex ids, sorted
  DegenerateAssignment degenerate;
};

JacobiSet extract_jacobi_set(const TriField& field, std::span<const Sign> orientations,
                             const DegenerateAssignment& assignment);

double jacobi_length(const TriField& field, const JacobiSet& js);

/// Connected components of the Jacobi edges, edges joined by shared vertices.
std::size_t component_count(const TriField& field, const JacobiSet& js);

struct JacobiMeasures {
  double length = 0.0;
  std::size_t components = 0;

  friend bool operator==(const JacobiMeasures&, const JacobiMeasures&) = default;
};

/// Orientations, majority assignment, extraction and both measures in one go.
JacobiSet compute_jacobi_set(const TriField& field, double epsilon = 0.0);
JacobiMeasures measure(const TriField& field, double epsilon = 0.0);

nlohmann::json to_json(const JacobiSet& js);
nlohmann::json to_json(const JacobiMeasures& m);

}  // namespace jss
