#include "jss/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "jss/kernels.hpp"
#include "jss/union_find.hpp"

namespace jss {

TriangleJacobian jacobian(Vec2 p0, Vec2 p1, Vec2 p2, Vec2 v0, Vec2 v1, Vec2 v2) {
  const Vec2 e1 = p1 - p0;
  const Vec2 e2 = p2 - p0;
  const Vec2 d1 = v1 - v0;
  const Vec2 d2 = v2 - v0;
  const double domain2 = e1.x * e2.y - e2.x * e1.y;
  const double range2 = image_orient(v0, v1, v2);

  // a = [d1 d2] * [e1 e2]^-1
  TriangleJacobian j;
  j.a.m00 = (d1.x * e2.y - d2.x * e1.y) / domain2;
  j.a.m01 = (d2.x * e1.x - d1.x * e2.x) / domain2;
  j.a.m10 = (d1.y * e2.y - d2.y * e1.y) / domain2;
  j.a.m11 = (d2.y * e1.x - d1.y * e2.x) / domain2;
  j.b = v0 - j.a * p0;
  j.det = range2 / domain2;
  j.range_area = 0.5 * std::abs(range2);
  return j;
}

TriangleJacobian jacobian(const TriField& field, TriId t) {
  const auto& v = field.triangle(t).v;
  const Vertex& a = field.vertex(v[0]);
  const Vertex& b = field.vertex(v[1]);
  const Vertex& c = field.vertex(v[2]);
  return jacobian(a.position, b.position, c.position, a.value, b.value, c.value);
}

double jacobian_det(const TriField& field, TriId t, Vec2 v0, Vec2 v1, Vec2 v2) {
  const auto& v = field.triangle(t).v;
  const double domain2 =
      orient2(field.vertex(v[0]).position, field.vertex(v[1]).position, field.vertex(v[2]).position);
  return image_orient(v0, v1, v2) / domain2;
}

double jacobian_det(const TriField& field, TriId t) {
  const auto& v = field.triangle(t).v;
  return jacobian_det(field, t, field.vertex(v[0]).value, field.vertex(v[1]).value, field.vertex(v[2]).value);
}

std::vector<TriangleJacobian> jacobians(const TriField& field) {
  std::vector<TriangleJacobian> out(field.triangle_count());
  kernels::omp::triangle_jacobians(field, out);
  return out;
}

std::vector<Sign> orientations(const TriField& field, double epsilon) {
  const auto jac = jacobians(field);
  std::vector<Sign> out(jac.size());
  kernels::omp::classify(jac, epsilon, out);
  return out;
}

DegenerateAssignment assign_degenerate(const TriField& field, std::span<const Sign> orientations,
                                       DegeneratePolicy policy) {
  std::vector<Sign> resolved(orientations.size());
  kernels::omp::assign_degenerate(field, orientations, policy, resolved);
  DegenerateAssignment out;
  for (std::size_t t = 0; t < orientations.size(); ++t) {
    if (orientations[t] == Sign::Degenerate) out.emplace_hint(out.end(), static_cast<TriId>(t), resolved[t]);
  }
  return out;
}

std::vector<Sign> effective_signs(std::span<const Sign> orientations, const DegenerateAssignment& assignment) {
  std::vector<Sign> out(orientations.begin(), orientations.end());
  for (const auto& [t, s] : assignment) out[static_cast<std::size_t>(t)] = s;
  return out;
}

JacobiSet extract_jacobi_set(const TriField& field, std::span<const Sign> orientations,
                             const DegenerateAssignment& assignment) {
  const auto eff = effective_signs(orientations, assignment);
  JacobiSet js;
  js.degenerate = assignment;
  for (std::size_t t = 0; t < field.triangle_count(); ++t) {
    const auto tri = static_cast<TriId>(t);
    const auto& nb = field.edge_neighbors(tri);
    const auto& v = field.triangle(tri).v;
    for (std::size_t k = 0; k < 3; ++k) {
      const TriId n = nb[k];
      if (n <= tri || eff[t] == eff[static_cast<std::size_t>(n)]) continue;
      const VertexId a = v[k];
      const VertexId b = v[(k + 1) % 3];
      js.edges.push_back({std::min(a, b), std::max(a, b)});
    }
  }
  std::sort(js.edges.begin(), js.edges.end());
  return js;
}

double jacobi_length(const TriField& field, const JacobiSet& js) {
  double sum = 0.0;
  for (const auto& e : js.edges) {
    const Vec2 d = field.vertex(e[1]).position - field.vertex(e[0]).position;
    sum += std::hypot(d.x, d.y);
  }
  return sum;
}

std::size_t component_count(const TriField& field, const JacobiSet& js) {
  UnionFind uf(field.vertex_count());
  for (const auto& e : js.edges) uf.unite(e[0], e[1]);
  std::vector<std::int32_t> roots;
  roots.reserve(js.edges.size());
  for (const auto& e : js.edges) roots.push_back(uf.find(e[0]));
  std::sort(roots.begin(), roots.end());
  return static_cast<std::size_t>(std::unique(roots.begin(), roots.end()) - roots.begin());
}

JacobiSet compute_jacobi_set(const TriField& field, double epsilon) {
  const auto signs = orientations(field, epsilon);
  const auto assignment = assign_degenerate(field, signs, DegeneratePolicy::Majority);
  return extract_jacobi_set(field, signs, assignment);
}

JacobiMeasures measure(const TriField& field, double epsilon) {
  const JacobiSet js = compute_jacobi_set(field, epsilon);
  return {jacobi_length(field, js), component_count(field, js)};
}

nlohmann::json to_json(const JacobiSet& js) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : js.edges) edges.push_back({e[0], e[1]});
  nlohmann::json degenerate = nlohmann::json::object();
  for (const auto& [t, s] : js.degenerate) degenerate[std::to_string(t)] = s == Sign::Negative ? "-" : "+";
  return {{"edges", std::move(edges)}, {"degenerate", std::move(degenerate)}};
}

nlohmann::json to_json(const JacobiMeasures& m) { return {{"length", m.length}, {"components", m.components}}; }

}  // namespace jss
