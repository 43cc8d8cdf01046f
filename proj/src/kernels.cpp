#include "jss/kernels.hpp"

#include <cstdint>
#include <vector>

namespace jss::kernels {

namespace {

// Per-thread visit marks for ring expansion; bumping the stamp clears them.
class RingScratch {
 public:
  RingScratch(std::size_t vertices, std::size_t triangles) : vertex_mark_(vertices, 0), tri_mark_(triangles, 0) {}

  Sign resolve(const TriField& field, std::span<const Sign> orientations, DegeneratePolicy policy, TriId seed) {
    ++stamp_;
    tri_mark_[static_cast<std::size_t>(seed)] = stamp_;
    frontier_.assign(1, seed);
    int positive = 0;
    int negative = 0;
    while (!frontier_.empty()) {
      next_.clear();
      for (TriId t : frontier_) {
        for (VertexId v : field.triangle(t).v) {
          if (vertex_mark_[static_cast<std::size_t>(v)] == stamp_) continue;
          vertex_mark_[static_cast<std::size_t>(v)] = stamp_;
          for (TriId s : field.vertex_star(v)) {
            if (tri_mark_[static_cast<std::size_t>(s)] == stamp_) continue;
            tri_mark_[static_cast<std::size_t>(s)] = stamp_;
            next_.push_back(s);
            const Sign o = orientations[static_cast<std::size_t>(s)];
            if (o == Sign::Positive) ++positive;
            if (o == Sign::Negative) ++negative;
          }
        }
      }
      if (policy == DegeneratePolicy::PreferNegative && negative > 0) return Sign::Negative;
      if (policy == DegeneratePolicy::PreferPositive && positive > 0) return Sign::Positive;
      if (positive > negative) return Sign::Positive;
      if (negative > positive) return Sign::Negative;
      frontier_.swap(next_);
    }
    return Sign::Positive;
  }

 private:
  std::uint32_t stamp_ = 0;
  std::vector<std::uint32_t> vertex_mark_;
  std::vector<std::uint32_t> tri_mark_;
  std::vector<TriId> frontier_;
  std::vector<TriId> next_;
};

inline TriangleJacobian jacobian_of(const TriField& field, std::size_t t) {
  const auto& v = field.triangles()[t].v;
  const Vertex& a = field.vertex(v[0]);
  const Vertex& b = field.vertex(v[1]);
  const Vertex& c = field.vertex(v[2]);
  return jacobian(a.position, b.position, c.position, a.value, b.value, c.value);
}

inline double pass_sample(const SeparablePass& p, std::span<const double> in, int i, int j) {
  const int n = p.along_x ? p.width : p.height;
  const int pos = p.along_x ? i : j;
  const auto at = [&](int k) {
    const int e = extend_index(pos + k, n, p.boundary);
    const int x = p.along_x ? e : i;
    const int y = p.along_x ? j : e;
    return in[static_cast<std::size_t>(y) * static_cast<std::size_t>(p.width) + static_cast<std::size_t>(x)];
  };
  const double centre = at(0);
  double acc = 0.0;
  for (std::size_t k = 1; k < p.weights.size(); ++k) {
    const int o = static_cast<int>(k);
    acc += p.weights[k] * ((at(-o) - centre) + (at(o) - centre));
  }
  return centre + acc;
}

}  // namespace

namespace serial {

void triangle_jacobians(const TriField& field, std::span<TriangleJacobian> out) {
  for (std::size_t t = 0; t < field.triangle_count(); ++t) out[t] = jacobian_of(field, t);
}

void classify(std::span<const TriangleJacobian> jac, double epsilon, std::span<Sign> out) {
  for (std::size_t t = 0; t < jac.size(); ++t) out[t] = jss::classify(jac[t].det, epsilon);
}

void assign_degenerate(const TriField& field, std::span<const Sign> orientations, DegeneratePolicy policy,
                       std::span<Sign> out) {
  RingScratch scratch(field.vertex_count(), field.triangle_count());
  for (std::size_t t = 0; t < orientations.size(); ++t) {
    out[t] = orientations[t] == Sign::Degenerate
                 ? scratch.resolve(field, orientations, policy, static_cast<TriId>(t))
                 : orientations[t];
  }
}

void separable_pass(const SeparablePass& pass, std::span<const double> in, std::span<double> out) {
  for (int j = 0; j < pass.height; ++j) {
    for (int i = 0; i < pass.width; ++i) {
      out[static_cast<std::size_t>(j) * static_cast<std::size_t>(pass.width) + static_cast<std::size_t>(i)] =
          pass_sample(pass, in, i, j);
    }
  }
}

}  // namespace serial

namespace omp {

void triangle_jacobians(const TriField& field, std::span<TriangleJacobian> out) {
  const auto n = static_cast<std::int64_t>(field.triangle_count());
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < n; ++t) out[static_cast<std::size_t>(t)] = jacobian_of(field, static_cast<std::size_t>(t));
}

void classify(std::span<const TriangleJacobian> jac, double epsilon, std::span<Sign> out) {
  const auto n = static_cast<std::int64_t>(jac.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < n; ++t) {
    out[static_cast<std::size_t>(t)] = jss::classify(jac[static_cast<std::size_t>(t)].det, epsilon);
  }
}

void assign_degenerate(const TriField& field, std::span<const Sign> orientations, DegeneratePolicy policy,
                       std::span<Sign> out) {
  std::vector<TriId> degenerate;
  for (std::size_t t = 0; t < orientations.size(); ++t) {
    out[t] = orientations[t];
    if (orientations[t] == Sign::Degenerate) degenerate.push_back(static_cast<TriId>(t));
  }
  const auto n = static_cast<std::int64_t>(degenerate.size());
  if (n == 0) return;
#pragma omp parallel
  {
    RingScratch scratch(field.vertex_count(), field.triangle_count());
#pragma omp for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < n; ++i) {
      const TriId t = degenerate[static_cast<std::size_t>(i)];
      out[static_cast<std::size_t>(t)] = scratch.resolve(field, orientations, policy, t);
    }
  }
}

void separable_pass(const SeparablePass& pass, std::span<const double> in, std::span<double> out) {
#pragma omp parallel for schedule(static)
  for (int j = 0; j < pass.height; ++j) {
    for (int i = 0; i < pass.width; ++i) {
      out[static_cast<std::size_t>(j) * static_cast<std::size_t>(pass.width) + static_cast<std::size_t>(i)] =
          pass_sample(pass, in, i, j);
    }
  }
}

}  // namespace omp

}  // namespace jss::kernels
