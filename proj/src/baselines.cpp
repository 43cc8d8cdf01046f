#include "jss/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace jss {

std::vector<double> binomial_weights(int radius) {
  if (radius < 1) throw std::invalid_argument("binomial radius must be >= 1");
  const int n = 2 * radius;
  // Row n of Pascal's triangle, exact in double for any sane radius.
  std::vector<double> row(static_cast<std::size_t>(n) + 1, 0.0);
  row[0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    for (int k = i; k > 0; --k) row[static_cast<std::size_t>(k)] += row[static_cast<std::size_t>(k - 1)];
  }
  const double scale = std::ldexp(1.0, -n);
  std::vector<double> w(static_cast<std::size_t>(radius) + 1);
  for (int k = 0; k <= radius; ++k) w[static_cast<std::size_t>(k)] = row[static_cast<std::size_t>(radius + k)] * scale;
  return w;
}

std::vector<double> gaussian_weights(double sigma, double truncation, int max_radius) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian sigma must be > 0");
  if (!(truncation >= 1.0)) throw std::invalid_argument("gaussian truncation must be >= 1");
  const double reach = std::ceil(truncation * sigma);
  const int radius = std::max(0, static_cast<int>(std::min<double>(reach, std::max(max_radius, 0))));
  std::vector<double> w(static_cast<std::size_t>(radius) + 1);
  double total = 0.0;
  for (int k = 0; k <= radius; ++k) {
    const double x = static_cast<double>(k) / sigma;
    w[static_cast<std::size_t>(k)] = std::exp(-0.5 * x * x);
    total += k == 0 ? w[0] : 2.0 * w[static_cast<std::size_t>(k)];
  }
  for (double& v : w) v /= total;
  return w;
}

namespace {

void check_grid(const GridField& grid) {
  const auto n = static_cast<std::size_t>(grid.width) * static_cast<std::size_t>(grid.height);
  if (grid.width < 1 || grid.height < 1 || grid.f.size() != n || grid.g.size() != n) {
    throw std::invalid_argument("malformed grid field");
  }
}

using PassFn = void (*)(const kernels::SeparablePass&, std::span<const double>, std::span<double>);

GridField run_separable(const GridField& grid, const FilterSpec& spec, PassFn pass_fn) {
  check_grid(grid);
  std::vector<double> wx;
  std::vector<double> wy;
  if (spec.kind == FilterKind::Binomial) {
    wx = wy = binomial_weights(spec.radius);
  } else {
    wx = gaussian_weights(spec.sigma, spec.truncation, grid.width - 1);
    wy = gaussian_weights(spec.sigma, spec.truncation, grid.height - 1);
  }
  GridField out = grid;
  std::vector<double> tmp(grid.f.size());
  const kernels::SeparablePass px{grid.width, grid.height, wx, spec.boundary, true};
  const kernels::SeparablePass py{grid.width, grid.height, wy, spec.boundary, false};
  for (auto member : {&GridField::f, &GridField::g}) {
    pass_fn(px, grid.*member, tmp);
    pass_fn(py, tmp, out.*member);
  }
  return out;
}

}  // namespace

GridField binomial_filter(const GridField& grid, const FilterSpec& spec) {
  FilterSpec s = spec;
  s.kind = FilterKind::Binomial;
  return run_separable(grid, s, kernels::omp::separable_pass);
}

GridField gaussian_filter(const GridField& grid, const FilterSpec& spec) {
  FilterSpec s = spec;
  s.kind = FilterKind::Gaussian;
  return run_separable(grid, s, kernels::omp::separable_pass);
}

GridField apply_filter(const GridField& grid, const FilterSpec& spec) {
  return run_separable(grid, spec, kernels::omp::separable_pass);
}

GridField apply_filter_serial(const GridField& grid, const FilterSpec& spec) {
  return run_separable(grid, spec, kernels::serial::separable_pass);
}

bool gaussian_exceeds_grid(const GridField& grid, const FilterSpec& spec) {
  return spec.truncation * spec.sigma > static_cast<double>(std::max(grid.width, grid.height));
}

namespace {

Vec2 affine_step(Vec2 base, std::initializer_list<std::pair<double, Vec2>> terms) {
  // base + sum w (p - base): reproduces constants exactly.
  Vec2 acc{};
  for (const auto& [w, p] : terms) acc = acc + w * (p - base);
  return base + acc;
}

TriField loop_step(const TriField& field) {
  const std::size_t nv = field.vertex_count();
  const std::size_t nt = field.triangle_count();

  std::vector<Vertex> verts(field.vertices().begin(), field.vertices().end());
  std::unordered_map<std::uint64_t, VertexId> edge_vertex;
  edge_vertex.reserve(nt * 2);
  std::vector<std::array<VertexId, 3>> mids(nt);

  // Boundary neighbours per old vertex; -1 marks "more than two".
  std::vector<std::array<VertexId, 2>> rim(nv, {kNoTriangle, kNoTriangle});
  std::vector<int> rim_count(nv, 0);

  for (std::size_t t = 0; t < nt; ++t) {
    const auto& v = field.triangles()[t].v;
    const auto& nb = field.edge_neighbors(static_cast<TriId>(t));
    for (std::size_t k = 0; k < 3; ++k) {
      const VertexId a = v[k];
      const VertexId b = v[(k + 1) % 3];
      const std::uint64_t key = (static_cast<std::uint64_t>(std::min(a, b)) << 32) | static_cast<std::uint32_t>(std::max(a, b));
      auto [it, fresh] = edge_vertex.try_emplace(key, static_cast<VertexId>(verts.size()));
      mids[t][k] = it->second;
      if (!fresh) continue;

      const Vertex& va = field.vertex(a);
      const Vertex& vb = field.vertex(b);
      Vertex m;
      m.position = 0.5 * (va.position + vb.position);
      if (nb[k] == kNoTriangle) {
        m.value = 0.5 * (va.value + vb.value);
        for (VertexId end : {a, b}) {
          auto& c = rim_count[static_cast<std::size_t>(end)];
          if (c < 2) rim[static_cast<std::size_t>(end)][static_cast<std::size_t>(c)] = end == a ? b : a;
          ++c;
        }
      } else {
        const Vec2 c = field.vertex(v[(k + 2) % 3]).value;
        Vec2 d{};
        for (VertexId w : field.triangle(nb[k]).v) {
          if (w != a && w != b) d = field.vertex(w).value;
        }
        m.value = affine_step(va.value, {{0.375, va.value}, {0.375, vb.value}, {0.125, c}, {0.125, d}});
      }
      verts.push_back(m);
    }
  }

  std::vector<VertexId> ring;
  for (std::size_t i = 0; i < nv; ++i) {
    const Vec2 v = field.vertices()[i].value;
    if (rim_count[i] == 2) {
      const Vec2 l = field.vertex(rim[i][0]).value;
      const Vec2 r = field.vertex(rim[i][1]).value;
      verts[i].value = affine_step(v, {{0.125, l}, {0.125, r}});
      continue;
    }
    if (rim_count[i] != 0) continue;  // non-manifold corner: keep the sample
    ring.clear();
    for (TriId t : field.vertex_star(static_cast<VertexId>(i))) {
      for (VertexId w : field.triangle(t).v) {
        if (w != static_cast<VertexId>(i)) ring.push_back(w);
      }
    }
    std::sort(ring.begin(), ring.end());
    ring.erase(std::unique(ring.begin(), ring.end()), ring.end());
    if (ring.empty()) continue;
    const double k = static_cast<double>(ring.size());
    const double c = 0.375 + 0.25 * std::cos(2.0 * std::numbers::pi / k);
    const double beta = (0.625 - c * c) / k;
    Vec2 acc{};
    for (VertexId w : ring) acc = acc + (field.vertex(w).value - v);
    verts[i].value = v + beta * acc;
  }

  std::vector<Triangle> tris;
  tris.reserve(nt * 4);
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& v = field.triangles()[t].v;
    const auto& m = mids[t];
    tris.push_back({{v[0], m[0], m[2]}});
    tris.push_back({{v[1], m[1], m[0]}});
    tris.push_back({{v[2], m[2], m[1]}});
    tris.push_back({{m[0], m[1], m[2]}});
  }
  return TriField(std::move(verts), std::move(tris));
}

}  // namespace

TriField loop_subdivide(const TriField& field, int steps) {
  if (steps < 0) throw std::invalid_argument("subdivision steps must be >= 0");
  TriField out = field;
  for (int s = 0; s < steps; ++s) out = loop_step(out);
  return out;
}

}  // namespace jss
