#pragma once

// Mesh builders and brute-force oracles shared by the unit and acceptance
// suites. Nothing here calls into the code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "jss/jacobi.hpp"
#include "jss/mesh.hpp"
#include "jss/region_graph.hpp"

namespace jss::test {

/// Structured grid whose nodes sit at origin + (i*dx, j*dy), values from fn(x, y).
inline GridField sample_grid(int w, int h, Vec2 origin, Vec2 spacing, const std::function<Vec2(double, double)>& fn) {
  GridField g;
  g.width = w;
  g.height = h;
  g.spacing = spacing;
  g.f.resize(static_cast<std::size_t>(w * h));
  g.g.resize(static_cast<std::size_t>(w * h));
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      const Vec2 v = fn(origin.x + i * spacing.x, origin.y + j * spacing.y);
      g.f[g.index(i, j)] = v.x;
      g.g[g.index(i, j)] = v.y;
    }
  }
  return g;
}

inline TriField grid_mesh(int w, int h, Vec2 origin, Vec2 spacing, const std::function<Vec2(double, double)>& fn) {
  return triangulate_structured(sample_grid(w, h, origin, spacing, fn));
}

/// Jittered grid with random values. Values are small integers when
/// `quantized`, which makes exactly-degenerate triangles common.
inline TriField random_mesh(std::mt19937_64& rng, bool quantized) {
  std::uniform_int_distribution<int> dim(3, 8);
  const int w = dim(rng);
  const int h = dim(rng);
  std::uniform_real_distribution<double> jitter(-0.3, 0.3);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::uniform_int_distribution<int> qval(-2, 2);
  std::vector<Vertex> verts;
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      const bool edge = i == 0 || j == 0 || i == w - 1 || j == h - 1;
      Vec2 p{static_cast<double>(i), static_cast<double>(j)};
      if (!edge) p = p + Vec2{jitter(rng), jitter(rng)};
      const Vec2 v = quantized ? Vec2{static_cast<double>(qval(rng)), static_cast<double>(qval(rng))}
                               : Vec2{val(rng), val(rng)};
      verts.push_back({p, v});
    }
  }
  std::bernoulli_distribution flip(0.5);
  std::vector<Triangle> tris;
  for (int j = 0; j + 1 < h; ++j) {
    for (int i = 0; i + 1 < w; ++i) {
      const VertexId a = j * w + i, b = a + 1, c = a + w, d = c + 1;
      if (flip(rng)) {
        tris.push_back({{a, b, d}});
        tris.push_back({{a, d, c}});
      } else {
        tris.push_back({{a, b, c}});
        tris.push_back({{b, d, c}});
      }
    }
  }
  return TriField(std::move(verts), std::move(tris));
}

inline double shoelace(Vec2 a, Vec2 b, Vec2 c) {
  return 0.5 * std::abs(a.x * b.y - b.x * a.y + b.x * c.y - c.x * b.y + c.x * a.y - a.x * c.y);
}

inline double image_area_oracle(const TriField& field, TriId t) {
  const auto& v = field.triangle(t).v;
  return shoelace(field.vertex(v[0]).value, field.vertex(v[1]).value, field.vertex(v[2]).value);
}

inline double domain_area_oracle(const TriField& field, TriId t) {
  const auto& v = field.triangle(t).v;
  return shoelace(field.vertex(v[0]).position, field.vertex(v[1]).position, field.vertex(v[2]).position);
}

/// Orientation from the sign of the image winding, via long double.
inline Sign sign_oracle(const TriField& field, TriId t) {
  const auto& v = field.triangle(t).v;
  const Vec2 a = field.vertex(v[0]).value, b = field.vertex(v[1]).value, c = field.vertex(v[2]).value;
  const long double o = (static_cast<long double>(b.x) - a.x) * (static_cast<long double>(c.y) - a.y) -
                        (static_cast<long double>(c.x) - a.x) * (static_cast<long double>(b.y) - a.y);
  return o > 0 ? Sign::Positive : o < 0 ? Sign::Negative : Sign::Degenerate;
}

inline bool share_vertex(const TriField& field, TriId a, TriId b) {
  for (VertexId x : field.triangle(a).v) {
    for (VertexId y : field.triangle(b).v) {
      if (x == y) return true;
    }
  }
  return false;
}

inline int shared_vertex_count(const TriField& field, TriId a, TriId b) {
  int n = 0;
  for (VertexId x : field.triangle(a).v) {
    for (VertexId y : field.triangle(b).v) n += x == y;
  }
  return n;
}

/// Jacobi set components by BFS over edges that share an endpoint.
inline std::size_t component_count_bfs(const std::vector<std::array<VertexId, 2>>& edges) {
  std::vector<bool> seen(edges.size(), false);
  std::size_t count = 0;
  for (std::size_t s = 0; s < edges.size(); ++s) {
    if (seen[s]) continue;
    ++count;
    std::queue<std::size_t> q;
    q.push(s);
    seen[s] = true;
    while (!q.empty()) {
      const std::size_t e = q.front();
      q.pop();
      for (std::size_t o = 0; o < edges.size(); ++o) {
        if (seen[o]) continue;
        const auto& a = edges[e];
        const auto& b = edges[o];
        if (a[0] == b[0] || a[0] == b[1] || a[1] == b[0] || a[1] == b[1]) {
          seen[o] = true;
          q.push(o);
        }
      }
    }
  }
  return count;
}

/// Region labels by BFS with the merge rules written out pairwise.
inline std::vector<RegionId> region_labels_bfs(const TriField& field, const std::vector<Sign>& eff,
                                               GraphVariant variant) {
  const auto n = static_cast<TriId>(field.triangle_count());
  std::vector<int> nsum(static_cast<std::size_t>(n), 0);
  for (TriId a = 0; a < n; ++a) {
    for (TriId b = 0; b < n; ++b) {
      if (a != b && share_vertex(field, a, b)) nsum[static_cast<std::size_t>(a)] += to_int(eff[static_cast<std::size_t>(b)]);
    }
  }
  const auto joined = [&](TriId a, TriId b) {
    const Sign sa = eff[static_cast<std::size_t>(a)];
    const Sign sb = eff[static_cast<std::size_t>(b)];
    const int shared = shared_vertex_count(field, a, b);
    if (shared == 2 && sa == sb) return true;
    if (shared == 0) return false;
    switch (variant) {
      case GraphVariant::A:
        return false;
      case GraphVariant::B:
        return sa == Sign::Negative && sb == Sign::Negative;
      case GraphVariant::C:
        return sa == Sign::Positive && sb == Sign::Positive;
      case GraphVariant::D:
        return sa == sb && nsum[static_cast<std::size_t>(a)] == nsum[static_cast<std::size_t>(b)];
    }
    return false;
  };
  std::vector<RegionId> label(static_cast<std::size_t>(n), -1);
  RegionId next = 0;
  for (TriId s = 0; s < n; ++s) {
    if (label[static_cast<std::size_t>(s)] >= 0) continue;
    std::queue<TriId> q;
    q.push(s);
    label[static_cast<std::size_t>(s)] = next;
    while (!q.empty()) {
      const TriId a = q.front();
      q.pop();
      for (TriId b = 0; b < n; ++b) {
        if (label[static_cast<std::size_t>(b)] < 0 && joined(a, b)) {
          label[static_cast<std::size_t>(b)] = next;
          q.push(b);
        }
      }
    }
    ++next;
  }
  return label;
}

/// Smooth, orientation-preserving base map with a few vertex impulses that
/// punch small negative islands into it.
struct NoisyField {
  TriField field;
  std::vector<VertexId> impulses;
};

inline NoisyField impulse_noise_field(std::uint64_t seed, int size = 24, int impulses = 4) {
  std::mt19937_64 rng(seed);
  GridField g = sample_grid(size, size, {0.0, 0.0}, {1.0, 1.0}, [](double x, double y) {
    return Vec2{x + 0.3 * std::sin(0.21 * y), y + 0.3 * std::sin(0.17 * x)};
  });
  std::uniform_int_distribution<int> pos(3, size - 4);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979323846);
  std::uniform_real_distribution<double> mag(1.2, 2.2);
  NoisyField out;
  std::vector<std::pair<int, int>> used;
  for (int attempt = 0; static_cast<int>(used.size()) < impulses; ++attempt) {
    if (attempt > 10000) throw std::invalid_argument("grid too small for that many separated impulses");
    const int i = pos(rng), j = pos(rng);
    bool close = false;
    for (auto [ui, uj] : used) close |= std::abs(ui - i) < 5 && std::abs(uj - j) < 5;
    if (close) continue;
    used.push_back({i, j});
    const double a = angle(rng), m = mag(rng);
    g.f[g.index(i, j)] += m * std::cos(a);
    g.g[g.index(i, j)] += m * std::sin(a);
    out.impulses.push_back(static_cast<VertexId>(g.index(i, j)));
  }
  out.field = triangulate_structured(g);
  return out;
}

/// 5x5 grid of jittered identity values, frozen from a random search. With
/// variant A and reflip_threshold(), collapses keep knocking cells back onto
/// the worklist and only the oscillation guard ends the run.
inline GridField reflip_pair_grid() {
  static const double v[25][2] = {
      {0.25, -0.35}, {1.7, 0.4}, {2.0, 0.25}, {3.6, -0.9}, {4.55, 0.55},
      {0.85, 1.25}, {0.35, 1.65}, {2.7, 1.45}, {3.55, 1.55}, {4.35, 0.6},
      {-0.6, 1.85}, {1.45, 2.5}, {1.25, 2.75}, {2.65, 1.35}, {4.85, 1.2},
      {-0.45, 3.45}, {1.8, 3.55}, {1.65, 3.2}, {2.75, 2.65}, {3.95, 3.05},
      {0.25, 4.85}, {1.95, 3.55}, {2.7, 3.65}, {3.2, 5.0}, {3.95, 3.4}
  };
  GridField g;
  g.width = 5;
  g.height = 5;
  for (const auto& x : v) {
    g.f.push_back(x[0]);
    g.g.push_back(x[1]);
  }
  return g;
}

/// Just above the second-largest region hypervolume.
inline double reflip_threshold(const TriField& field) {
  const NeighborhoodGraph g = build_graph(field, decompose(field, GraphVariant::A));
  std::vector<double> hv;
  for (const auto& n : g.nodes) hv.push_back(n.hypervolume);
  std::sort(hv.begin(), hv.end());
  return hv[hv.size() - 2] * 1.01;
}

}  // namespace jss::test
