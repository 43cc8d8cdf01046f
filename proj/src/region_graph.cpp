#include "jss/region_graph.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "jss/union_find.hpp"

namespace jss {

char to_char(GraphVariant v) { return static_cast<char>('A' + static_cast<int>(v)); }

GraphVariant parse_variant(std::string_view s) {
  if (s.size() == 1) {
    const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    if (c >= 'A' && c <= 'D') return static_cast<GraphVariant>(c - 'A');
  }
  throw std::invalid_argument("unknown graph variant '" + std::string(s) + "' (expected A, B, C or D)");
}

DegeneratePolicy degenerate_policy(GraphVariant v) {
  switch (v) {
    case GraphVariant::B:
      return DegeneratePolicy::PreferNegative;
    case GraphVariant::C:
      return DegeneratePolicy::PreferPositive;
    default:
      return DegeneratePolicy::Majority;
  }
}

int neighbour_sign_sum(const TriField& field, std::span<const Sign> effective, TriId t) {
  int sum = 0;
  for (TriId n : field.point_neighbors(t)) sum += to_int(effective[static_cast<std::size_t>(n)]);
  return sum;
}

RegionDecomposition build_regions(const TriField& field, std::span<const Sign> orientations,
                                  const DegenerateAssignment& assignment, GraphVariant variant) {
  const auto eff = effective_signs(orientations, assignment);
  const std::size_t n = field.triangle_count();
  UnionFind uf(n);

  for (std::size_t t = 0; t < n; ++t) {
    for (TriId nb : field.edge_neighbors(static_cast<TriId>(t))) {
      if (nb > static_cast<TriId>(t) && eff[t] == eff[static_cast<std::size_t>(nb)]) uf.unite(static_cast<TriId>(t), nb);
    }
  }

  if (variant == GraphVariant::B || variant == GraphVariant::C) {
    const Sign wanted = variant == GraphVariant::B ? Sign::Negative : Sign::Positive;
    for (std::size_t v = 0; v < field.vertex_count(); ++v) {
      TriId first = kNoTriangle;
      for (TriId t : field.vertex_star(static_cast<VertexId>(v))) {
        if (eff[static_cast<std::size_t>(t)] != wanted) continue;
        if (first == kNoTriangle) {
          first = t;
        } else {
          uf.unite(first, t);
        }
      }
    }
  } else if (variant == GraphVariant::D) {
    std::vector<int> nsum(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t t = 0; t < static_cast<std::int64_t>(n); ++t) {
      nsum[static_cast<std::size_t>(t)] = neighbour_sign_sum(field, eff, static_cast<TriId>(t));
    }
    std::vector<std::pair<std::pair<int, int>, TriId>> keyed;
    for (std::size_t v = 0; v < field.vertex_count(); ++v) {
      keyed.clear();
      for (TriId t : field.vertex_star(static_cast<VertexId>(v))) {
        keyed.push_back({{to_int(eff[static_cast<std::size_t>(t)]), nsum[static_cast<std::size_t>(t)]}, t});
      }
      std::sort(keyed.begin(), keyed.end());
      for (std::size_t i = 1; i < keyed.size(); ++i) {
        if (keyed[i].first == keyed[i - 1].first) uf.unite(keyed[i - 1].second, keyed[i].second);
      }
    }
  }

  RegionDecomposition out;
  out.label.assign(n, -1);
  std::vector<RegionId> root_label(n, -1);
  for (std::size_t t = 0; t < n; ++t) {
    const auto root = static_cast<std::size_t>(uf.find(static_cast<TriId>(t)));
    if (root_label[root] < 0) {
      root_label[root] = static_cast<RegionId>(out.regions.size());
      out.regions.push_back({root_label[root], eff[t], {}});
    }
    out.label[t] = root_label[root];
    out.regions[static_cast<std::size_t>(root_label[root])].triangles.push_back(static_cast<TriId>(t));
  }
  return out;
}

RegionDecomposition decompose(const TriField& field, GraphVariant variant, double epsilon) {
  const auto signs = orientations(field, epsilon);
  const auto assignment = assign_degenerate(field, signs, degenerate_policy(variant));
  return build_regions(field, signs, assignment, variant);
}

NeighborhoodGraph build_graph(const TriField& field, const RegionDecomposition& regions, GraphVariant variant) {
  const auto jac = jacobians(field);
  NeighborhoodGraph g;
  g.variant = variant;
  g.nodes.resize(regions.regions.size());
  for (const Region& r : regions.regions) {
    RegionNode& node = g.nodes[static_cast<std::size_t>(r.id)];
    node.id = r.id;
    node.sign = r.sign;
    node.triangle_count = r.triangles.size();
    for (TriId t : r.triangles) {
      const double a = domain_area(field, t);
      const double ra = jac[static_cast<std::size_t>(t)].range_area;
      node.domain_area += a;
      node.range_area += ra;
      node.hypervolume += a * ra;
    }
  }
  for (std::size_t t = 0; t < field.triangle_count(); ++t) {
    const RegionId a = regions.label[t];
    for (TriId nb : field.edge_neighbors(static_cast<TriId>(t))) {
      if (nb <= static_cast<TriId>(t)) continue;
      const RegionId b = regions.label[static_cast<std::size_t>(nb)];
      if (a != b) g.edges.push_back({std::min(a, b), std::max(a, b)});
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  return g;
}

namespace {

const Region& region_at(const RegionDecomposition& regions, RegionId r) {
  if (r < 0 || static_cast<std::size_t>(r) >= regions.regions.size()) {
    throw std::out_of_range("unknown region id " + std::to_string(r));
  }
  return regions.regions[static_cast<std::size_t>(r)];
}

}  // namespace

double region_domain_area(const TriField& field, const RegionDecomposition& regions, RegionId r) {
  double sum = 0.0;
  for (TriId t : region_at(regions, r).triangles) sum += domain_area(field, t);
  return sum;
}

double region_range_area(const TriField& field, const RegionDecomposition& regions, RegionId r) {
  double sum = 0.0;
  for (TriId t : region_at(regions, r).triangles) sum += jacobian(field, t).range_area;
  return sum;
}

double region_hypervolume(const TriField& field, const RegionDecomposition& regions, RegionId r) {
  double sum = 0.0;
  for (TriId t : region_at(regions, r).triangles) sum += domain_area(field, t) * jacobian(field, t).range_area;
  return sum;
}

std::vector<TriId> find_collapsible_cells(const NeighborhoodGraph& graph, const RegionDecomposition& regions,
                                          double threshold) {
  std::vector<TriId> out;
  for (const RegionNode& node : graph.nodes) {
    if (!(node.hypervolume < threshold)) continue;
    const auto& tris = regions.regions[static_cast<std::size_t>(node.id)].triangles;
    out.insert(out.end(), tris.begin(), tris.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {
const char* sign_text(Sign s) { return s == Sign::Negative ? "-" : s == Sign::Positive ? "+" : "0"; }
}  // namespace

nlohmann::json to_json(const NeighborhoodGraph& graph) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const RegionNode& n : graph.nodes) {
    nodes.push_back({{"id", n.id},
                     {"sign", sign_text(n.sign)},
                     {"triangles", n.triangle_count},
                     {"domain_area", n.domain_area},
                     {"range_area", n.range_area},
                     {"hv", n.hypervolume}});
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : graph.edges) edges.push_back({e[0], e[1]});
  return {{"variant", std::string(1, to_char(graph.variant))}, {"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

std::string to_dot(const NeighborhoodGraph& graph) {
  std::ostringstream out;
  out << "graph variant_" << to_char(graph.variant) << " {\n";
  char hv[32];
  for (const RegionNode& n : graph.nodes) {
    std::snprintf(hv, sizeof hv, "%.6g", n.hypervolume);
    out << "  " << n.id << " [label=\"" << n.id << '|' << sign_text(n.sign) << '|' << hv << "\"];\n";
  }
  for (const auto& e : graph.edges) out << "  " << e[0] << " -- " << e[1] << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace jss
