#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "jss/jacobi.hpp"
#include "jss/mesh.hpp"

namespace jss {

using RegionId = std::int32_t;

/// Neighbourhood graph flavours. All merge triangles across non-Jacobi edges;
/// B additionally merges vertex-touching negative triangles, C positive ones,
/// and D vertex-touching triangles with equal sign and equal neighbour sign sum.
enum class GraphVariant { A, B, C, D };

inline constexpr std::array<GraphVariant, 4> kAllVariants{GraphVariant::A, GraphVariant::B, GraphVariant::C,
                                                          GraphVariant::D};

char to_char(GraphVariant v);
/// Accepts "A".."D" in either case; throws std::invalid_argument otherwise.
GraphVariant parse_variant(std::string_view s);

/// B prefers negative, C positive, A and D use the plain majority.
DegeneratePolicy degenerate_policy(GraphVariant v);

struct Region {
  RegionId id = 0;
  Sign sign = Sign::Positive;
  std::vector<TriId> triangles;  ///< ascending
};

struct RegionDecomposition {
  std::vector<RegionId> label;  ///< per triangle
  std::vector<Region> regions;  ///< indexed by id; ids follow the smallest member triangle
};

RegionDecomposition build_regions(const TriField& field, std::span<const Sign> orientations,
                                  const DegenerateAssignment& assignment, GraphVariant variant);

/// Orientations, variant-specific degenerate assignment and regions.
RegionDecomposition decompose(const TriField& field, GraphVariant variant, double epsilon = 0.0);

/// Sum over the point neighbours of t (excluding t) of their effective signs.
int neighbour_sign_sum(const TriField& field, std::span<const Sign> effective, TriId t);

struct RegionNode {
  RegionId id = 0;
  Sign sign = Sign::Positive;
  double domain_area = 0.0;
  double range_area = 0.0;
  double hypervolume = 0.0;
  std::size_t triangle_count = 0;
};

struct NeighborhoodGraph {
  GraphVariant variant = GraphVariant::A;
  std::vector<RegionNode> nodes;               ///< indexed by region id
  std::vector<std::array<RegionId, 2>> edges;  ///< (low, high), sorted, unique
};

NeighborhoodGraph build_graph(const TriField& field, const RegionDecomposition& regions,
                              GraphVariant variant = GraphVariant::A);

/// Region metrics; throw std::out_of_range for an unknown region id.
double region_domain_area(const TriField& field, const RegionDecomposition& regions, RegionId r);
double region_range_area(const TriField& field, const RegionDecomposition& regions, RegionId r);
double region_hypervolume(const TriField& field, const RegionDecomposition& regions, RegionId r);

/// Member triangles of every region whose hypervolume is strictly below t, ascending.
std::vector<TriId> find_collapsible_cells(const NeighborhoodGraph& graph, const RegionDecomposition& regions,
                                          double threshold);

nlohmann::json to_json(const NeighborhoodGraph& graph);
std::string to_dot(const NeighborhoodGraph& graph);

}  // namespace jss
