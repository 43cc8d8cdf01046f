#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "jss/jacobi.hpp"
#include "jss/mesh.hpp"
#include "jss/region_graph.hpp"

namespace jss {

using MeshEdge = std::array<VertexId, 2>;

/// Line collapse of one triangle edge: both endpoints take `target_value`.
struct CollapseVariant {
  MeshEdge edge{};
  Vec2 target_value;
};

/// Triangles queued for collapsing (the worklist). Membership is O(1).
class CellSet {
 public:
  CellSet() = default;
  explicit CellSet(std::size_t triangle_count) : member_(triangle_count, 0) {}
  CellSet(std::size_t triangle_count, std::span<const TriId> cells);

  bool contains(TriId t) const { return t >= 0 && member_[static_cast<std::size_t>(t)] != 0; }
  bool insert(TriId t);
  bool erase(TriId t);
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  std::vector<TriId> sorted() const;
  std::uint64_t hash() const;

 private:
  std::vector<std::uint8_t> member_;
  std::size_t size_ = 0;
};

/// Number of edge neighbours of c that exist and are not queued.
int cell_neighborhood(const CellSet& cl, const TriField& field, TriId c);

/// Edges of c that may be collapsed given how many of its neighbours are queued:
/// none queued, all three edges; one queued, the edge to it plus mesh-boundary
/// edges; two queued, the two edges towards them. Edges are (low, high).
std::vector<MeshEdge> possible_collapse_variants(const TriField& field, const CellSet& cl, TriId c);

/// Cells the running simplification has already collapsed (degenerate and
/// off the worklist). Moving one of their vertices would reopen them.
using CollapsedCells = std::function<bool(TriId)>;

/// Value options for collapsing `edge` of cell c. The midpoint of the two
/// endpoint values, unless exactly one endpoint is pinned (shared with a
/// collapsed cell other than c), in which case the pinned value. With both
/// endpoints pinned: midpoint, then each endpoint's value.
std::vector<CollapseVariant> collapse_targets(const TriField& field, TriId c, MeshEdge edge,
                                              const CollapsedCells& collapsed = {});

struct VariantScore {
  int flips = 0;     ///< neighbours whose sign crosses Positive <-> Negative
  int reopened = 0;  ///< collapsed cells that would regain a non-zero determinant
  double range_area_delta = 0.0;
  CollapseVariant variant;
};

/// Simulates `variant` and scores the side effects on every triangle incident
/// to either endpoint. Flips only count triangles that are neither c nor
/// queued. The field is not modified.
VariantScore evaluate_variant(const TriField& field, const CellSet& cl, TriId c, const CollapseVariant& variant,
                              double epsilon = 0.0, const CollapsedCells& collapsed = {});

/// Scores the first target option of `edge`.
VariantScore evaluate_variant(const TriField& field, const CellSet& cl, TriId c, MeshEdge edge,
                              double epsilon = 0.0, const CollapsedCells& collapsed = {});

/// Over every target option of every candidate edge: fewest negatively
/// affected cells (flips + reopened), then smallest range area change, then
/// smallest edge ids, then option order.
CollapseVariant find_best_collapse_variant(const TriField& field, const CellSet& cl,
                                           std::span<const MeshEdge> candidates, TriId c, double epsilon = 0.0,
                                           const CollapsedCells& collapsed = {});

void apply_collapse_variant(TriField& field, const CollapseVariant& variant);

/// Orientations of the triangles around an edge, taken just before a collapse.
struct SignSnapshot {
  std::vector<TriId> triangles;  ///< union of both endpoint stars, ascending
  std::vector<Sign> signs;
};

SignSnapshot snapshot_signs(const TriField& field, MeshEdge edge, double epsilon = 0.0);

/// Triangles of the snapshot whose sign went Positive <-> Negative. Becoming
/// degenerate is not a flip.
std::vector<TriId> flipped_cell_neighbors(const TriField& field, const SignSnapshot& before, double epsilon = 0.0);

/// Oscillation bookkeeping for the sweep loop.
class OscillationGuard {
 public:
  OscillationGuard(std::size_t triangle_count, int max_entries = 16, std::size_t window = 64);

  void record_entry(TriId t);
  void record_sweep(const CellSet& cl);
  /// True once a cell entered the worklist more than `max_entries` times or a
  /// worklist snapshot repeated within the window.
  bool oscillated() const { return oscillated_; }

 private:
  std::vector<int> entries_;
  std::deque<std::uint64_t> recent_;
  int max_entries_;
  std::size_t window_;
  bool oscillated_ = false;
};

inline bool cells_oscillated(const OscillationGuard& history) { return history.oscillated(); }

enum class CollapseStatus { Completed, Oscillated, Exhausted };

const char* to_string(CollapseStatus s);

struct CollapseOptions {
  GraphVariant variant = GraphVariant::A;
  double threshold = 0.0;
  double epsilon = 0.0;
  int max_entries = 16;
  std::size_t snapshot_window = 64;
  std::size_t sweep_cap_factor = 10;
};

struct CollapseReport {
  CollapseStatus status = CollapseStatus::Completed;
  std::size_t selected_cells = 0;   ///< initial worklist size
  std::size_t collapsed_cells = 0;  ///< collapse applications
  std::size_t flip_repairs = 0;     ///< flipped cells queued
  std::size_t reopened_cells = 0;   ///< collapsed cells that regained area and were queued again
  std::size_t iterations = 0;       ///< sweeps
  std::vector<TriId> initial_cells;
  std::vector<TriId> residual_cells;
  JacobiMeasures before;
  JacobiMeasures after;
};

/// Collapses every low-hypervolume region of the neighbourhood graph, editing
/// field values in place. Stops when the worklist drains, when the
/// oscillation guard fires, or after sweep_cap_factor * |initial worklist| sweeps.
CollapseReport simplify(TriField& field, const CollapseOptions& options);

nlohmann::json to_json(const CollapseReport& report);

}  // namespace jss
