#include "jss/collapse.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <tuple>

namespace jss {

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

MeshEdge ordered(VertexId a, VertexId b) { return {std::min(a, b), std::max(a, b)}; }

std::vector<TriId> incident_triangles(const TriField& field, MeshEdge edge) {
  const auto a = field.vertex_star(edge[0]);
  const auto b = field.vertex_star(edge[1]);
  std::vector<TriId> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Vec2 midpoint(Vec2 a, Vec2 b) { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }

}  // namespace

CellSet::CellSet(std::size_t triangle_count, std::span<const TriId> cells) : member_(triangle_count, 0) {
  for (TriId t : cells) insert(t);
}

bool CellSet::insert(TriId t) {
  auto& m = member_[static_cast<std::size_t>(t)];
  if (m) return false;
  m = 1;
  ++size_;
  return true;
}

bool CellSet::erase(TriId t) {
  auto& m = member_[static_cast<std::size_t>(t)];
  if (!m) return false;
  m = 0;
  --size_;
  return true;
}

std::vector<TriId> CellSet::sorted() const {
  std::vector<TriId> out;
  out.reserve(size_);
  for (std::size_t t = 0; t < member_.size() && out.size() < size_; ++t) {
    if (member_[t]) out.push_back(static_cast<TriId>(t));
  }
  return out;
}

std::uint64_t CellSet::hash() const {
  std::uint64_t h = mix(size_);
  for (std::size_t t = 0, seen = 0; t < member_.size() && seen < size_; ++t) {
    if (!member_[t]) continue;
    h = mix(h ^ t);
    ++seen;
  }
  return h;
}

int cell_neighborhood(const CellSet& cl, const TriField& field, TriId c) {
  int n = 0;
  for (TriId nb : field.edge_neighbors(c)) {
    if (nb != kNoTriangle && !cl.contains(nb)) ++n;
  }
  return n;
}

std::vector<MeshEdge> possible_collapse_variants(const TriField& field, const CellSet& cl, TriId c) {
  const auto& v = field.triangle(c).v;
  const auto& nb = field.edge_neighbors(c);
  int queued = 0;
  for (TriId n : nb) queued += cl.contains(n) ? 1 : 0;

  std::vector<MeshEdge> out;
  for (std::size_t k = 0; k < 3; ++k) {
    const bool towards_queued = cl.contains(nb[k]);
    const bool boundary = nb[k] == kNoTriangle;
    const bool take = queued == 0 || towards_queued || (queued == 1 && boundary);
    if (take) out.push_back(ordered(v[k], v[(k + 1) % 3]));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<CollapseVariant> collapse_targets(const TriField& field, TriId c, MeshEdge edge,
                                              const CollapsedCells& collapsed) {
  edge = ordered(edge[0], edge[1]);
  const Vec2 a = field.vertex(edge[0]).value;
  const Vec2 b = field.vertex(edge[1]).value;
  std::vector<CollapseVariant> out{{edge, midpoint(a, b)}};
  if (!collapsed) return out;
  const auto pinned = [&](VertexId v) {
    const auto star = field.vertex_star(v);
    return std::any_of(star.begin(), star.end(), [&](TriId t) { return t != c && collapsed(t); });
  };
  const bool pa = pinned(edge[0]);
  const bool pb = pinned(edge[1]);
  if (pa && !pb) out[0].target_value = a;
  if (pb && !pa) out[0].target_value = b;
  if (pa && pb && a != b) {
    out.push_back({edge, a});
    out.push_back({edge, b});
  }
  return out;
}

VariantScore evaluate_variant(const TriField& field, const CellSet& cl, TriId c, const CollapseVariant& variant,
                              double epsilon, const CollapsedCells& collapsed) {
  VariantScore score;
  score.variant = variant;
  const MeshEdge edge = variant.edge;

  for (TriId t : incident_triangles(field, edge)) {
    const auto& v = field.triangle(t).v;
    std::array<Vec2, 3> before{};
    std::array<Vec2, 3> after{};
    for (std::size_t k = 0; k < 3; ++k) {
      before[k] = field.vertex(v[k]).value;
      after[k] = (v[k] == edge[0] || v[k] == edge[1]) ? variant.target_value : before[k];
    }
    const double old_orient = image_orient(before[0], before[1], before[2]);
    const double new_orient = image_orient(after[0], after[1], after[2]);
    score.range_area_delta += 0.5 * std::abs(new_orient) - 0.5 * std::abs(old_orient);

    if (t == c || cl.contains(t)) continue;
    const Sign s0 = classify(jacobian_det(field, t, before[0], before[1], before[2]), epsilon);
    const Sign s1 = classify(jacobian_det(field, t, after[0], after[1], after[2]), epsilon);
    if (s0 != Sign::Degenerate && s1 != Sign::Degenerate && s0 != s1) ++score.flips;
    if (collapsed && s1 != Sign::Degenerate && collapsed(t)) ++score.reopened;
  }
  return score;
}

VariantScore evaluate_variant(const TriField& field, const CellSet& cl, TriId c, MeshEdge edge, double epsilon,
                              const CollapsedCells& collapsed) {
  return evaluate_variant(field, cl, c, collapse_targets(field, c, edge, collapsed).front(), epsilon, collapsed);
}

CollapseVariant find_best_collapse_variant(const TriField& field, const CellSet& cl,
                                           std::span<const MeshEdge> candidates, TriId c, double epsilon,
                                           const CollapsedCells& collapsed) {
  using Key = std::tuple<int, double, VertexId, VertexId, std::size_t>;
  std::optional<std::pair<Key, CollapseVariant>> best;
  for (const MeshEdge& edge : candidates) {
    const auto options = collapse_targets(field, c, edge, collapsed);
    for (std::size_t i = 0; i < options.size(); ++i) {
      const VariantScore s = evaluate_variant(field, cl, c, options[i], epsilon, collapsed);
      const Key key{s.flips + s.reopened, s.range_area_delta, s.variant.edge[0], s.variant.edge[1], i};
      if (!best || key < best->first) best.emplace(key, s.variant);
    }
  }
  return best->second;
}

void apply_collapse_variant(TriField& field, const CollapseVariant& variant) {
  field.set_value(variant.edge[0], variant.target_value);
  field.set_value(variant.edge[1], variant.target_value);
}

SignSnapshot snapshot_signs(const TriField& field, MeshEdge edge, double epsilon) {
  SignSnapshot snap;
  snap.triangles = incident_triangles(field, edge);
  snap.signs.reserve(snap.triangles.size());
  for (TriId t : snap.triangles) snap.signs.push_back(classify(jacobian_det(field, t), epsilon));
  return snap;
}

std::vector<TriId> flipped_cell_neighbors(const TriField& field, const SignSnapshot& before, double epsilon) {
  std::vector<TriId> out;
  for (std::size_t i = 0; i < before.triangles.size(); ++i) {
    const Sign was = before.signs[i];
    const Sign now = classify(jacobian_det(field, before.triangles[i]), epsilon);
    if (was != Sign::Degenerate && now != Sign::Degenerate && was != now) out.push_back(before.triangles[i]);
  }
  return out;
}

OscillationGuard::OscillationGuard(std::size_t triangle_count, int max_entries, std::size_t window)
    : entries_(triangle_count, 0), max_entries_(max_entries), window_(window) {}

void OscillationGuard::record_entry(TriId t) {
  if (++entries_[static_cast<std::size_t>(t)] > max_entries_) oscillated_ = true;
}

void OscillationGuard::record_sweep(const CellSet& cl) {
  const std::uint64_t h = cl.hash();
  if (std::find(recent_.begin(), recent_.end(), h) != recent_.end()) oscillated_ = true;
  recent_.push_back(h);
  if (recent_.size() > window_) recent_.pop_front();
}

const char* to_string(CollapseStatus s) {
  switch (s) {
    case CollapseStatus::Completed:
      return "Completed";
    case CollapseStatus::Oscillated:
      return "Oscillated";
    case CollapseStatus::Exhausted:
      return "Exhausted";
  }
  return "?";
}

CollapseReport simplify(TriField& field, const CollapseOptions& options) {
  const double eps = options.epsilon;
  const std::size_t n = field.triangle_count();
  CollapseReport report;
  report.before = measure(field, eps);

  const auto signs = orientations(field, eps);
  const auto assignment = assign_degenerate(field, signs, degenerate_policy(options.variant));
  const auto regions = build_regions(field, signs, assignment, options.variant);
  const auto graph = build_graph(field, regions, options.variant);
  report.initial_cells = find_collapsible_cells(graph, regions, options.threshold);
  report.selected_cells = report.initial_cells.size();

  std::vector<double> det(n);
  for (std::size_t t = 0; t < n; ++t) det[t] = jacobian_det(field, static_cast<TriId>(t));
  const auto degenerate = [&](TriId t) { return classify(det[static_cast<std::size_t>(t)], eps) == Sign::Degenerate; };

  CellSet cl(n);
  std::vector<std::uint8_t> ever_queued(n, 0);
  OscillationGuard guard(n, options.max_entries, options.snapshot_window);
  for (TriId t : report.initial_cells) {
    ever_queued[static_cast<std::size_t>(t)] = 1;
    guard.record_entry(t);
    if (!degenerate(t)) cl.insert(t);
  }
  guard.record_sweep(cl);

  const CollapsedCells collapsed = [&](TriId t) {
    return ever_queued[static_cast<std::size_t>(t)] && !cl.contains(t) && degenerate(t);
  };

  const std::size_t cap = options.sweep_cap_factor * std::max<std::size_t>(report.initial_cells.size(), 1);
  std::vector<std::pair<int, TriId>> order;
  while (!cl.empty()) {
    if (report.iterations >= cap) {
      report.status = CollapseStatus::Exhausted;
      break;
    }
    ++report.iterations;

    // Border cells (most neighbours outside the worklist) go first.
    order.clear();
    for (TriId t : cl.sorted()) order.push_back({-cell_neighborhood(cl, field, t), t});
    std::sort(order.begin(), order.end());

    for (const auto& [unused, c] : order) {
      if (!cl.contains(c)) continue;
      if (degenerate(c)) {
        cl.erase(c);
        continue;
      }
      if (cell_neighborhood(cl, field, c) == 0) continue;

      const auto candidates = possible_collapse_variants(field, cl, c);
      const CollapseVariant best = find_best_collapse_variant(field, cl, candidates, c, eps, collapsed);
      const SignSnapshot snap = snapshot_signs(field, best.edge, eps);
      apply_collapse_variant(field, best);
      for (TriId t : snap.triangles) det[static_cast<std::size_t>(t)] = jacobian_det(field, t);
      ++report.collapsed_cells;
      cl.erase(c);

      for (TriId f : flipped_cell_neighbors(field, snap, eps)) {
        ever_queued[static_cast<std::size_t>(f)] = 1;
        if (cl.insert(f)) {
          guard.record_entry(f);
          ++report.flip_repairs;
        }
      }
      // A previously collapsed cell that lost its zero determinant through a
      // shared vertex goes back on the worklist.
      for (TriId t : snap.triangles) {
        if (ever_queued[static_cast<std::size_t>(t)] && !degenerate(t) && cl.insert(t)) {
          guard.record_entry(t);
          ++report.reopened_cells;
        }
      }
    }

    guard.record_sweep(cl);
    if (!cl.empty() && cells_oscillated(guard)) {
      report.status = CollapseStatus::Oscillated;
      break;
    }
  }

  report.residual_cells = cl.sorted();
  report.after = measure(field, eps);
  return report;
}

nlohmann::json to_json(const CollapseReport& report) {
  return {{"status", to_string(report.status)},
          {"selected_cells", report.selected_cells},
          {"collapsed_cells", report.collapsed_cells},
          {"flip_repairs", report.flip_repairs},
          {"reopened_cells", report.reopened_cells},
          {"iterations", report.iterations},
          {"residual_cells", report.residual_cells},
          {"before", to_json(report.before)},
          {"after", to_json(report.after)}};
}

}  // namespace jss
