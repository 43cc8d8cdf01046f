#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace jss {

using VertexId = std::int32_t;
using TriId = std::int32_t;

inline constexpr TriId kNoTriangle = -1;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }

/// A domain sample: where it sits in the plane and the (f, g) pair measured there.
struct Vertex {
  Vec2 position;
  Vec2 value;
};

struct Triangle {
  std::array<VertexId, 3> v{};
};

/// Malformed or invalid input. `line()` is 0 when the problem is not tied to a line.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what, std::size_t line = 0);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Triangulated planar domain carrying a bivariate piecewise-linear field.
///
/// Construction validates the mesh (finite coordinates, distinct in-range
/// indices, non-zero domain area, at most two triangles per edge) and
/// rewinds clockwise triangles to counter-clockwise. Edge k of a triangle is
/// (v[k], v[(k+1)%3]); `edge_neighbors(t)[k]` is the triangle across it or
/// kNoTriangle on the boundary.
///
/// Only the vertex values are mutable after construction.
class TriField {
 public:
  TriField() = default;
  TriField(std::vector<Vertex> vertices, std::vector<Triangle> triangles);

  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t triangle_count() const noexcept { return triangles_.size(); }

  std::span<const Vertex> vertices() const noexcept { return vertices_; }
  std::span<const Triangle> triangles() const noexcept { return triangles_; }
  const Vertex& vertex(VertexId v) const { return vertices_[static_cast<std::size_t>(v)]; }
  const Triangle& triangle(TriId t) const { return triangles_[static_cast<std::size_t>(t)]; }

  const std::array<TriId, 3>& edge_neighbors(TriId t) const {
    return adjacency_[static_cast<std::size_t>(t)];
  }

  /// Triangles incident to vertex v, ascending.
  std::span<const TriId> vertex_star(VertexId v) const;

  /// Triangles sharing at least one vertex with t, excluding t, ascending.
  std::vector<TriId> point_neighbors(TriId t) const;

  void set_value(VertexId v, Vec2 value);

 private:
  void validate_and_orient();
  void build_adjacency();

  std::vector<Vertex> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<std::array<TriId, 3>> adjacency_;
  std::vector<std::int32_t> star_offsets_;
  std::vector<TriId> star_triangles_;
};

/// Twice the signed area of (a, b, c); positive for counter-clockwise order.
inline double orient2(Vec2 a, Vec2 b, Vec2 c) {
  return (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
}

double domain_area(const TriField& field, TriId t);
double total_domain_area(const TriField& field);

/// Row-major structured grid with two samples per node (x varies fastest).
struct GridField {
  int width = 0;
  int height = 0;
  Vec2 spacing{1.0, 1.0};
  std::vector<double> f;
  std::vector<double> g;

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(width) + static_cast<std::size_t>(i);
  }
};

/// Splits each quad along its lower-left to upper-right diagonal.
TriField triangulate_structured(int width, int height, Vec2 spacing, std::span<const double> f,
                                std::span<const double> g);
TriField triangulate_structured(const GridField& grid);

TriField read_bsf(std::istream& in);
void write_bsf(const TriField& field, std::ostream& out);
TriField load_bsf(const std::filesystem::path& path);
void save_bsf(const TriField& field, const std::filesystem::path& path);

GridField read_sgf(std::istream& in);
void write_sgf(const GridField& grid, std::ostream& out);
GridField load_sgf(const std::filesystem::path& path);
void save_sgf(const GridField& grid, const std::filesystem::path& path);

enum class FileKind { Bsf, Sgf };

/// Sniffs the header line. Throws InputError for anything else.
FileKind detect_file_kind(const std::filesystem::path& path);

}  // namespace jss
