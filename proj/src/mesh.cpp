#include "jss/mesh.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace jss {

InputError::InputError(const std::string& what, std::size_t line)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

TriField::TriField(std::vector<Vertex> vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  validate_and_orient();
  build_adjacency();
}

void TriField::validate_and_orient() {
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Vertex& v = vertices_[i];
    if (!std::isfinite(v.position.x) || !std::isfinite(v.position.y)) {
      throw InputError("vertex " + std::to_string(i) + " has a non-finite position");
    }
    if (!std::isfinite(v.value.x) || !std::isfinite(v.value.y)) {
      throw InputError("vertex " + std::to_string(i) + " has a non-finite value");
    }
  }
  const auto n = static_cast<VertexId>(vertices_.size());
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    auto& v = triangles_[t].v;
    for (VertexId id : v) {
      if (id < 0 || id >= n) {
        throw InputError("triangle " + std::to_string(t) + " references vertex " + std::to_string(id) +
                         " out of range");
      }
    }
    if (v[0] == v[1] || v[1] == v[2] || v[0] == v[2]) {
      throw InputError("degenerate triangle " + std::to_string(t) + " (repeated vertex index)");
    }
    const double o = orient2(vertex(v[0]).position, vertex(v[1]).position, vertex(v[2]).position);
    if (o == 0.0) {
      throw InputError("degenerate triangle " + std::to_string(t) + " (zero domain area)");
    }
    if (o < 0.0) std::swap(v[1], v[2]);
  }
}

void TriField::build_adjacency() {
  struct HalfEdge {
    std::uint64_t key;
    TriId tri;
    int side;
  };
  std::vector<HalfEdge> edges;
  edges.reserve(triangles_.size() * 3);
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& v = triangles_[t].v;
    for (int k = 0; k < 3; ++k) {
      auto a = static_cast<std::uint64_t>(v[k]);
      auto b = static_cast<std::uint64_t>(v[(k + 1) % 3]);
      if (a > b) std::swap(a, b);
      edges.push_back({(a << 32) | b, static_cast<TriId>(t), k});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const HalfEdge& l, const HalfEdge& r) {
    return l.key != r.key ? l.key < r.key : l.tri < r.tri;
  });

  adjacency_.assign(triangles_.size(), {kNoTriangle, kNoTriangle, kNoTriangle});
  for (std::size_t i = 0; i < edges.size();) {
    std::size_t j = i;
    while (j < edges.size() && edges[j].key == edges[i].key) ++j;
    if (j - i > 2) {
      throw InputError("non-manifold edge (" + std::to_string(edges[i].key >> 32) + ", " +
                       std::to_string(edges[i].key & 0xffffffffu) + ") shared by " + std::to_string(j - i) +
                       " triangles");
    }
    if (j - i == 2) {
      const HalfEdge& a = edges[i];
      const HalfEdge& b = edges[i + 1];
      adjacency_[static_cast<std::size_t>(a.tri)][static_cast<std::size_t>(a.side)] = b.tri;
      adjacency_[static_cast<std::size_t>(b.tri)][static_cast<std::size_t>(b.side)] = a.tri;
    }
    i = j;
  }

  star_offsets_.assign(vertices_.size() + 1, 0);
  for (const Triangle& t : triangles_) {
    for (VertexId v : t.v) ++star_offsets_[static_cast<std::size_t>(v) + 1];
  }
  for (std::size_t i = 1; i < star_offsets_.size(); ++i) star_offsets_[i] += star_offsets_[i - 1];
  star_triangles_.resize(triangles_.size() * 3);
  std::vector<std::int32_t> cursor(star_offsets_.begin(), star_offsets_.end() - 1);
  // Triangles are visited in ascending order, so every star comes out sorted.
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    for (VertexId v : triangles_[t].v) {
      star_triangles_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(v)]++)] = static_cast<TriId>(t);
    }
  }
}

std::span<const TriId> TriField::vertex_star(VertexId v) const {
  const auto b = static_cast<std::size_t>(star_offsets_[static_cast<std::size_t>(v)]);
  const auto e = static_cast<std::size_t>(star_offsets_[static_cast<std::size_t>(v) + 1]);
  return std::span<const TriId>(star_triangles_).subspan(b, e - b);
}

std::vector<TriId> TriField::point_neighbors(TriId t) const {
  std::vector<TriId> out;
  for (VertexId v : triangle(t).v) {
    for (TriId s : vertex_star(v)) {
      if (s != t) out.push_back(s);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void TriField::set_value(VertexId v, Vec2 value) { vertices_[static_cast<std::size_t>(v)].value = value; }

double domain_area(const TriField& field, TriId t) {
  const auto& v = field.triangle(t).v;
  return 0.5 * orient2(field.vertex(v[0]).position, field.vertex(v[1]).position, field.vertex(v[2]).position);
}

double total_domain_area(const TriField& field) {
  double sum = 0.0;
  for (std::size_t t = 0; t < field.triangle_count(); ++t) sum += domain_area(field, static_cast<TriId>(t));
  return sum;
}

TriField triangulate_structured(int width, int height, Vec2 spacing, std::span<const double> f,
                                std::span<const double> g) {
  if (width < 2 || height < 2) {
    throw InputError("structured grid needs at least 2x2 nodes, got " + std::to_string(width) + "x" +
                     std::to_string(height));
  }
  const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (f.size() != n || g.size() != n) {
    throw InputError("size mismatch: grid has " + std::to_string(n) + " nodes but f has " +
                     std::to_string(f.size()) + " and g has " + std::to_string(g.size()) + " samples");
  }
  std::vector<Vertex> vertices(n);
  for (int j = 0; j < height; ++j) {
    for (int i = 0; i < width; ++i) {
      const auto idx = static_cast<std::size_t>(j) * static_cast<std::size_t>(width) + static_cast<std::size_t>(i);
      vertices[idx] = {{i * spacing.x, j * spacing.y}, {f[idx], g[idx]}};
    }
  }
  std::vector<Triangle> triangles;
  triangles.reserve(2 * static_cast<std::size_t>(width - 1) * static_cast<std::size_t>(height - 1));
  for (int j = 0; j + 1 < height; ++j) {
    for (int i = 0; i + 1 < width; ++i) {
      const VertexId v00 = j * width + i;
      const VertexId v10 = v00 + 1;
      const VertexId v01 = v00 + width;
      const VertexId v11 = v01 + 1;
      triangles.push_back({{v00, v10, v11}});
      triangles.push_back({{v00, v11, v01}});
    }
  }
  return TriField(std::move(vertices), std::move(triangles));
}

TriField triangulate_structured(const GridField& grid) {
  return triangulate_structured(grid.width, grid.height, grid.spacing, grid.f, grid.g);
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-empty line, split on whitespace. Throws at end of input.
  std::vector<std::string> next(const char* expecting) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      std::istringstream ss(line);
      std::vector<std::string> tokens;
      for (std::string tok; ss >> tok;) tokens.push_back(std::move(tok));
      if (!tokens.empty()) return tokens;
    }
    throw InputError(std::string("unexpected end of file, expected ") + expecting, line_no_ + 1);
  }

  std::size_t line() const { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

double parse_double(const std::string& s, std::size_t line) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw InputError("invalid number '" + s + "'", line);
  if (!std::isfinite(v)) throw InputError("non-finite number '" + s + "'", line);
  return v;
}

long long parse_int(const std::string& s, std::size_t line) {
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') throw InputError("invalid integer '" + s + "'", line);
  return v;
}

void expect_header(LineReader& r, const char* magic) {
  auto tok = r.next("header");
  if (tok.size() != 2 || tok[0] != magic || tok[1] != "1") {
    throw InputError(std::string("expected header '") + magic + " 1'", r.line());
  }
}

void print_double(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

TriField read_bsf(std::istream& in) {
  LineReader r(in);
  expect_header(r, "bsf");
  auto counts = r.next("vertex/triangle counts");
  if (counts.size() != 4 || counts[0] != "vertices" || counts[2] != "triangles") {
    throw InputError("expected 'vertices <N> triangles <M>'", r.line());
  }
  const long long nv = parse_int(counts[1], r.line());
  const long long nt = parse_int(counts[3], r.line());
  if (nv < 0 || nt < 0 || nv > INT32_MAX || nt > INT32_MAX) throw InputError("invalid counts", r.line());

  std::vector<Vertex> vertices(static_cast<std::size_t>(nv));
  for (auto& v : vertices) {
    auto tok = r.next("vertex line");
    if (tok.size() != 4) throw InputError("vertex line needs 4 numbers '<x> <y> <f> <g>'", r.line());
    v.position = {parse_double(tok[0], r.line()), parse_double(tok[1], r.line())};
    v.value = {parse_double(tok[2], r.line()), parse_double(tok[3], r.line())};
  }
  std::vector<Triangle> triangles(static_cast<std::size_t>(nt));
  for (auto& t : triangles) {
    auto tok = r.next("triangle line");
    if (tok.size() != 3) throw InputError("triangle line needs 3 vertex indices", r.line());
    for (int k = 0; k < 3; ++k) {
      const long long id = parse_int(tok[static_cast<std::size_t>(k)], r.line());
      if (id < 0 || id >= nv) throw InputError("vertex index " + tok[static_cast<std::size_t>(k)] + " out of range", r.line());
      t.v[static_cast<std::size_t>(k)] = static_cast<VertexId>(id);
    }
    if (t.v[0] == t.v[1] || t.v[1] == t.v[2] || t.v[0] == t.v[2]) {
      throw InputError("degenerate triangle (repeated vertex index)", r.line());
    }
  }
  return TriField(std::move(vertices), std::move(triangles));
}

void write_bsf(const TriField& field, std::ostream& out) {
  out << "bsf 1\n" << "vertices " << field.vertex_count() << " triangles " << field.triangle_count() << '\n';
  for (const Vertex& v : field.vertices()) {
    print_double(out, v.position.x);
    out << ' ';
    print_double(out, v.position.y);
    out << ' ';
    print_double(out, v.value.x);
    out << ' ';
    print_double(out, v.value.y);
    out << '\n';
  }
  for (const Triangle& t : field.triangles()) out << t.v[0] << ' ' << t.v[1] << ' ' << t.v[2] << '\n';
}

TriField load_bsf(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_bsf(in);
}

void save_bsf(const TriField& field, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_bsf(field, out);
  finish_output(out, path);
}

GridField read_sgf(std::istream& in) {
  LineReader r(in);
  expect_header(r, "sgf");
  auto dims = r.next("grid line");
  if (dims.size() != 5 || dims[0] != "grid") throw InputError("expected 'grid <W> <H> <dx> <dy>'", r.line());
  GridField grid;
  const long long w = parse_int(dims[1], r.line());
  const long long h = parse_int(dims[2], r.line());
  if (w < 2 || h < 2 || w > 1 << 20 || h > 1 << 20) throw InputError("grid dimensions must be >= 2", r.line());
  grid.width = static_cast<int>(w);
  grid.height = static_cast<int>(h);
  grid.spacing = {parse_double(dims[3], r.line()), parse_double(dims[4], r.line())};
  if (!(grid.spacing.x > 0.0) || !(grid.spacing.y > 0.0)) throw InputError("grid spacing must be positive", r.line());
  const auto n = static_cast<std::size_t>(w * h);
  grid.f.resize(n);
  grid.g.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto tok = r.next("sample line");
    if (tok.size() != 2) throw InputError("sample line needs 2 numbers '<f> <g>'", r.line());
    grid.f[i] = parse_double(tok[0], r.line());
    grid.g[i] = parse_double(tok[1], r.line());
  }
  return grid;
}

void write_sgf(const GridField& grid, std::ostream& out) {
  out << "sgf 1\n" << "grid " << grid.width << ' ' << grid.height << ' ';
  print_double(out, grid.spacing.x);
  out << ' ';
  print_double(out, grid.spacing.y);
  out << '\n';
  for (std::size_t i = 0; i < grid.f.size(); ++i) {
    print_double(out, grid.f[i]);
    out << ' ';
    print_double(out, grid.g[i]);
    out << '\n';
  }
}

GridField load_sgf(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_sgf(in);
}

void save_sgf(const GridField& grid, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_sgf(grid, out);
  finish_output(out, path);
}

FileKind detect_file_kind(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::string magic;
  in >> magic;
  if (magic == "bsf") return FileKind::Bsf;
  if (magic == "sgf") return FileKind::Sgf;
  throw InputError("unrecognized file format (expected 'bsf 1' or 'sgf 1' header)", 1);
}

}  // namespace jss
