#include "jss/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "jss/jacobi.hpp"

namespace jss {

namespace {

constexpr double kMinSaturation = 0.15;

void append(std::string& out, const char* fmt, auto... args) {
  char buf[160];
  const int n = std::snprintf(buf, sizeof buf, fmt, args...);
  out.append(buf, static_cast<std::size_t>(std::max(n, 0)));
}

}  // namespace

std::string render_svg(const TriField& field, const RenderOptions& options) {
  const auto jac = jacobians(field);
  std::vector<Sign> signs(jac.size());
  for (std::size_t t = 0; t < jac.size(); ++t) signs[t] = orientation(jac[t], options.epsilon);
  const auto assignment = assign_degenerate(field, signs);
  const auto eff = effective_signs(signs, assignment);

  std::vector<double> nonzero;
  for (const auto& j : jac) {
    if (j.range_area > 0.0) nonzero.push_back(j.range_area);
  }
  double median = 1.0;
  if (!nonzero.empty()) {
    auto mid = nonzero.begin() + static_cast<std::ptrdiff_t>(nonzero.size() / 2);
    std::nth_element(nonzero.begin(), mid, nonzero.end());
    median = *mid;
  }
  const double full = std::max(options.saturation_scale * median, std::numeric_limits<double>::min());

  double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
  double x1 = -x0, y1 = -x0;
  for (const Vertex& v : field.vertices()) {
    x0 = std::min(x0, v.position.x);
    x1 = std::max(x1, v.position.x);
    y0 = std::min(y0, v.position.y);
    y1 = std::max(y1, v.position.y);
  }
  if (field.vertex_count() == 0) x0 = y0 = x1 = y1 = 0.0;
  const double extent = std::max(x1 - x0, 1e-300);
  const double scale = options.width_px / extent;
  const double height_px = std::max(1.0, (y1 - y0) * scale);
  const auto px = [&](Vec2 p) { return Vec2{(p.x - x0) * scale, (y1 - p.y) * scale}; };

  std::string out;
  out.reserve(field.triangle_count() * 96 + 256);
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  append(out, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.3f %.3f\">\n",
         options.width_px, height_px, options.width_px, height_px);
  out += "<g stroke-width=\"0.3\">\n";
  for (std::size_t t = 0; t < field.triangle_count(); ++t) {
    const double s = signs[t] == Sign::Degenerate
                         ? kMinSaturation
                         : std::clamp(jac[t].range_area / full, kMinSaturation, 1.0);
    const int fade = static_cast<int>(std::lround(255.0 * (1.0 - s)));
    const bool positive = eff[t] == Sign::Positive;
    const int r = positive ? 255 : fade;
    const int b = positive ? fade : 255;
    const auto& v = field.triangles()[t].v;
    const Vec2 a = px(field.vertex(v[0]).position);
    const Vec2 bb = px(field.vertex(v[1]).position);
    const Vec2 c = px(field.vertex(v[2]).position);
    append(out, "<path d=\"M%.3f %.3fL%.3f %.3fL%.3f %.3fZ\" fill=\"#%02x%02x%02x\" stroke=\"#%02x%02x%02x\"/>\n",
           a.x, a.y, bb.x, bb.y, c.x, c.y, r, fade, b, r, fade, b);
  }
  out += "</g>\n";
  if (options.show_jacobi) {
    const JacobiSet js = extract_jacobi_set(field, signs, assignment);
    out += "<g stroke=\"#000000\" stroke-width=\"1.5\" stroke-linecap=\"round\" fill=\"none\">\n";
    for (const auto& e : js.edges) {
      const Vec2 a = px(field.vertex(e[0]).position);
      const Vec2 b = px(field.vertex(e[1]).position);
      append(out, "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\"/>\n", a.x, a.y, b.x, b.y);
    }
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace jss
