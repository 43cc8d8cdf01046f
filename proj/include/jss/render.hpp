#pragma once

#include <string>

#include "jss/mesh.hpp"

namespace jss {

struct RenderOptions {
  bool show_jacobi = true;
  double saturation_scale = 1.0;  ///< range area mapped to full saturation, in medians
  double width_px = 800.0;
  double epsilon = 0.0;
};

/// Self-contained SVG: triangles red (positive) or blue (negative) with
/// saturation min(1, range_area / (scale * median non-zero range area));
/// degenerate triangles take their assigned colour at minimum saturation.
/// Jacobi edges are stroked black.
std::string render_svg(const TriField& field, const RenderOptions& options = {});

}  // namespace jss
