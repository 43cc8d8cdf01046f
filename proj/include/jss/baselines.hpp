#pragma once

#include <vector>

#include "jss/kernels.hpp"
#include "jss/mesh.hpp"

namespace jss {

using kernels::Boundary;

enum class FilterKind { Binomial, Gaussian };

struct FilterSpec {
  FilterKind kind = FilterKind::Binomial;
  int radius = 1;            ///< binomial: taps on each side
  double sigma = 1.0;        ///< gaussian: standard deviation in grid cells
  double truncation = 3.0;   ///< gaussian: kernel half-width in multiples of sigma
  Boundary boundary = Boundary::Clamp;
};

/// Half kernel w[0..r] (w[0] centre) of the binomial filter, C(2r, r+k) / 4^r.
std::vector<double> binomial_weights(int radius);

/// Half kernel of the sampled Gaussian, normalised over the full symmetric
/// support. `max_radius` caps the half-width (grid extent).
std::vector<double> gaussian_weights(double sigma, double truncation, int max_radius);

/// Applies the separable filter to f and g independently. Throws
/// std::invalid_argument for an invalid spec.
GridField binomial_filter(const GridField& grid, const FilterSpec& spec);
GridField gaussian_filter(const GridField& grid, const FilterSpec& spec);
GridField apply_filter(const GridField& grid, const FilterSpec& spec);

/// Serial reference for the same filter (used to check the parallel path).
GridField apply_filter_serial(const GridField& grid, const FilterSpec& spec);

/// True when truncation * sigma reaches past the larger grid extent.
bool gaussian_exceeds_grid(const GridField& grid, const FilterSpec& spec);

/// Loop subdivision of the (f, g) values. New vertices sit at the geometric
/// edge midpoints and old vertices keep their positions, so the planar domain
/// is unchanged; each step splits every triangle into four.
TriField loop_subdivide(const TriField& field, int steps);

}  // namespace jss
