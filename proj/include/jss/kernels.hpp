#pragma once

// Data-parallel inner loops. Each kernel has a plain serial version kept as
// the reference the OpenMP version is tested against; both write identical
// bits for identical inputs.

#include <span>

#include "jss/jacobi.hpp"
#include "jss/mesh.hpp"

namespace jss::kernels {

enum class Boundary { Clamp, Mirror };

/// Index of sample i (possibly outside [0, n)) after boundary extension.
inline int extend_index(int i, int n, Boundary b) {
  if (i >= 0 && i < n) return i;
  if (n == 1) return 0;
  if (b == Boundary::Clamp) return i < 0 ? 0 : n - 1;
  const int period = 2 * (n - 1);
  int m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - m;
}

/// 1D pass of a symmetric kernel w[0..r] (w[0] is the centre tap) over a
/// row-major width x height array, along x when `along_x` is set, else y.
/// Evaluated as x + sum w_k (x_k - x) so that constant input is reproduced bit for bit.
struct SeparablePass {
  int width = 0;
  int height = 0;
  std::span<const double> weights;
  Boundary boundary = Boundary::Clamp;
  bool along_x = true;
};

namespace serial {
void triangle_jacobians(const TriField& field, std::span<TriangleJacobian> out);
void classify(std::span<const TriangleJacobian> jac, double epsilon, std::span<Sign> out);
void assign_degenerate(const TriField& field, std::span<const Sign> orientations, DegeneratePolicy policy,
                       std::span<Sign> out);
void separable_pass(const SeparablePass& pass, std::span<const double> in, std::span<double> out);
}  // namespace serial

namespace omp {
void triangle_jacobians(const TriField& field, std::span<TriangleJacobian> out);
void classify(std::span<const TriangleJacobian> jac, double epsilon, std::span<Sign> out);
void assign_degenerate(const TriField& field, std::span<const Sign> orientations, DegeneratePolicy policy,
                       std::span<Sign> out);
void separable_pass(const SeparablePass& pass, std::span<const double> in, std::span<double> out);
}  // namespace omp

}  // namespace jss::kernels
