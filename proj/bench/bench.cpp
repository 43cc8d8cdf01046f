// Serial vs OpenMP timings for the data-parallel kernels.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#include "CLI11.hpp"
#include "jss/baselines.hpp"
#include "jss/jacobi.hpp"
#include "jss/kernels.hpp"
#include "jss/mesh.hpp"

using namespace jss;

namespace {

// quantised values leave a good share of triangles with det == 0
GridField bench_grid(int nx, int ny, std::uint64_t seed) {
  GridField g;
  g.width = nx;
  g.height = ny;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.3);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      g.f.push_back(std::round(4 * (std::sin(0.05 * i) * std::cos(0.07 * j) + noise(rng))) / 4);
      g.g.push_back(std::round(4 * (std::cos(0.04 * i + 0.03 * j) + noise(rng))) / 4);
    }
  return g;
}

double best_ms(int reps, const std::function<void()>& body) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-20s %10.3f %10.3f %8.2fx\n", name, serial, parallel, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"jss_bench: serial vs OpenMP kernel timings"};
  int nx = 1000, ny = 1000, reps = 5, threads = 0;
  app.add_option("--nx", nx, "grid width")->check(CLI::PositiveNumber);
  app.add_option("--ny", ny, "grid height")->check(CLI::PositiveNumber);
  app.add_option("--reps", reps, "repetitions, best is reported")->check(CLI::PositiveNumber);
  app.add_option("--threads", threads, "OpenMP threads (0 = runtime default)");
  CLI11_PARSE(app, argc, argv);
  if (threads > 0) omp_set_num_threads(threads);

  const GridField grid = bench_grid(nx, ny, 7);
  const TriField field = triangulate_structured(grid);
  const std::size_t n = field.triangle_count();
  std::vector<TriangleJacobian> jac(n);
  std::vector<Sign> signs(n), assigned(n);
  kernels::serial::triangle_jacobians(field, jac);
  kernels::serial::classify(jac, 0.0, signs);
  const auto degenerate = std::count(signs.begin(), signs.end(), Sign::Degenerate);

  std::printf("%d x %d grid, %zu triangles (%td degenerate), %d threads, best of %d\n", nx, ny, n, degenerate,
              omp_get_max_threads(), reps);
  std::printf("%-20s %10s %10s %9s\n", "kernel", "serial ms", "omp ms", "speedup");

  row("triangle_jacobians", best_ms(reps, [&] { kernels::serial::triangle_jacobians(field, jac); }),
      best_ms(reps, [&] { kernels::omp::triangle_jacobians(field, jac); }));
  row("classify", best_ms(reps, [&] { kernels::serial::classify(jac, 0.0, signs); }),
      best_ms(reps, [&] { kernels::omp::classify(jac, 0.0, signs); }));
  row("assign_degenerate",
      best_ms(reps, [&] { kernels::serial::assign_degenerate(field, signs, DegeneratePolicy::Majority, assigned); }),
      best_ms(reps, [&] { kernels::omp::assign_degenerate(field, signs, DegeneratePolicy::Majority, assigned); }));

  FilterSpec binomial;
  binomial.radius = 3;
  FilterSpec gaussian;
  gaussian.kind = FilterKind::Gaussian;
  gaussian.sigma = 4.0;
  gaussian.boundary = Boundary::Mirror;
  row("binomial r=3", best_ms(reps, [&] { apply_filter_serial(grid, binomial); }),
      best_ms(reps, [&] { apply_filter(grid, binomial); }));
  row("gaussian sigma=4", best_ms(reps, [&] { apply_filter_serial(grid, gaussian); }),
      best_ms(reps, [&] { apply_filter(grid, gaussian); }));
  return 0;
}
