#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "jss/baselines.hpp"
#include "support.hpp"

using namespace jss;

namespace {

GridField constant_grid(int w, int h, double f, double g) {
  return test::sample_grid(w, h, {0, 0}, {1, 1}, [=](double, double) { return Vec2{f, g}; });
}

GridField noise_grid(std::uint64_t seed, int w, int h) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  return test::sample_grid(w, h, {0, 0}, {1, 1}, [&](double, double) { return Vec2{n(rng), n(rng)}; });
}

int reflect101(int i, int n) {
  while (i < 0 || i >= n) i = i < 0 ? -i : 2 * (n - 1) - i;
  return i;
}

// Full 2D sum over the outer product of 1D taps, no separability.
std::vector<double> dense_convolution(const std::vector<double>& x, int w, int h, const std::vector<double>& taps,
                                      Boundary b) {
  const int r = static_cast<int>(taps.size()) / 2;
  std::vector<double> out(x.size(), 0.0);
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      double s = 0.0;
      for (int dj = -r; dj <= r; ++dj) {
        for (int di = -r; di <= r; ++di) {
          int ii = i + di, jj = j + dj;
          if (b == Boundary::Clamp) {
            ii = std::clamp(ii, 0, w - 1);
            jj = std::clamp(jj, 0, h - 1);
          } else {
            ii = reflect101(ii, w);
            jj = reflect101(jj, h);
          }
          s += taps[static_cast<std::size_t>(di + r)] * taps[static_cast<std::size_t>(dj + r)] *
               x[static_cast<std::size_t>(jj * w + ii)];
        }
      }
      out[static_cast<std::size_t>(j * w + i)] = s;
    }
  }
  return out;
}

std::vector<double> pascal_taps(int r) {
  std::vector<double> t{1.0};
  for (int i = 0; i < 2 * r; ++i) {
    std::vector<double> n(t.size() + 1, 0.0);
    for (std::size_t k = 0; k < t.size(); ++k) {
      n[k] += t[k];
      n[k + 1] += t[k];
    }
    t = n;
  }
  double sum = 0.0;
  for (double v : t) sum += v;
  for (double& v : t) v /= sum;
  return t;
}

std::vector<double> gauss_taps(double sigma, int r) {
  std::vector<double> t;
  double sum = 0.0;
  for (int k = -r; k <= r; ++k) {
    t.push_back(std::exp(-(k * k) / (2.0 * sigma * sigma)));
    sum += t.back();
  }
  for (double& v : t) v /= sum;
  return t;
}

double variance(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size());
}

std::string bsf_text(const TriField& f) {
  std::ostringstream out;
  write_bsf(f, out);
  return out.str();
}

}  // namespace

TEST_SUITE("baselines") {

TEST_CASE("binomial taps") {
  CHECK(binomial_weights(1) == std::vector<double>{0.5, 0.25});
  CHECK(binomial_weights(2) == std::vector<double>{6.0 / 16, 4.0 / 16, 1.0 / 16});
  CHECK_THROWS_AS(binomial_weights(0), std::invalid_argument);
  for (int r = 1; r <= 6; ++r) {
    const auto w = binomial_weights(r);
    const auto full = pascal_taps(r);
    for (int k = 0; k <= r; ++k) CHECK(w[static_cast<std::size_t>(k)] == full[static_cast<std::size_t>(r + k)]);
  }
}

TEST_CASE("gaussian taps") {
  const auto w = gaussian_weights(1.0, 3.0, 100);
  REQUIRE(w.size() == 4);
  double total = w[0];
  for (std::size_t k = 1; k < w.size(); ++k) total += 2.0 * w[k];
  CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gaussian_weights(1000.0, 3.0, 449).size() == 450);
  CHECK(gaussian_weights(0.4, 3.0, 100).size() == 3);
  CHECK_THROWS_AS(gaussian_weights(0.0, 3.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_weights(1.0, 0.5, 5), std::invalid_argument);
}

TEST_CASE("constant fields pass through bit for bit") {
  for (double c : {0.0, 1.0, -3.7, 0.1, 12345.678901}) {
    const GridField g = constant_grid(17, 9, c, -c / 3.0);
    for (Boundary b : {Boundary::Clamp, Boundary::Mirror}) {
      for (int r = 1; r <= 3; ++r) {
        FilterSpec s;
        s.radius = r;
        s.boundary = b;
        const GridField out = binomial_filter(g, s);
        CHECK(out.f == g.f);
        CHECK(out.g == g.g);
      }
      for (double sigma : {0.5, 1.0, 2.5, 1000.0}) {
        FilterSpec s;
        s.kind = FilterKind::Gaussian;
        s.sigma = sigma;
        s.boundary = b;
        const GridField out = gaussian_filter(g, s);
        CHECK(out.f == g.f);
        CHECK(out.g == g.g);
      }
    }
  }
}

TEST_CASE("binomial impulse response") {
  GridField g = constant_grid(5, 5, 0.0, 0.0);
  g.f[g.index(2, 2)] = 1.0;
  const GridField out = binomial_filter(g, FilterSpec{});
  const double k[3] = {0.25, 0.5, 0.25};
  for (int j = 0; j < 5; ++j) {
    for (int i = 0; i < 5; ++i) {
      const bool inside = std::abs(i - 2) <= 1 && std::abs(j - 2) <= 1;
      const double want = inside ? k[i - 1] * k[j - 1] : 0.0;
      CHECK(out.f[g.index(i, j)] == want);
      CHECK(out.g[g.index(i, j)] == 0.0);
    }
  }
}

TEST_CASE("gaussian impulse response") {
  GridField g = constant_grid(15, 15, 0.0, 0.0);
  g.f[g.index(7, 7)] = 1.0;
  FilterSpec s;
  s.kind = FilterKind::Gaussian;
  const GridField out = gaussian_filter(g, s);
  const auto oracle = dense_convolution(g.f, 15, 15, gauss_taps(1.0, 3), Boundary::Clamp);
  for (std::size_t i = 0; i < oracle.size(); ++i) CHECK(std::abs(out.f[i] - oracle[i]) <= 1e-12);
}

TEST_CASE("filters match dense convolution with either boundary") {
  const GridField g = noise_grid(3, 11, 8);
  for (Boundary b : {Boundary::Clamp, Boundary::Mirror}) {
    for (int r = 1; r <= 3; ++r) {
      FilterSpec s;
      s.radius = r;
      s.boundary = b;
      const GridField out = binomial_filter(g, s);
      const auto of = dense_convolution(g.f, 11, 8, pascal_taps(r), b);
      const auto og = dense_convolution(g.g, 11, 8, pascal_taps(r), b);
      for (std::size_t i = 0; i < of.size(); ++i) {
        CHECK(std::abs(out.f[i] - of[i]) <= 1e-12);
        CHECK(std::abs(out.g[i] - og[i]) <= 1e-12);
      }
    }
    FilterSpec s;
    s.kind = FilterKind::Gaussian;
    s.sigma = 1.3;
    s.boundary = b;
    const GridField out = gaussian_filter(g, s);
    // half-width ceil(3 * 1.3) = 4, still inside the 8-row grid
    const auto of = dense_convolution(g.f, 11, 8, gauss_taps(1.3, 4), b);
    for (std::size_t i = 0; i < of.size(); ++i) CHECK(std::abs(out.f[i] - of[i]) <= 1e-12);
  }
}

TEST_CASE("linear ramp survives away from the border") {
  const GridField g = test::sample_grid(12, 9, {0, 0}, {1, 1}, [](double x, double y) { return Vec2{x, 2.0 * y - x}; });
  for (Boundary b : {Boundary::Mirror, Boundary::Clamp}) {
    FilterSpec s;
    s.radius = 2;
    s.boundary = b;
    const GridField out = binomial_filter(g, s);
    for (int j = 2; j < 7; ++j) {
      for (int i = 2; i < 10; ++i) {
        CHECK(std::abs(out.f[g.index(i, j)] - g.f[g.index(i, j)]) <= 1e-12);
        CHECK(std::abs(out.g[g.index(i, j)] - g.g[g.index(i, j)]) <= 1e-12);
      }
    }
  }
}

TEST_CASE("smoothing white noise lowers its variance") {
  const GridField g = noise_grid(99, 40, 30);
  FilterSpec b;
  CHECK(variance(binomial_filter(g, b).f) < variance(g.f));
  FilterSpec s;
  s.kind = FilterKind::Gaussian;
  s.sigma = 2.0;
  CHECK(variance(gaussian_filter(g, s).g) < variance(g.g));
}

TEST_CASE("gaussian wider than the grid") {
  const GridField g = constant_grid(450, 200, 0.0, 0.0);
  FilterSpec s;
  s.kind = FilterKind::Gaussian;
  s.sigma = 1000.0;
  CHECK(gaussian_exceeds_grid(g, s));
  s.sigma = 1.0;
  CHECK_FALSE(gaussian_exceeds_grid(g, s));
}

TEST_CASE("apply_filter dispatches on kind") {
  const GridField g = noise_grid(5, 9, 9);
  FilterSpec s;
  s.kind = FilterKind::Gaussian;
  s.sigma = 0.8;
  CHECK(apply_filter(g, s).f == gaussian_filter(g, s).f);
  s.kind = FilterKind::Binomial;
  CHECK(apply_filter(g, s).f == binomial_filter(g, s).f);
}

TEST_CASE("loop subdivision") {
  std::mt19937_64 rng(12);
  const TriField f = test::random_mesh(rng, false);

  CHECK(bsf_text(loop_subdivide(f, 0)) == bsf_text(f));
  CHECK_THROWS_AS(loop_subdivide(f, -1), std::invalid_argument);

  const TriField one = loop_subdivide(f, 1);
  CHECK(one.triangle_count() == 4 * f.triangle_count());
  const TriField two = loop_subdivide(f, 2);
  CHECK(two.triangle_count() == 16 * f.triangle_count());
  const double a0 = total_domain_area(f);
  CHECK(std::abs(total_domain_area(two) - a0) <= 1e-10 * a0);

  const TriField small = test::grid_mesh(3, 3, {0, 0}, {1, 1}, [](double x, double y) { return Vec2{x, y}; });
  CHECK(loop_subdivide(small, 4).triangle_count() == 256 * small.triangle_count());

  // original vertices keep their positions and ids
  for (VertexId v = 0; v < static_cast<VertexId>(f.vertex_count()); ++v) {
    CHECK(two.vertex(v).position == f.vertex(v).position);
  }
}

TEST_CASE("loop subdivision keeps constants") {
  const TriField f = test::grid_mesh(5, 4, {0, 0}, {1, 1}, [](double, double) { return Vec2{0.3, -7.1}; });
  const TriField s = loop_subdivide(f, 3);
  for (const Vertex& v : s.vertices()) CHECK(v.value == Vec2{0.3, -7.1});
}

TEST_CASE("loop subdivision splits a nearly one-dimensional field into more components") {
  // a long bar whose values vary mostly along x, with a little noise: most
  // cells are close to degenerate, the way strain along a tensile bar is
  std::mt19937_64 rng(0);
  std::normal_distribution<double> n(0.0, 1.0);
  const TriField bar = test::grid_mesh(40, 10, {0, 0}, {1, 1}, [&](double x, double) {
    return Vec2{x + 0.05 * n(rng), 0.02 * x * x + 0.01 * n(rng)};
  });
  const JacobiMeasures before = measure(bar);
  const TriField fine = loop_subdivide(bar, 4);
  CHECK(fine.triangle_count() == 256 * bar.triangle_count());
  const JacobiMeasures after = measure(fine);
  CHECK(after.components > before.components);
}

}  // TEST_SUITE
