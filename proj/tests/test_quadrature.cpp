#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fracspace/grid.hpp"
#include "fracspace/quadrature.hpp"
#include "fracspace/types.hpp"

using namespace fracspace;

namespace {

double integrate(const NodeSet& ns, double (*fn)(double)) {
  double acc = 0;
  for (std::size_t i = 0; i < ns.nodes.size(); ++i) acc += ns.weights[i] * fn(ns.nodes[i]);
  return acc;
}

}  // namespace

TEST_CASE("integer log2 helpers") {
  CHECK(ilog2_floor(8.0) == 3);
  CHECK(ilog2_floor(7.99) == 2);
  CHECK(ilog2_floor(0.25) == -2);
  CHECK(ilog2_floor(0.2499) == -3);
  CHECK(ilog2_ceil(8.0) == 3);
  CHECK(ilog2_ceil(8.01) == 4);
  CHECK(ilog2_ceil(0.25) == -2);
}

TEST_CASE("gauss-legendre rule hits polynomial exactness degree") {
  std::vector<double> x, w;
  gauss_legendre(12, x, w);
  REQUIRE(x.size() == 12);
  double wsum = 0, p22 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    wsum += w[i];
    p22 += w[i] * std::pow(x[i], 22);
  }
  CHECK(std::abs(wsum - 2.0) < 1e-14);
  CHECK(std::abs(p22 - 2.0 / 23) < 1e-14);  // degree 2*12-1 = 23 covers x^22
  for (std::size_t i = 0; i + 1 < x.size(); ++i) CHECK(x[i] < x[i + 1]);
}

TEST_CASE("panel rules integrate smooth functions") {
  const NodeSet lin = gl_panels({0.0, 1.0, 2.0}, 8);
  CHECK(std::abs(integrate(lin, [](double z) { return std::cos(z); }) - std::sin(2.0)) <
        1e-13);
  const NodeSet lg = gl_log_panels({1.0, std::exp(1.0)}, 8);
  CHECK(std::abs(integrate(lg, [](double z) { return 1.0 / z; }) - 1.0) < 1e-14);
  const NodeSet oct = gl_log_octaves(-3, 4, 10);
  const double lo = std::ldexp(1.0, -3), hi = std::ldexp(1.0, 4);
  const double cube = (hi * hi * hi - lo * lo * lo) / 3;
  CHECK(std::abs(integrate(oct, [](double z) { return z * z; }) - cube) < 1e-12 * cube);
}

TEST_CASE("octave panels shift exactly under dyadic dilation") {
  const NodeSet a = gl_log_octaves(-2, 3, 6);
  const NodeSet b = gl_log_octaves(-1, 4, 6);
  REQUIRE(a.nodes.size() == b.nodes.size());
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    CHECK(b.nodes[i] == 2.0 * a.nodes[i]);
    CHECK(b.weights[i] == 2.0 * a.weights[i]);
  }
}

TEST_CASE("dyadic log nodes cover the range and honor patches") {
  const std::vector<std::pair<double, double>> patches = {{3.0, 5.0}};
  const NodeSet ns = dyadic_log_nodes(0.125, 64.0, 8, patches, 0.25);
  REQUIRE(!ns.nodes.empty());
  CHECK(ns.nodes.front() == 0.125);
  CHECK(ns.nodes.back() == 64.0);
  for (std::size_t i = 0; i + 1 < ns.nodes.size(); ++i) CHECK(ns.nodes[i] < ns.nodes[i + 1]);
  double wsum = 0;
  for (const double w : ns.weights) wsum += w;
  CHECK(std::abs(wsum - (64.0 - 0.125)) < 1e-12 * 64);
  // every multiple of patch_delta inside the patch is a node
  for (double p = 3.0; p <= 5.0 + 1e-12; p += 0.25)
    CHECK(std::any_of(ns.nodes.begin(), ns.nodes.end(),
                      [p](double v) { return std::abs(v - p) < 1e-12; }));
  // the trapezoid rule on the merged set still integrates 1/z decently
  const double logged = integrate(ns, [](double z) { return 1.0 / z; });
  CHECK(std::abs(logged - std::log(64.0 / 0.125)) < 2e-2);
}

TEST_CASE("quadrature spec defaults resolve against the grid") {
  const GridSpec spec = default_grid(1);
  QuadratureSpec q;
  const QuadratureSpec r = q.resolved(spec);
  CHECK(r.t_min == std::ldexp(1.0, ilog2_floor(spec.h() / 4)));
  CHECK(r.t_max == std::ldexp(1.0, ilog2_ceil(4 * spec.L)));
  CHECK(r.z_r_min == std::ldexp(1.0, ilog2_floor(spec.h() / 8)));
  CHECK(r.z_r_max == std::ldexp(1.0, ilog2_ceil(4 * spec.L)));
  CHECK(q.per_octave() == 19);
  CHECK(q.gl_order() == 10);
  QuadratureSpec bad = q;
  bad.nodes_per_decade = 8;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = q;
  bad.angular_nodes = 2;
  CHECK_THROWS_AS(bad.resolved(spec), ConfigError);
  bad = q;
  bad.t_min = 1.0;
  bad.t_max = 0.5;
  CHECK_THROWS_AS(bad.resolved(spec), ConfigError);
}
