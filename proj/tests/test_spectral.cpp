#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fracspace/grid.hpp"
#include "fracspace/oracle.hpp"
#include "fracspace/quadrature.hpp"
#include "fracspace/spectral.hpp"
#include "fracspace/types.hpp"

using namespace fracspace;

namespace {

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (const double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("bandlimited profile is a partition of unity on dyadic dilates") {
  CHECK(window_step(0.3) == 1.0);
  CHECK(window_step(1.0) == 1.0);
  CHECK(window_step(2.0) == 0.0);
  CHECK(window_step(1.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(bandlimited_psi(0.49) == 0.0);
  CHECK(bandlimited_psi(2.01) == 0.0);
  CHECK(bandlimited_psi(1.0) == 1.0);
  for (const double rho : {0.003, 0.7, 1.0, 1.37, 2.5, 40.0, 997.0}) {
    double sum = 0;
    for (int j = -40; j <= 40; ++j) sum += bandlimited_psi(std::exp2(-j) * rho);
    CHECK(std::abs(sum - 1.0) < 1e-14);
  }
}

TEST_CASE("frequency grid layout in FFT index order") {
  const GridSpec spec = default_grid(1);
  const FrequencyGrid freq(spec);
  CHECK(freq.xi[0] == 0.0);
  CHECK(freq.xi[1] == doctest::Approx(1.0 / (2 * spec.L)).epsilon(1e-15));
  CHECK(freq.xi[spec.N / 2] == doctest::Approx(freq.nyquist()).epsilon(1e-15));
  CHECK(freq.xi[spec.N - 1] == doctest::Approx(-1.0 / (2 * spec.L)).epsilon(1e-15));
  const GridSpec spec2{2, 12.0, 512};
  const FrequencyGrid f2(spec2);
  const std::size_t flat = 3 * 512 + 509;
  CHECK(f2.abs_at(flat) ==
        doctest::Approx(std::hypot(3.0 / 24.0, -3.0 / 24.0)).epsilon(1e-14));
}

TEST_CASE("poisson semigroup composes, contracts, and keeps symmetry") {
  const GridSpec spec = default_grid(1);
  const SampledFunction f = sample(TestFunction::gaussian(1.0), spec);
  const auto once = apply_multiplier(f, MultiplierKind::poisson_semigroup(1.2));
  const auto twice = apply_multiplier(
      apply_multiplier(f, MultiplierKind::poisson_semigroup(0.7)),
      MultiplierKind::poisson_semigroup(0.5));
  CHECK(max_diff(once.values, twice.values) < 1e-12 * max_abs(f.values));
  double prev = 2 * lp_norm(f, 2);
  for (const double t : {0.4, 0.2, 0.1, 0.05}) {
    const auto pt = apply_multiplier(f, MultiplierKind::poisson_semigroup(t));
    SampledFunction diff = f;
    for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] -= pt.values[i];
    const double dist = lp_norm(diff, 2);
    CHECK(dist < prev);
    CHECK(lp_norm(pt, 2) < lp_norm(f, 2) * (1 + 1e-12));
    prev = dist;
  }
  const auto pt = apply_multiplier(f, MultiplierKind::poisson_semigroup(0.3));
  for (int i = 1; i < spec.N; ++i)
    CHECK(std::abs(pt.values[i] - pt.values[spec.N - i]) < 1e-12 * max_abs(pt.values));
}

TEST_CASE("poisson derivative matches central differences in t") {
  const GridSpec spec = default_grid(1);
  const SampledFunction f = sample(TestFunction::gaussian(1.0), spec);
  const double t = 0.5;
  const auto d2 = poisson_dt(f, t, 2);
  const auto fd_at = [&](double dt) {
    const auto hi = poisson_dt(f, t + dt, 1);
    const auto lo = poisson_dt(f, t - dt, 1);
    std::vector<double> fd(hi.values.size());
    for (std::size_t i = 0; i < fd.size(); ++i)
      fd[i] = (hi.values[i] - lo.values[i]) / (2 * dt);
    return fd;
  };
  const double e1 = max_diff(fd_at(0.004), d2.values);
  const double e2 = max_diff(fd_at(0.002), d2.values);
  CHECK(e1 < 1e-3 * max_abs(d2.values));
  CHECK(e2 < 0.3 * e1);  // central differences converge at second order
}

TEST_CASE("poisson block is the scaled second t-derivative at t = 2^-j") {
  const GridSpec spec = default_grid(1);
  const SampledFunction f = sample(TestFunction::modulated_gaussian(1.0, 4.0), spec);
  const int j = 3;
  const auto block = lp_block(f, j, LPKernel::Poisson);
  const auto d2 = poisson_dt(f, std::exp2(-j), 2);
  const double scale = std::exp2(-2.0 * j) / (4 * M_PI * M_PI);
  std::vector<double> ref(d2.values.size());
  for (std::size_t i = 0; i < ref.size(); ++i) ref[i] = scale * d2.values[i];
  CHECK(max_diff(block.values, ref) < 1e-12 * max_abs(block.values));
}

TEST_CASE("lp blocks commute with exact dyadic regridding") {
  const TestFunction f = TestFunction::gaussian(1.0);
  const GridSpec full = default_grid(1);
  const GridSpec half{1, full.L / 2, full.N};
  const SampledFunction sf = sample(f, full);
  const SampledFunction sg = sample(f.dilated(2.0), half);
  for (const LPKernel kernel : {LPKernel::Poisson, LPKernel::Bandlimited}) {
    const auto bg = lp_block(sg, 4, kernel);
    const auto bf = lp_block(sf, 3, kernel);
    CHECK(max_diff(bg.values, bf.values) < 1e-12 * max_abs(bf.values));
  }
}

TEST_CASE("spectral fractional laplacian composes and kills the mean") {
  const GridSpec spec = default_grid(1);
  const SampledFunction f = sample(TestFunction::gaussian(1.0), spec);
  const auto once = frac_laplacian_spectral(f, 0.8);
  const auto twice = frac_laplacian_spectral(frac_laplacian_spectral(f, 0.4), 0.4);
  CHECK(max_diff(once.values, twice.values) < 1e-9 * max_abs(once.values));
  double mean = 0;
  for (const double v : once.values) mean += v;
  CHECK(std::abs(mean / spec.N) < 1e-12 * max_abs(once.values));
}

TEST_CASE("difference-quotient laplacian is a constant multiple of the multiplier, n=1") {
  const GridSpec spec = default_grid(1);
  const SampledFunction f = sample(TestFunction::gaussian(1.0), spec);
  for (const double s : {0.6, 1.0, 1.4}) {
    const auto sp = frac_laplacian_spectral(f, s);
    const auto df = frac_laplacian_difference(f, s, QuadratureSpec{});
    const double floor_val = 0.05 * max_abs(sp.values);
    std::vector<double> ratios;
    for (int i = 0; i < spec.N; ++i) {
      const double x = -spec.L + i * spec.h();
      if (std::abs(x) > 4 || std::abs(sp.values[i]) < floor_val) continue;
      ratios.push_back(df.values[i] / sp.values[i]);
    }
    REQUIRE(ratios.size() > 100);
    std::sort(ratios.begin(), ratios.end());
    const double med = ratios[ratios.size() / 2];
    CHECK((ratios.back() - ratios.front()) / med < 0.01);
    // the measured constant is int_0^inf (2 - 2 cos(2 pi u)) u^{-1-s} du = A(1, s/2)/2
    CHECK(rel(med, gagliardo_level_constant_closed(1, s / 2) / 2) < 0.01);
  }
}

TEST_CASE("difference-quotient laplacian is a constant multiple of the multiplier, n=2") {
  const GridSpec spec{2, 6.0, 128};
  const SampledFunction f = sample(TestFunction::gaussian(1.0, 2), spec);
  const double s = 1.0;
  const auto sp = frac_laplacian_spectral(f, s);
  const auto df = frac_laplacian_difference(f, s, QuadratureSpec{});
  const double floor_val = 0.05 * max_abs(sp.values);
  std::vector<double> ratios;
  for (int i0 = 0; i0 < spec.N; ++i0)
    for (int i1 = 0; i1 < spec.N; ++i1) {
      const double x1 = -spec.L + i0 * spec.h();
      const double x2 = -spec.L + i1 * spec.h();
      const std::size_t idx = static_cast<std::size_t>(i0) * spec.N + i1;
      if (std::hypot(x1, x2) > 2 || std::abs(sp.values[idx]) < floor_val) continue;
      ratios.push_back(df.values[idx] / sp.values[idx]);
    }
  REQUIRE(ratios.size() > 100);
  std::sort(ratios.begin(), ratios.end());
  const double med = ratios[ratios.size() / 2];
  CHECK((ratios.back() - ratios.front()) / med < 0.01);
  CHECK(rel(med, gagliardo_level_constant_closed(2, s / 2) / 2) < 0.01);
}

TEST_CASE("spectral operator validation") {
  const GridSpec spec = default_grid(1);
  const SampledFunction f = sample(TestFunction::gaussian(1.0), spec);
  CHECK(default_j_range(spec).lo == -5);
  CHECK(default_j_range(spec).hi == 8);
  CHECK_THROWS_AS(poisson_dt(f, 0.0, 1), ConfigError);
  CHECK_THROWS_AS(poisson_dt(f, 0.5, 3), ConfigError);
  CHECK_THROWS_AS(lp_block(f, 100, LPKernel::Poisson), ConfigError);
  CHECK_THROWS_AS(frac_laplacian_spectral(f, 2.0), ConfigError);
  SampledFunction bare;
  bare.spec = GridSpec{2, 6.0, 64};
  bare.values.assign(bare.spec.total(), 0.0);
  CHECK_THROWS_AS(frac_laplacian_difference(bare, 0.5, QuadratureSpec{}), ConfigError);
}
