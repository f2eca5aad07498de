#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fracspace/grid.hpp"
#include "fracspace/oracle.hpp"
#include "fracspace/types.hpp"

using namespace fracspace;

namespace {

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

TEST_CASE("gamma function values and fault injection") {
  CHECK(rel(gamma_fn(0.5), std::sqrt(M_PI)) < 1e-14);
  CHECK(rel(gamma_fn(1.0), 1.0) < 1e-14);
  CHECK(rel(gamma_fn(1.5), std::sqrt(M_PI) / 2) < 1e-14);
  CHECK(rel(gamma_fn(4.0), 6.0) < 1e-14);
  CHECK_FALSE(gamma_fault());
  set_gamma_fault(true);
  CHECK(gamma_fault());
  CHECK(rel(gamma_fn(1.0), 1.001) < 1e-14);
  set_gamma_fault(false);
  CHECK(rel(gamma_fn(1.0), 1.0) < 1e-14);
}

TEST_CASE("hurwitz zeta against classical values") {
  CHECK(rel(hurwitz_zeta(2.0, 1.0), M_PI * M_PI / 6) < 1e-13);
  CHECK(rel(hurwitz_zeta(4.0, 1.0), std::pow(M_PI, 4) / 90) < 1e-13);
  const double zeta3 = 1.2020569031595943;
  CHECK(rel(hurwitz_zeta(3.0, 0.5), 7 * zeta3) < 1e-12);
  // zeta(sigma, a) = a^{-sigma} + zeta(sigma, a+1)
  const double lhs = hurwitz_zeta(1.5, 0.3);
  const double rhs = std::pow(0.3, -1.5) + hurwitz_zeta(1.5, 1.3);
  CHECK(rel(lhs, rhs) < 1e-13);
  CHECK_THROWS_AS(hurwitz_zeta(1.0, 0.5), ConfigError);
  CHECK_THROWS_AS(hurwitz_zeta(2.0, 0.0), ConfigError);
}

TEST_CASE("gaussian spectral moment closed form vs quadrature") {
  const TestFunction g1 = TestFunction::gaussian(1.0, 1);
  const TestFunction g2 = TestFunction::gaussian(1.0, 2);
  const TestFunction g1w = TestFunction::gaussian(4.0, 1);
  for (const double s : {0.3, 0.5, 0.7}) {
    CHECK(rel(gaussian_spectral_moment(s, 1, 1.0), brute_force_spectral_moment(g1, s)) < 1e-10);
    CHECK(rel(gaussian_spectral_moment(s, 2, 1.0), brute_force_spectral_moment(g2, s)) < 1e-10);
    CHECK(rel(gaussian_spectral_moment(s, 1, 4.0), brute_force_spectral_moment(g1w, s)) < 1e-10);
  }
  // s = 1/2, a = 1, n = 1: I_1 = (2 pi)^{-1} Gamma(1) = 1/(2 pi)
  CHECK(rel(gaussian_spectral_moment(0.5, 1, 1.0), 1 / (2 * M_PI)) < 1e-14);
  // s = 1, a = 1, n = 1: I_2 = (2 pi)^{-3/2} Gamma(3/2)
  CHECK(rel(gaussian_spectral_moment(1.0, 1, 1.0),
            std::pow(2 * M_PI, -1.5) * std::sqrt(M_PI) / 2) < 1e-14);
  CHECK_THROWS_AS(gaussian_spectral_moment(1.2, 1, 1.0), ConfigError);
  CHECK_THROWS_AS(gaussian_spectral_moment(0.5, 3, 1.0), ConfigError);
}

TEST_CASE("spectral moment dispatch and modulated gaussian") {
  const TestFunction g = TestFunction::gaussian(1.0, 1);
  CHECK(rel(spectral_moment(g, 0.4), gaussian_spectral_moment(0.4, 1, 1.0)) < 1e-14);
  // omega = 0 modulation degenerates to the plain gaussian
  const TestFunction m0 = TestFunction::modulated_gaussian(1.0, 0.0, 1);
  CHECK(rel(spectral_moment(m0, 0.6), gaussian_spectral_moment(0.6, 1, 1.0)) < 1e-9);
  // omega = 8 against an independent uniform-grid Riemann sum of |xi|^{2s}|f-hat|^2
  const TestFunction m8 = TestFunction::modulated_gaussian(1.0, 8.0, 1);
  const double s = 0.55;
  double riemann = 0;
  const double dxi = 1.0 / 2048;
  for (int k = -16 * 2048; k <= 16 * 2048; ++k) {
    const double xi = k * dxi;
    if (xi == 0) continue;
    const double fa = m8.fourier_abs(xi);
    riemann += std::pow(std::abs(xi), 2 * s) * fa * fa * dxi;
  }
  CHECK(rel(spectral_moment(m8, s), riemann) < 1e-6);
  CHECK_THROWS_AS(spectral_moment(TestFunction::bump(1.0, 1), 0.5), ConfigError);
}

TEST_CASE("level constant closed forms agree with each other") {
  // A(1,s) has two equivalent closed forms away from s = 1/2; the reflection
  // route Gamma(1-2s) cos(pi s)/(2s) must match the duplication route.
  for (const double s : {0.1, 0.3, 0.4, 0.6, 0.7, 0.9}) {
    const double dup = gagliardo_level_constant_closed(1, s);
    const double refl =
        4 * std::pow(2 * M_PI, 2 * s) * gamma_fn(1 - 2 * s) * std::cos(M_PI * s) / (2 * s);
    CHECK(rel(dup, refl) < 1e-12);
  }
  CHECK(rel(gagliardo_level_constant_closed(1, 0.5), 4 * M_PI * M_PI) < 1e-14);
}

TEST_CASE("level constant closed form vs direct quadrature") {
  const double pins1[] = {26.1835258187, 4 * M_PI * M_PI, 81.9394854442};
  const double svals[] = {0.3, 0.5, 0.7};
  for (int i = 0; i < 3; ++i) {
    const double s = svals[i];
    CHECK(rel(gagliardo_level_constant_closed(1, s), pins1[i]) < 1e-9);
    CHECK(rel(gagliardo_level_constant(1, s), gagliardo_level_constant_closed(1, s)) < 1e-8);
    CHECK(rel(gagliardo_level_constant(2, s), gagliardo_level_constant_closed(2, s)) < 1e-8);
  }
  CHECK(rel(gagliardo_level_constant_closed(1, 0.9), 331.527910144) < 1e-9);
  // (1-s) A(n,s) stays bounded as s -> 1 (the constant blows up like (1-s)^{-1})
  const double r1 = (1 - 0.99) * gagliardo_level_constant_closed(1, 0.99);
  const double r2 = (1 - 0.999) * gagliardo_level_constant_closed(1, 0.999);
  CHECK(rel(r1, r2) < 0.02);
  CHECK_THROWS_AS(gagliardo_level_constant(1, 1.0), ConfigError);
  CHECK_THROWS_AS(gagliardo_level_constant(3, 0.5), ConfigError);
}

TEST_CASE("hilbertian identities vs brute-force (xi,t) quadrature") {
  const TestFunction g = TestFunction::gaussian(1.0, 1);
  for (const double s : {0.3, 0.5, 0.7}) {
    const double e2 = hilbertian_exact(g, s, Hilbertian::E);
    const double f2 = hilbertian_exact(g, s, Hilbertian::F_cont);
    const double m2 = hilbertian_exact(g, s, Hilbertian::M_form);
    CHECK(rel(e2 * e2, brute_force_extension_sq(g, s)) < 1e-6);
    CHECK(rel(f2 * f2, brute_force_triebel_cont_sq(g, s)) < 1e-6);
    CHECK(rel(m2 * m2, brute_force_mixed_sq(g, s)) < 1e-6);
    // M/E = sqrt((3-2s)/4) exactly, independent of the test function
    CHECK(rel(m2 / e2, std::sqrt((3 - 2 * s) / 4)) < 1e-12);
  }
  // E(s=1/2) for the unit gaussian is exactly 2^{-1/2}
  CHECK(rel(hilbertian_exact(g, 0.5, Hilbertian::E), std::sqrt(0.5)) < 1e-13);
  // W(s) = sqrt(A(n,s) I_{2s}); at s=1/2, n=1 this is sqrt(4 pi^2 / (2 pi)) = sqrt(2 pi)
  CHECK(rel(hilbertian_exact(g, 0.5, Hilbertian::W), std::sqrt(2 * M_PI)) < 1e-12);
  CHECK_THROWS_AS(hilbertian_exact(g, 1.2, Hilbertian::E), ConfigError);
  CHECK_THROWS_AS(hilbertian_exact(TestFunction::bump(1.0, 1), 0.5, Hilbertian::E), ConfigError);
}

TEST_CASE("discrete square functions approach the continuous identities") {
  const TestFunction g = TestFunction::gaussian(1.0, 1);
  for (const double s : {0.3, 0.5, 0.7}) {
    // Poisson blocks sample t dyadically. Averaging the log2-periodic lattice sum
    // sum_j (2^{-j}|xi|)^{4-2s} e^{-4 pi 2^{-j}|xi|} over its phase gives
    // Gamma(4-2s)(4 pi)^{2s-4}/ln 2, i.e. F_disc ~ F_cont / ((2 pi)^2 sqrt(ln 2))
    // with only the lattice ripple left over.
    const double fd = hilbertian_exact(g, s, Hilbertian::F_disc_poisson);
    const double fc = hilbertian_exact(g, s, Hilbertian::F_cont);
    const double lattice = 1.0 / (4 * M_PI * M_PI * std::sqrt(std::log(2.0)));
    CHECK(fd > 0);
    CHECK(rel(fd / fc, lattice) < 0.01);
    // Bandlimited blocks form a partition of unity squared: sum_j psi(2^{-j}|xi|)^2
    // lies in [1/2, 1], so F_disc_band is within a factor sqrt(2) of sqrt(I_{2s}).
    const double fb = hilbertian_exact(g, s, Hilbertian::F_disc_bandlimited);
    const double wi = std::sqrt(gaussian_spectral_moment(s, 1, 1.0));
    CHECK(fb / wi > 1 / std::sqrt(2.0) - 0.01);
    CHECK(fb / wi < 1.01);
  }
  // Truncating the j-range strictly reduces the sum
  const JRange narrow{-2, 2};
  CHECK(hilbertian_exact(g, 0.5, Hilbertian::F_disc_poisson, narrow) <
        hilbertian_exact(g, 0.5, Hilbertian::F_disc_poisson));
  CHECK_THROWS_AS(hilbertian_exact(g, 0.5, Hilbertian::F_disc_poisson, JRange{3, 1}),
                  ConfigError);
}

TEST_CASE("refine_check classifies convergence behavior") {
  // values 1 + 4^{-k}: geometric decay, monotone improvement, not stagnating
  const auto geo = refine_check([](int k) { return 1.0 + std::pow(4.0, -k); }, 5);
  CHECK(geo.values.size() == 6);
  CHECK(geo.deltas.size() == 5);
  CHECK(geo.monotone);
  CHECK_FALSE(geo.stagnating);
  // constant sequence: deltas are zero, counts as converged
  const auto flat = refine_check([](int) { return 2.0; }, 3);
  CHECK(flat.monotone);
  CHECK_FALSE(flat.stagnating);
  // stuck sequence: alternating values never settle
  const auto stuck = refine_check([](int k) { return k % 2 ? 1.0 : 1.5; }, 4);
  CHECK(stuck.stagnating);
  CHECK_THROWS_AS(refine_check([](int) { return 1.0; }, 0), ConfigError);
}

TEST_CASE("oracle self check passes and the log names every identity") {
  std::ostringstream log;
  const double worst = oracle_self_check(1e-6, &log);
  CHECK(worst < 1e-6);
  CHECK(log.str().find("E^2 identity") != std::string::npos);
  CHECK(log.str().find("F^2 identity") != std::string::npos);
  CHECK(log.str().find("M^2 identity") != std::string::npos);
  CHECK(log.str().find("**FAIL**") == std::string::npos);
}

TEST_CASE("gamma fault is visible to the self check") {
  set_gamma_fault(true);
  const double worst = oracle_self_check(1e-6);
  set_gamma_fault(false);
  CHECK(worst > 1e-4);
}
