#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fracspace/grid.hpp"
#include "fracspace/oracle.hpp"
#include "fracspace/quadrature.hpp"
#include "fracspace/seminorms.hpp"
#include "fracspace/spectral.hpp"
#include "fracspace/types.hpp"

using namespace fracspace;

namespace {

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

std::vector<SeminormRequest> all_kinds(const SeminormParams& prm) {
  std::vector<SeminormRequest> reqs;
  for (SeminormKind k :
       {SeminormKind::Gagliardo, SeminormKind::Extension,
        SeminormKind::TriebelContinuous, SeminormKind::TriebelDiscrete,
        SeminormKind::MixedForm}) {
    SeminormRequest r;
    r.kind = k;
    r.params = prm;
    reqs.push_back(r);
  }
  return reqs;
}

}  // namespace

TEST_CASE("gaussian p=q=2 seminorms match the hilbertian oracle") {
  const TestFunction tf = TestFunction::gaussian(1.0);
  const SampledFunction f = sample(tf, default_grid(1));
  const JRange jr = default_j_range(f.spec);
  const QuadratureSpec quad;
  for (const double s : {0.3, 0.5, 0.7, 0.9}) {
    CAPTURE(s);
    SeminormParams prm;
    prm.s = s;
    const auto res = evaluate_batch(f, all_kinds(prm), quad);
    CHECK(rel(res[0].value, hilbertian_exact(tf, s, Hilbertian::W)) < 5e-3);
    CHECK(rel(res[1].value, hilbertian_exact(tf, s, Hilbertian::E)) < 5e-3);
    CHECK(rel(res[2].value, hilbertian_exact(tf, s, Hilbertian::F_cont)) < 5e-3);
    CHECK(rel(res[3].value,
              hilbertian_exact(tf, s, Hilbertian::F_disc_bandlimited, jr)) < 5e-3);
    CHECK(rel(res[4].value, hilbertian_exact(tf, s, Hilbertian::M_form)) < 1e-2);
    for (const auto& r : res) CHECK(r.tail_est < 1e-2);
  }
}

TEST_CASE("modulated gaussian matches the oracle at p=q=2") {
  const TestFunction tf = TestFunction::modulated_gaussian(1.0, 4.0);
  const SampledFunction f = sample(tf, default_grid(1));
  const QuadratureSpec quad;
  SeminormParams prm;
  prm.s = 0.5;
  SeminormRequest rw, re;
  rw.kind = SeminormKind::Gagliardo;
  rw.params = prm;
  re.kind = SeminormKind::Extension;
  re.params = prm;
  const auto res = evaluate_batch(f, {rw, re}, quad);
  CHECK(rel(res[0].value, hilbertian_exact(tf, 0.5, Hilbertian::W)) < 5e-3);
  CHECK(rel(res[1].value, hilbertian_exact(tf, 0.5, Hilbertian::E)) < 5e-3);
}

TEST_CASE("homogeneity under an exact dyadic dilation") {
  const TestFunction tf = TestFunction::gaussian(1.0);
  const SampledFunction f = sample(tf, default_grid(1));
  const SampledFunction f2 = sample(tf.dilated(2.0), GridSpec{1, 10.0, 1 << 14});
  const QuadratureSpec quad;
  SeminormParams prm;
  prm.s = 0.6;
  prm.p = 2.5;
  prm.q = 2.0;
  const double expect = std::pow(2.0, prm.s - 1.0 / prm.p);
  const auto a = evaluate_batch(f, all_kinds(prm), quad);
  const auto b = evaluate_batch(f2, all_kinds(prm), quad);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CAPTURE(i);
    CHECK(rel(b[i].value / a[i].value, expect) < 1e-6);
  }
}

TEST_CASE("translation by a grid multiple is exact") {
  const TestFunction tf = TestFunction::gaussian(1.0);
  const SampledFunction f = sample(tf, default_grid(1));
  const double h = f.spec.h();
  const SampledFunction g = sample(tf.translated(64.0 * h), default_grid(1));
  const QuadratureSpec quad;
  SeminormParams prm;
  prm.s = 0.55;
  prm.p = 3.0;
  prm.q = 2.0;
  const auto a = evaluate_batch(f, all_kinds(prm), quad);
  const auto b = evaluate_batch(g, all_kinds(prm), quad);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CAPTURE(i);
    CHECK(rel(b[i].value, a[i].value) < 1e-10);
  }
}

TEST_CASE("degenerate parameters are rejected, never clamped") {
  const SampledFunction f = sample(TestFunction::gaussian(1.0), default_grid(1));
  const QuadratureSpec quad;
  SeminormParams prm;

  prm.s = 1.5;
  CHECK_THROWS_WITH_AS(extension_seminorm(f, prm, quad), "s must lie in (0,1)",
                       ConfigError);
  prm.s = 0.0;
  CHECK_THROWS_AS(extension_seminorm(f, prm, quad), ConfigError);
  prm.s = 0.5;
  prm.p = 1.0;
  CHECK_THROWS_WITH_AS(gagliardo(f, prm, quad), "p must lie in (1,inf)",
                       ConfigError);
  prm.p = 2.0;
  prm.q = 0.5;
  CHECK_THROWS_WITH_AS(triebel_continuous(f, prm, quad), "q must lie in (1,inf)",
                       ConfigError);
  prm.q = 2.0;
  prm.theta = 1.0;
  CHECK_THROWS_WITH_AS(extension_seminorm(f, prm, quad),
                       "theta must lie in (0,1)", ConfigError);
}

TEST_CASE("gagliardo admissibility boundary counts as failure") {
  const SampledFunction f = sample(TestFunction::gaussian(1.0), default_grid(1));
  const QuadratureSpec quad;
  SeminormParams prm;
  prm.s = 0.5;
  prm.p = 1.2;
  prm.q = 3.0;  // p (n + s q) = 3 = n q: the outer integral diverges
  CHECK_FALSE(prm.admissible_W(1));
  CHECK_THROWS_AS(gagliardo(f, prm, quad), ConfigError);
  prm.p = 1.25;
  CHECK(prm.admissible_W(1));
  CHECK(gagliardo(f, prm, quad).value > 0);
  prm.p = 1.2;
  prm.theta = 0.6;  // raising theta past the boundary restores admissibility
  CHECK(prm.admissible_W(1));
}

TEST_CASE("dual admissibility uses the conjugate exponents") {
  SeminormParams prm;
  prm.s = 0.5;
  prm.p = 2.0;
  prm.q = 2.0;
  CHECK(prm.p_conj() == doctest::Approx(2.0));
  CHECK(prm.admissible_dual(1));
  prm.p = 6.0;  // p' = 1.2, q' = 1.5: p'(n + s q') = 2.1 > n q' = 1.5
  prm.q = 3.0;
  CHECK(prm.admissible_dual(1));
  prm.q = 1.2;  // q' = 6: p'(n + s q') = 4.8 < n q' = 6
  CHECK_FALSE(prm.admissible_dual(1));
}

TEST_CASE("batch equals single calls and serial equals parallel bitwise") {
  const SampledFunction f =
      sample(TestFunction::modulated_gaussian(1.0, 4.0), default_grid(1));
  const QuadratureSpec quad;
  SeminormParams prm;
  prm.s = 0.7;
  prm.p = 3.0;
  prm.q = 2.0;
  const auto reqs = all_kinds(prm);
  const auto par = evaluate_batch(f, reqs, quad, ExecMode::Parallel);
  const auto ser = evaluate_batch(f, reqs, quad, ExecMode::Serial);
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    CAPTURE(i);
    CHECK(par[i].value == ser[i].value);
    CHECK(par[i].tail_est == ser[i].tail_est);
  }
  CHECK(gagliardo(f, prm, quad).value == par[0].value);
  CHECK(extension_seminorm(f, prm, quad).value == par[1].value);
  CHECK(triebel_continuous(f, prm, quad).value == par[2].value);
  CHECK(triebel_discrete(f, prm, default_j_range(f.spec),
                         LPKernel::Bandlimited)
            .value == par[3].value);
  CHECK(extension_mixed_form(f, prm, quad).value == par[4].value);
}

TEST_CASE("mixed form tracks the extension seminorm at p=q=2") {
  const SampledFunction f = sample(TestFunction::gaussian(1.0), default_grid(1));
  const QuadratureSpec quad;
  for (const double s : {0.4, 0.8}) {
    CAPTURE(s);
    SeminormParams prm;
    prm.s = s;
    const double m = extension_mixed_form(f, prm, quad).value;
    const double e = extension_seminorm(f, prm, quad).value;
    CHECK(rel(m / e, std::sqrt((3.0 - 2.0 * s) / 4.0)) < 5e-3);
  }
}

TEST_CASE("discrete and continuous triebel ratios stay in one band") {
  const SampledFunction f = sample(TestFunction::gaussian(1.0), default_grid(1));
  const QuadratureSpec quad;
  const double pq[][2] = {{2, 2}, {3, 2}, {2, 3}, {4, 4}};
  for (const auto& e : pq) {
    CAPTURE(e[0]);
    CAPTURE(e[1]);
    SeminormParams prm;
    prm.s = 0.6;
    prm.p = e[0];
    prm.q = e[1];
    const double fd =
        triebel_discrete(f, prm, default_j_range(f.spec), LPKernel::Bandlimited)
            .value;
    const double fc = triebel_continuous(f, prm, quad).value;
    CHECK(fd / fc > 0.1);
    CHECK(fd / fc < 10.0);
  }
}

TEST_CASE("narrow level windows continue geometrically or refuse") {
  const SampledFunction f = sample(TestFunction::gaussian(1.0), default_grid(1));
  const JRange band = default_j_range(f.spec);
  SeminormParams prm;
  prm.s = 0.7;
  const double full =
      triebel_discrete(f, prm, band, LPKernel::Bandlimited).value;
  const auto trimmed = triebel_discrete(
      f, prm, JRange{band.lo + 1, band.hi}, LPKernel::Bandlimited);
  CHECK(rel(trimmed.value, full) < 1e-2);
  CHECK(trimmed.tail_est > 0.0);
  // At low s the trimmed level carries real weight; the evaluator refuses
  // rather than absorbing it silently.
  prm.s = 0.3;
  CHECK_THROWS_AS(triebel_discrete(f, prm, JRange{band.lo + 1, band.hi},
                                   LPKernel::Bandlimited),
                  ResolutionError);
  CHECK_THROWS_WITH_AS(
      triebel_discrete(f, prm, JRange{0, 1}, LPKernel::Bandlimited),
      "triebel_discrete: j_range needs at least three levels", ConfigError);
}

TEST_CASE("triebel order endpoints join the gradient and the plain sum") {
  const SampledFunction f = sample(TestFunction::gaussian(1.0), default_grid(1));
  const auto top = triebel_order(f, 1.0, 2.0);
  CHECK(top.value == grad_lp_norm(f, 2.0));
  CHECK(top.tail_est == 0.0);
  const auto bottom = triebel_order(f, 0.0, 2.0);
  CHECK(bottom.value > 0.0);
  CHECK(bottom.tail_est < 1e-2);
  const auto mid = triebel_order(f, 0.5, 2.0);
  CHECK(mid.value > 0.0);
  CHECK_THROWS_WITH_AS(triebel_order(f, 1.2, 2.0), "sigma must lie in [0,1]",
                       ConfigError);
  CHECK_THROWS_AS(triebel_order(f, -0.1, 2.0), ConfigError);
  CHECK_THROWS_WITH_AS(triebel_order(f, 0.5, 1.0), "p must lie in (1,inf)",
                       ConfigError);
}

TEST_CASE("two dimensional seminorms match the oracle") {
  const TestFunction tf = TestFunction::gaussian(1.0, 2);
  const SampledFunction f = sample(tf, GridSpec{2, 8.0, 256});
  QuadratureSpec quad;
  quad.nodes_per_decade = 32;
  quad.angular_nodes = 16;
  SeminormParams prm;
  prm.s = 0.5;
  SeminormRequest rw, re, rm;
  rw.kind = SeminormKind::Gagliardo;
  rw.params = prm;
  re.kind = SeminormKind::Extension;
  re.params = prm;
  rm.kind = SeminormKind::MixedForm;
  rm.params = prm;
  const auto res = evaluate_batch(f, {rw, re, rm}, quad);
  CHECK(rel(res[0].value, hilbertian_exact(tf, 0.5, Hilbertian::W)) < 5e-3);
  CHECK(rel(res[1].value, hilbertian_exact(tf, 0.5, Hilbertian::E)) < 5e-3);
  CHECK(rel(res[2].value, hilbertian_exact(tf, 0.5, Hilbertian::M_form)) < 1e-2);
}

TEST_CASE("two dimensional extension is dilation covariant") {
  const TestFunction tf = TestFunction::gaussian(1.0, 2);
  QuadratureSpec quad;
  quad.nodes_per_decade = 32;
  quad.angular_nodes = 16;
  SeminormParams prm;
  prm.s = 0.6;
  prm.p = 2.5;
  prm.q = 2.0;
  const double a =
      extension_seminorm(sample(tf, GridSpec{2, 8.0, 256}), prm, quad).value;
  const double b =
      extension_seminorm(sample(tf.dilated(2.0), GridSpec{2, 4.0, 256}), prm, quad)
          .value;
  CHECK(rel(b / a, std::pow(2.0, prm.s - 2.0 / prm.p)) < 1e-6);
}

TEST_CASE("gagliardo in two dimensions needs an analytic handle") {
  SampledFunction z;
  z.spec = GridSpec{2, 8.0, 256};
  z.values.assign(std::size_t(256) * 256, 0.0);
  SeminormParams prm;
  prm.s = 0.5;
  CHECK_THROWS_AS(gagliardo(z, prm, QuadratureSpec{}), ConfigError);
}

TEST_CASE("quadrature refinement leaves values unchanged") {
  const SampledFunction f = sample(TestFunction::gaussian(1.0), default_grid(1));
  SeminormParams prm;
  prm.s = 0.55;
  prm.p = 2.5;
  prm.q = 2.0;
  QuadratureSpec coarse, fine;
  fine.nodes_per_decade = 2 * coarse.nodes_per_decade;
  CHECK(rel(gagliardo(f, prm, fine).value, gagliardo(f, prm, coarse).value) <
        1e-3);
  CHECK(rel(extension_seminorm(f, prm, fine).value,
            extension_seminorm(f, prm, coarse).value) < 1e-3);
}

TEST_CASE("the zero function has zero seminorms") {
  SampledFunction z;
  z.spec = default_grid(1);
  z.values.assign(std::size_t(z.spec.N), 0.0);
  const QuadratureSpec quad;
  SeminormParams prm;
  prm.s = 0.5;
  const auto res = evaluate_batch(z, all_kinds(prm), quad);
  for (const auto& r : res) {
    CHECK(r.value == 0.0);
    CHECK(r.tail_est == 0.0);
  }
}

TEST_CASE("an empty batch returns no results") {
  const SampledFunction f = sample(TestFunction::gaussian(1.0), default_grid(1));
  CHECK(evaluate_batch(f, {}, QuadratureSpec{}).empty());
}
