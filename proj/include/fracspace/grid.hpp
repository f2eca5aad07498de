#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "fracspace/types.hpp"

namespace fracspace {

/// Uniform periodic grid over [-L, L)^n with N samples per axis.
struct GridSpec {
  int n = 1;
  double L = 20.0;
  int N = 1 << 14;

  double h() const { return 2.0 * L / N; }
  std::size_t total() const;
  /// Sample coordinates along one axis: x_k = -L + k h, k = 0..N-1.
  std::vector<double> axis() const;
  void validate() const;
};

/// Defaults sized so every catalog function decays below 1e-10 at the
/// boundary and modulations stay well inside the Nyquist band.
GridSpec default_grid(int n);

/// Analytic catalog entry with closed-form value and gradient; the Gaussian
/// family also carries a closed-form Fourier transform.  Dilation folds into
/// the shape parameters, translation into a shift along the first axis, so
/// the catalog is closed under both.
class TestFunction {
 public:
  enum class Kind { Gaussian, ModulatedGaussian, Bump };

  /// e^{-pi a |x|^2}
  static TestFunction gaussian(double a, int n = 1);
  /// cos(2 pi omega x_1) e^{-pi a |x|^2}
  static TestFunction modulated_gaussian(double a, double omega, int n = 1);
  /// e^{-1/(1-|x/R|^2)} on |x| < R, zero outside
  static TestFunction bump(double R, int n = 1);

  Kind kind() const { return kind_; }
  int dim() const { return n_; }
  double width() const { return a_; }
  double frequency() const { return omega_; }
  double radius() const { return R_; }
  double center() const { return shift_; }
  std::string id() const;

  double value(double x) const;
  double value(double x, double y) const;
  /// |grad f| at the point.
  double grad_abs(double x) const;
  double grad_abs(double x, double y) const;

  bool has_fourier() const { return kind_ != Kind::Bump; }
  /// |f-hat| at the frequency; requires has_fourier().
  double fourier_abs(double xi) const;
  double fourier_abs(double xi, double eta) const;

  double sup_grad() const;
  double sup_hess() const;
  /// Radius (about center()) of the region holding the function's structure.
  double core_radius() const;
  /// Uniform step resolving the fastest feature in difference integrals.
  double patch_delta() const;
  /// |f| <= eps outside |x - center()| > decay_radius(eps).
  double decay_radius(double eps) const;
  /// |f-hat| <= eps outside |xi| > fourier_decay_radius(eps).
  double fourier_decay_radius(double eps) const;

  /// x -> f(lambda x)
  TestFunction dilated(double lambda) const;
  /// x -> f(x - shift), shift along the first axis
  TestFunction translated(double shift) const;

 private:
  TestFunction(Kind kind, int n) : kind_(kind), n_(n) {}
  double base_value(double r2, double y1) const;

  Kind kind_;
  int n_;
  double a_ = 1.0;
  double omega_ = 0.0;
  double R_ = 1.0;
  double shift_ = 0.0;
};

inline constexpr double kTailTolerance = 1e-10;

/// Grid samples of a function plus the analytic handle when one exists.
struct SampledFunction {
  GridSpec spec;
  std::vector<double> values;  // row-major; n=2 index (i0, i1) -> i0*N + i1
  std::optional<TestFunction> analytic;
  double tail_bound = 0.0;
  bool truncation_warning = false;
};

SampledFunction sample(const TestFunction& tf, const GridSpec& spec);

/// Rectangle-rule L^p norm, p in (1, inf).
double lp_norm(const SampledFunction& f, double p);

enum class GradPath { Auto, Analytic, Spectral };

/// L^p norm of |grad f| via the analytic gradient when available, otherwise
/// spectral differentiation.
double grad_lp_norm(const SampledFunction& f, double p, GradPath path = GradPath::Auto);

/// Fourier-series evaluation of a sampled function at off-grid points (n=1).
class TrigInterpolant {
 public:
  explicit TrigInterpolant(const SampledFunction& f);
  double operator()(double x) const;

 private:
  double L_;
  std::vector<std::complex<double>> coef_;
};

}  // namespace fracspace
