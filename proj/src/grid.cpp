#include "fracspace/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fracspace/fft.hpp"
#include "fracspace/quadrature.hpp"

namespace fracspace {

std::size_t GridSpec::total() const {
  std::size_t m = static_cast<std::size_t>(N);
  return n == 1 ? m : m * m;
}

std::vector<double> GridSpec::axis() const {
  std::vector<double> x(N);
  const double step = h();
  for (int k = 0; k < N; ++k) x[k] = -L + k * step;
  return x;
}

void GridSpec::validate() const {
  if (n != 1 && n != 2) throw ConfigError("grid: dimension must be 1 or 2");
  if (!(L > 0)) throw ConfigError("grid: L must be positive");
  if (N < 64 || (N & (N - 1)) != 0) throw ConfigError("grid: N must be a power of two >= 64");
}

GridSpec default_grid(int n) {
  if (n == 1) return GridSpec{1, 20.0, 1 << 14};
  if (n == 2) return GridSpec{2, 12.0, 1 << 9};
  throw ConfigError("grid: dimension must be 1 or 2");
}

TestFunction TestFunction::gaussian(double a, int n) {
  if (!(a > 0)) throw ConfigError("gaussian: width must be positive");
  TestFunction tf(Kind::Gaussian, n);
  tf.a_ = a;
  return tf;
}

TestFunction TestFunction::modulated_gaussian(double a, double omega, int n) {
  if (!(a > 0) || !(omega >= 0)) throw ConfigError("modulated_gaussian: need a > 0, omega >= 0");
  TestFunction tf(Kind::ModulatedGaussian, n);
  tf.a_ = a;
  tf.omega_ = omega;
  return tf;
}

TestFunction TestFunction::bump(double R, int n) {
  if (!(R > 0)) throw ConfigError("bump: radius must be positive");
  TestFunction tf(Kind::Bump, n);
  tf.R_ = R;
  return tf;
}

std::string TestFunction::id() const {
  char buf[128];
  switch (kind_) {
    case Kind::Gaussian:
      std::snprintf(buf, sizeof buf, "gaussian(a=%g", a_);
      break;
    case Kind::ModulatedGaussian:
      std::snprintf(buf, sizeof buf, "modulated_gaussian(a=%g,omega=%g", a_, omega_);
      break;
    case Kind::Bump:
      std::snprintf(buf, sizeof buf, "bump(R=%g", R_);
      break;
  }
  std::string out(buf);
  if (n_ == 2) out += ",n=2";
  if (shift_ != 0) {
    std::snprintf(buf, sizeof buf, ",x0=%g", shift_);
    out += buf;
  }
  return out + ")";
}

double TestFunction::base_value(double r2, double y1) const {
  switch (kind_) {
    case Kind::Gaussian:
      return std::exp(-M_PI * a_ * r2);
    case Kind::ModulatedGaussian:
      return std::cos(2 * M_PI * omega_ * y1) * std::exp(-M_PI * a_ * r2);
    case Kind::Bump: {
      const double u2 = r2 / (R_ * R_);
      return u2 < 1 ? std::exp(-1.0 / (1.0 - u2)) : 0.0;
    }
  }
  return 0.0;
}

double TestFunction::value(double x) const {
  if (n_ != 1) throw ConfigError("value: 1d accessor on a 2d function");
  const double y = x - shift_;
  return base_value(y * y, y);
}

double TestFunction::value(double x, double y) const {
  if (n_ != 2) throw ConfigError("value: 2d accessor on a 1d function");
  const double y1 = x - shift_;
  return base_value(y1 * y1 + y * y, y1);
}

double TestFunction::grad_abs(double x) const {
  if (n_ != 1) throw ConfigError("grad_abs: 1d accessor on a 2d function");
  const double y = x - shift_;
  switch (kind_) {
    case Kind::Gaussian:
      return 2 * M_PI * a_ * std::abs(y) * std::exp(-M_PI * a_ * y * y);
    case Kind::ModulatedGaussian: {
      const double c = 2 * M_PI * omega_ * std::sin(2 * M_PI * omega_ * y) +
                       2 * M_PI * a_ * y * std::cos(2 * M_PI * omega_ * y);
      return std::abs(c) * std::exp(-M_PI * a_ * y * y);
    }
    case Kind::Bump: {
      const double u = std::abs(y) / R_;
      if (u >= 1) return 0.0;
      const double d = 1.0 - u * u;
      return std::exp(-1.0 / d) * 2 * u / (R_ * d * d);
    }
  }
  return 0.0;
}

double TestFunction::grad_abs(double x, double y) const {
  if (n_ != 2) throw ConfigError("grad_abs: 2d accessor on a 1d function");
  const double y1 = x - shift_;
  const double r2 = y1 * y1 + y * y;
  switch (kind_) {
    case Kind::Gaussian:
      return 2 * M_PI * a_ * std::sqrt(r2) * std::exp(-M_PI * a_ * r2);
    case Kind::ModulatedGaussian: {
      const double env = std::exp(-M_PI * a_ * r2);
      const double cw = std::cos(2 * M_PI * omega_ * y1);
      const double g1 =
          (2 * M_PI * omega_ * std::sin(2 * M_PI * omega_ * y1) + 2 * M_PI * a_ * y1 * cw) * env;
      const double g2 = 2 * M_PI * a_ * y * cw * env;
      return std::hypot(g1, g2);
    }
    case Kind::Bump: {
      const double u = std::sqrt(r2) / R_;
      if (u >= 1) return 0.0;
      const double d = 1.0 - u * u;
      return std::exp(-1.0 / d) * 2 * u / (R_ * d * d);
    }
  }
  return 0.0;
}

double TestFunction::fourier_abs(double xi) const {
  if (n_ != 1) throw ConfigError("fourier_abs: 1d accessor on a 2d function");
  switch (kind_) {
    case Kind::Gaussian:
      return std::exp(-M_PI * xi * xi / a_) / std::sqrt(a_);
    case Kind::ModulatedGaussian: {
      const double dm = xi - omega_, dp = xi + omega_;
      return 0.5 / std::sqrt(a_) *
             (std::exp(-M_PI * dm * dm / a_) + std::exp(-M_PI * dp * dp / a_));
    }
    case Kind::Bump:
      throw ConfigError("fourier_abs: bump has no closed-form transform");
  }
  return 0.0;
}

double TestFunction::fourier_abs(double xi, double eta) const {
  if (n_ != 2) throw ConfigError("fourier_abs: 2d accessor on a 1d function");
  switch (kind_) {
    case Kind::Gaussian:
      return std::exp(-M_PI * (xi * xi + eta * eta) / a_) / a_;
    case Kind::ModulatedGaussian: {
      const double dm = (xi - omega_) * (xi - omega_) + eta * eta;
      const double dp = (xi + omega_) * (xi + omega_) + eta * eta;
      return 0.5 / a_ * (std::exp(-M_PI * dm / a_) + std::exp(-M_PI * dp / a_));
    }
    case Kind::Bump:
      throw ConfigError("fourier_abs: bump has no closed-form transform");
  }
  return 0.0;
}

namespace {
// Peak of |d/du e^{-1/(1-u^2)}| and of the second radial derivative on (0,1),
// by direct scan; only used as error-estimate scales.
void bump_derivative_peaks(double& g1, double& g2) {
  static double cached1 = 0, cached2 = 0;
  if (cached1 == 0) {
    double m1 = 0, m2 = 0;
    for (int i = 1; i < 4096; ++i) {
      const double u = i / 4096.0;
      const double d = 1.0 - u * u;
      const double f = std::exp(-1.0 / d);
      const double gp = -2 * u / (d * d);
      const double gpp = -(2 + 6 * u * u) / (d * d * d);
      m1 = std::max(m1, std::abs(f * gp));
      m2 = std::max(m2, std::abs(f * (gp * gp + gpp)));
    }
    cached1 = m1;
    cached2 = m2;
  }
  g1 = cached1;
  g2 = cached2;
}
}  // namespace

double TestFunction::sup_grad() const {
  switch (kind_) {
    case Kind::Gaussian:
      return std::sqrt(2 * M_PI * a_) * std::exp(-0.5);
    case Kind::ModulatedGaussian:
      return 2 * M_PI * omega_ + std::sqrt(2 * M_PI * a_) * std::exp(-0.5);
    case Kind::Bump: {
      double g1, g2;
      bump_derivative_peaks(g1, g2);
      return g1 / R_;
    }
  }
  return 0.0;
}

double TestFunction::sup_hess() const {
  switch (kind_) {
    case Kind::Gaussian:
      return 2 * M_PI * a_;
    case Kind::ModulatedGaussian: {
      const double w = 2 * M_PI * omega_ + std::sqrt(2 * M_PI * a_);
      return w * w + 2 * M_PI * a_;
    }
    case Kind::Bump: {
      double g1, g2;
      bump_derivative_peaks(g1, g2);
      return g2 / (R_ * R_);
    }
  }
  return 0.0;
}

double TestFunction::core_radius() const {
  return kind_ == Kind::Bump ? R_ : 4.0 / std::sqrt(a_);
}

double TestFunction::patch_delta() const {
  double feature = 1.0;
  switch (kind_) {
    case Kind::Gaussian:
      feature = 16.0 * std::sqrt(a_);
      break;
    case Kind::ModulatedGaussian:
      feature = 16.0 * std::max(std::sqrt(a_), omega_);
      break;
    case Kind::Bump:
      feature = 64.0 / R_;
      break;
  }
  return std::exp2(static_cast<double>(-ilog2_ceil(feature)));
}

double TestFunction::decay_radius(double eps) const {
  if (!(eps > 0 && eps < 1)) throw ConfigError("decay_radius: eps must lie in (0,1)");
  if (kind_ == Kind::Bump) return R_;
  return std::sqrt(std::log(1.0 / eps) / (M_PI * a_));
}

double TestFunction::fourier_decay_radius(double eps) const {
  if (!(eps > 0)) throw ConfigError("fourier_decay_radius: eps must be positive");
  if (kind_ == Kind::Bump)
    throw ConfigError("fourier_decay_radius: bump has no closed-form transform");
  const double amp = (kind_ == Kind::Gaussian ? 1.0 : 0.5) * std::pow(a_, -0.5 * n_);
  const double excess = std::sqrt(a_ * std::log(std::max(amp / eps, M_E)) / M_PI);
  return omega_ + excess;
}

TestFunction TestFunction::dilated(double lambda) const {
  if (!(lambda > 0)) throw ConfigError("dilated: factor must be positive");
  TestFunction tf = *this;
  switch (kind_) {
    case Kind::Gaussian:
      tf.a_ = a_ * lambda * lambda;
      break;
    case Kind::ModulatedGaussian:
      tf.a_ = a_ * lambda * lambda;
      tf.omega_ = omega_ * lambda;
      break;
    case Kind::Bump:
      tf.R_ = R_ / lambda;
      break;
  }
  tf.shift_ = shift_ / lambda;
  return tf;
}

TestFunction TestFunction::translated(double shift) const {
  TestFunction tf = *this;
  tf.shift_ = shift_ + shift;
  return tf;
}

SampledFunction sample(const TestFunction& tf, const GridSpec& spec) {
  spec.validate();
  if (spec.n != tf.dim()) throw ConfigError("sample: grid and function dimensions differ");
  SampledFunction f;
  f.spec = spec;
  f.analytic = tf;
  f.values.resize(spec.total());
  const std::vector<double> x = spec.axis();
  const int N = spec.N;
  double edge = 0;
  if (spec.n == 1) {
    for (int k = 0; k < N; ++k) f.values[k] = tf.value(x[k]);
    edge = std::max(std::abs(f.values[0]), std::abs(f.values[N - 1]));
  } else {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) f.values[static_cast<std::size_t>(i) * N + j] = tf.value(x[i], x[j]);
    for (int i = 0; i < N; ++i) {
      for (int j : {0, N - 1}) {
        edge = std::max(edge, std::abs(f.values[static_cast<std::size_t>(i) * N + j]));
        edge = std::max(edge, std::abs(f.values[static_cast<std::size_t>(j) * N + i]));
      }
    }
  }
  f.tail_bound = edge;
  f.truncation_warning = edge > kTailTolerance;
  return f;
}

double lp_norm(const SampledFunction& f, double p) {
  if (!(p > 1) || std::isinf(p)) throw ConfigError("lp_norm: p must lie in (1,inf)");
  const double hn = std::pow(f.spec.h(), f.spec.n);
  double sum = 0;
  for (double v : f.values) sum += std::pow(std::abs(v), p);
  return std::pow(hn * sum, 1.0 / p);
}

namespace {

// Frequency along one axis in FFT index order; the Nyquist mode is zeroed so
// a first derivative of real data stays real.
double deriv_freq(int k, int N, double L) {
  if (2 * k == N) return 0.0;
  const int kk = k <= N / 2 ? k : k - N;
  return kk / (2.0 * L);
}

std::vector<double> spectral_gradient_sq(const SampledFunction& f) {
  const int N = f.spec.N;
  const double L = f.spec.L;
  std::vector<std::complex<double>> hat(f.values.begin(), f.values.end());
  fft_forward(hat.data(), f.spec.n, N);
  std::vector<double> grad2(f.values.size(), 0.0);
  std::vector<std::complex<double>> work(hat.size());
  const int n_axes = f.spec.n;
  for (int axis = 0; axis < n_axes; ++axis) {
    for (std::size_t idx = 0; idx < hat.size(); ++idx) {
      const int k = n_axes == 1 ? static_cast<int>(idx)
                                : (axis == 0 ? static_cast<int>(idx / N) : static_cast<int>(idx % N));
      const double xi = deriv_freq(k, N, L);
      work[idx] = hat[idx] * std::complex<double>(0.0, 2 * M_PI * xi);
    }
    fft_backward(work.data(), f.spec.n, N);
    const double scale = 1.0 / static_cast<double>(f.values.size());
    for (std::size_t idx = 0; idx < work.size(); ++idx) {
      const double d = work[idx].real() * scale;
      grad2[idx] += d * d;
    }
  }
  return grad2;
}

}  // namespace

double grad_lp_norm(const SampledFunction& f, double p, GradPath path) {
  if (!(p > 1) || std::isinf(p)) throw ConfigError("grad_lp_norm: p must lie in (1,inf)");
  if (path == GradPath::Auto) path = f.analytic ? GradPath::Analytic : GradPath::Spectral;
  const double hn = std::pow(f.spec.h(), f.spec.n);
  if (path == GradPath::Analytic) {
    if (!f.analytic) throw ConfigError("grad_lp_norm: no analytic handle");
    const TestFunction& tf = *f.analytic;
    const std::vector<double> x = f.spec.axis();
    const int N = f.spec.N;
    double sum = 0;
    if (f.spec.n == 1) {
      for (int k = 0; k < N; ++k) sum += std::pow(tf.grad_abs(x[k]), p);
    } else {
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) sum += std::pow(tf.grad_abs(x[i], x[j]), p);
    }
    return std::pow(hn * sum, 1.0 / p);
  }
  const std::vector<double> grad2 = spectral_gradient_sq(f);
  double sum = 0;
  for (double g2 : grad2) sum += std::pow(g2, 0.5 * p);
  return std::pow(hn * sum, 1.0 / p);
}

TrigInterpolant::TrigInterpolant(const SampledFunction& f) {
  if (f.spec.n != 1) throw ConfigError("TrigInterpolant: one-dimensional grids only");
  L_ = f.spec.L;
  const int N = f.spec.N;
  coef_.assign(f.values.begin(), f.values.end());
  fft_forward(coef_.data(), 1, N);
  for (int k = 0; k < N; ++k) {
    coef_[k] /= static_cast<double>(N);
    if (k % 2 == 1) coef_[k] = -coef_[k];  // grid starts at x = -L, not 0
  }
}

double TrigInterpolant::operator()(double x) const {
  const int N = static_cast<int>(coef_.size());
  double acc = 0;
  for (int k = 0; k < N; ++k) {
    const int kk = k <= N / 2 ? k : k - N;
    const double phase = M_PI * kk * x / L_;
    acc += coef_[k].real() * std::cos(phase) - coef_[k].imag() * std::sin(phase);
  }
  return acc;
}

}  // namespace fracspace
