#include "fracspace/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>

#include "fracspace/quadrature.hpp"
#include "fracspace/spectral.hpp"

namespace fracspace {

namespace {

std::atomic<bool> g_gamma_fault{false};

inline double sq(double v) { return v * v; }

}  // namespace

void set_gamma_fault(bool on) { g_gamma_fault.store(on); }

bool gamma_fault() { return g_gamma_fault.load(); }

double gamma_fn(double x) {
  const double v = std::tgamma(x);
  return g_gamma_fault.load(std::memory_order_relaxed) ? v * 1.001 : v;
}

double hurwitz_zeta(double sigma, double a) {
  if (!(sigma > 1) || !(a > 0)) throw ConfigError("hurwitz_zeta: need sigma > 1, a > 0");
  // Euler-Maclaurin: explicit head, integral and midpoint corrections at
  // x = a + M, then Bernoulli terms B_{2j}/(2j)! (sigma)_{2j-1} x^{-sigma-2j+1}.
  constexpr int M = 12;
  double sum = 0;
  for (int k = 0; k < M; ++k) sum += std::pow(a + k, -sigma);
  const double x = a + M;
  sum += std::pow(x, 1 - sigma) / (sigma - 1);
  sum += 0.5 * std::pow(x, -sigma);
  static constexpr double kBernoulli[5] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66};
  double pochhammer = sigma;   // sigma (sigma+1) ... (sigma+2j-2)
  double factorial = 2;        // (2j)!
  double xp = std::pow(x, -sigma - 1);
  for (int j = 1; j <= 5; ++j) {
    sum += kBernoulli[j - 1] / factorial * pochhammer * xp;
    pochhammer *= (sigma + 2 * j - 1) * (sigma + 2 * j);
    factorial *= (2 * j + 1) * (2 * j + 2);
    xp /= x * x;
  }
  return sum;
}

double gaussian_spectral_moment(double s, int n, double a) {
  if (!(s > 0 && s <= 1)) throw ConfigError("gaussian_spectral_moment: s must lie in (0,1]");
  if (n != 1 && n != 2) throw ConfigError("gaussian_spectral_moment: dimension must be 1 or 2");
  if (!(a > 0)) throw ConfigError("gaussian_spectral_moment: width must be positive");
  // f-hat(xi) = a^{-n/2} e^{-pi |xi|^2 / a}, so I_{2s} = a^{-n} int |xi|^{2s}
  // e^{-2 pi |xi|^2 / a} dxi; substituting u = 2 pi |xi|^2 / a gives
  //   n=1:  2 a^{-1} (1/2)(a/2pi)^{s+1/2} Gamma(s+1/2) = a^{s-1/2} (2pi)^{-(s+1/2)} Gamma(s+1/2)
  //   n=2:  2pi a^{-2} (1/2)(a/2pi)^{s+1}  Gamma(s+1)   = (1/2) a^{s-1} (2pi)^{-s} Gamma(s+1)
  if (n == 1)
    return std::pow(a, s - 0.5) * std::pow(2 * M_PI, -(s + 0.5)) * gamma_fn(s + 0.5);
  return 0.5 * std::pow(a, s - 1.0) * std::pow(2 * M_PI, -s) * gamma_fn(s + 1.0);
}

namespace {

// Radial reduction of |f-hat|^2: sum_i w_i g(xi_i) approximates
// int g(|xi|) |f-hat(xi)|^2 dxi for radial g (angular integral folded into w).
struct RadialDensity {
  std::vector<double> xi, w;
  double f0sq = 0;
  double lo = 0;
};

RadialDensity radial_density(const TestFunction& tf, int k_lo, int per_octave) {
  const int n = tf.dim();
  const int k_hi = std::max(2, ilog2_ceil(tf.fourier_decay_radius(1e-26)));
  const NodeSet g = gl_log_octaves(k_lo, k_hi, per_octave);
  RadialDensity d;
  d.lo = std::ldexp(1.0, k_lo);
  d.xi = g.nodes;
  d.w.resize(g.nodes.size());
  if (n == 1) {
    d.f0sq = sq(tf.fourier_abs(0.0));
    for (std::size_t i = 0; i < d.xi.size(); ++i)
      d.w[i] = 2.0 * g.weights[i] * sq(tf.fourier_abs(d.xi[i]));
  } else {
    d.f0sq = sq(tf.fourier_abs(0.0, 0.0));
    const int K = std::max(128, 64 * (1 + static_cast<int>(std::lround(tf.frequency()))));
    for (std::size_t i = 0; i < d.xi.size(); ++i) {
      const double r = d.xi[i];
      double acc = 0;
      for (int k = 0; k < K; ++k) {
        const double phi = 2 * M_PI * k / K;
        acc += sq(tf.fourier_abs(r * std::cos(phi), r * std::sin(phi)));
      }
      d.w[i] = g.weights[i] * r * acc * (2 * M_PI / K);
    }
  }
  return d;
}

}  // namespace

double spectral_moment(const TestFunction& tf, double s) {
  if (!tf.has_fourier())
    throw ConfigError("spectral_moment: test function has no closed-form transform");
  if (!(s > 0 && s <= 1)) throw ConfigError("spectral_moment: s must lie in (0,1]");
  if (tf.kind() == TestFunction::Kind::Gaussian)
    return gaussian_spectral_moment(s, tf.dim(), tf.width());
  // A modulated transform concentrates near |xi| = omega at width ~ sqrt(a),
  // much narrower than the octave there, so the radial rule needs extra depth.
  const RadialDensity d = radial_density(tf, -30, 48);
  double total = tf.dim() == 1 ? d.f0sq * 2 * std::pow(d.lo, 2 * s + 1) / (2 * s + 1)
                               : d.f0sq * 2 * M_PI * std::pow(d.lo, 2 * s + 2) / (2 * s + 2);
  for (std::size_t i = 0; i < d.xi.size(); ++i) total += d.w[i] * std::pow(d.xi[i], 2 * s);
  return total;
}

double gagliardo_level_constant_closed(int n, double s) {
  if (n != 1 && n != 2) throw ConfigError("gagliardo_level_constant: dimension must be 1 or 2");
  if (!(s > 0 && s < 1)) throw ConfigError("gagliardo_level_constant: s must lie in (0,1)");
  // A(1,s) = 4 (2pi)^{2s} int_0^inf (1-cos u) u^{-1-2s} du
  //        = 4 (2pi)^{2s} Gamma(1-2s) cos(pi s) / (2s);
  // the duplication formula removes the apparent s=1/2 pole:
  //   A(1,s) = 2 (2pi)^{2s} sqrt(pi) Gamma(1-s) / (4^s s Gamma(s+1/2)).
  // A(2,s) integrates the angle first, int (2-2cos(2pi z_1))|z|^{-2-2s} dz
  //        = 4pi int_0^inf (1-J_0(2pi r)) r^{-1-2s} dr, and reduces to
  //   A(2,s) = 2 (2pi)^{2s} pi Gamma(1-s) / (4^s s Gamma(s+1)).
  const double common = 2 * std::pow(2 * M_PI, 2 * s) * gamma_fn(1 - s) / (std::pow(4.0, s) * s);
  if (n == 1) return common * std::sqrt(M_PI) / gamma_fn(0.5 + s);
  return common * M_PI / gamma_fn(1 + s);
}

namespace {

// int_Z^inf trig(c z) z^{-nu} dz by repeated integration by parts:
//   C(g_k) = -sin(cZ) g_k(Z)/c - S(g_{k+1})/c
//   S(g_k) =  cos(cZ) g_k(Z)/c + C(g_{k+1})/c ,  g_k = d^k/dz^k z^{-nu}.
double osc_tail(bool cosine, double c, double nu, double Z, double* err = nullptr) {
  const double sz = std::sin(c * Z), cz = std::cos(c * Z);
  double total = 0, mult = 1, sign = 1;
  double deriv = std::pow(Z, -nu);  // |g_k(Z)|
  double prev = deriv;
  double rise = nu;
  bool is_cos = cosine;
  for (int k = 0; k < 10; ++k) {
    const double gk = sign * deriv;
    if (is_cos) {
      total += mult * (-sz * gk / c);
      mult = -mult / c;
    } else {
      total += mult * (cz * gk / c);
      mult = mult / c;
    }
    is_cos = !is_cos;
    prev = deriv;
    deriv *= rise / Z;
    rise += 1;
    sign = -sign;
  }
  if (err) *err = std::abs(mult) * prev;
  return total;
}

// J_0(u) = (1/pi) int_0^pi cos(u cos phi) dphi by midpoint rule; the even
// reflection is smooth, so the rule converges spectrally once K exceeds u.
double j0_angular(double u) {
  const int K = std::max(64, static_cast<int>(std::ceil(2 * u)));
  double acc = 0;
  for (int k = 0; k < K; ++k) acc += std::cos(u * std::cos(M_PI * (k + 0.5) / K));
  return acc / K;
}

std::vector<double> octave_bounds(double lo, double hi) {
  std::vector<double> b;
  for (double v = lo; v < hi * (1 - 1e-12); v *= 2) b.push_back(v);
  b.push_back(hi);
  return b;
}

std::vector<double> unit_bounds(double Z) {
  std::vector<double> b;
  for (double v = 1; v <= Z + 0.5; v += 1) b.push_back(v);
  return b;
}

double level_quad_1d(double s, int order, double Z) {
  const double delta = 0.25;
  // [0, delta]: 1 - cos(2 pi z) expanded termwise.
  double series = 0;
  {
    const double d2s = std::pow(delta, -2 * s);
    const double c = sq(2 * M_PI * delta);
    double x = 1.0;  // (2 pi delta)^{2m} / (2m)!
    double sign = 1;
    for (int m = 1; m <= 16; ++m) {
      x *= c / ((2 * m - 1) * (2 * m));
      series += sign * x * d2s / (2 * m - 2 * s);
      sign = -sign;
    }
  }
  const auto f = [s](double z) {
    return (1 - std::cos(2 * M_PI * z)) * std::pow(z, -1 - 2 * s);
  };
  double mid = 0;
  const NodeSet lg = gl_log_panels(octave_bounds(delta, 1.0), order);
  for (std::size_t i = 0; i < lg.nodes.size(); ++i) mid += lg.weights[i] * f(lg.nodes[i]);
  const NodeSet ln = gl_panels(unit_bounds(Z), order);
  for (std::size_t i = 0; i < ln.nodes.size(); ++i) mid += ln.weights[i] * f(ln.nodes[i]);
  const double tail = std::pow(Z, -2 * s) / (2 * s) - osc_tail(true, 2 * M_PI, 1 + 2 * s, Z);
  return 4 * (series + mid + tail);
}

double level_quad_2d(double s, int order, double Z) {
  const double delta = 0.25;
  // [0, delta]: 1 - J_0(2 pi r) = sum_{m>=1} (-1)^{m+1} (pi r)^{2m} / (m!)^2.
  double series = 0;
  {
    const double d2s = std::pow(delta, -2 * s);
    const double c = sq(M_PI * delta);
    double x = 1.0;  // (pi delta)^{2m} / (m!)^2
    double sign = 1;
    for (int m = 1; m <= 16; ++m) {
      x *= c / (m * m);
      series += sign * x * d2s / (2 * m - 2 * s);
      sign = -sign;
    }
  }
  const auto f = [s](double r) {
    return (1 - j0_angular(2 * M_PI * r)) * std::pow(r, -1 - 2 * s);
  };
  double mid = 0;
  const NodeSet lg = gl_log_panels(octave_bounds(delta, 1.0), order);
  for (std::size_t i = 0; i < lg.nodes.size(); ++i) mid += lg.weights[i] * f(lg.nodes[i]);
  const NodeSet ln = gl_panels(unit_bounds(Z), order);
  for (std::size_t i = 0; i < ln.nodes.size(); ++i) mid += ln.weights[i] * f(ln.nodes[i]);
  // Tail of int_Z^inf J_0(2 pi r) r^{-1-2s} dr from the large-argument form
  // J_0(w) ~ sqrt(2/(pi w)) [(1 - 9/(128 w^2)) cos(w - pi/4) + (1/(8w)) sin(w - pi/4)],
  // expanded into plain sin/cos integrals handled by osc_tail.
  const double nua = 1.5 + 2 * s, nub = 3.5 + 2 * s, nuc = 2.5 + 2 * s;
  const double Ca = osc_tail(true, 2 * M_PI, nua, Z), Sa = osc_tail(false, 2 * M_PI, nua, Z);
  const double Cb = osc_tail(true, 2 * M_PI, nub, Z), Sb = osc_tail(false, 2 * M_PI, nub, Z);
  const double Cc = osc_tail(true, 2 * M_PI, nuc, Z), Sc = osc_tail(false, 2 * M_PI, nuc, Z);
  const double T = ((Ca + Sa) - 9.0 / (512 * M_PI * M_PI) * (Cb + Sb) +
                    (Sc - Cc) / (16 * M_PI)) /
                   (M_PI * std::sqrt(2.0));
  const double tail = std::pow(Z, -2 * s) / (2 * s) - T;
  return 4 * M_PI * (series + mid + tail);
}

}  // namespace

double gagliardo_level_constant(int n, double s) {
  if (n != 1 && n != 2) throw ConfigError("gagliardo_level_constant: dimension must be 1 or 2");
  if (!(s > 0 && s < 1)) throw ConfigError("gagliardo_level_constant: s must lie in (0,1)");
  double prev = 0;
  bool have = false;
  int order = 16;
  double Z = 32;
  for (int it = 0; it < 4; ++it) {
    const double v = n == 1 ? level_quad_1d(s, order, Z) : level_quad_2d(s, order, Z);
    if (have && std::abs(v - prev) <= 1e-8 * std::abs(v)) return v;
    prev = v;
    have = true;
    order += 8;
    Z *= 2;
  }
  throw ResolutionError("gagliardo_level_constant: relative error target 1e-8 not reached");
}

double hilbertian_exact(const TestFunction& tf, double s, Hilbertian which,
                        std::optional<JRange> j_range) {
  if (!tf.has_fourier())
    throw ConfigError("hilbertian_exact: test function has no closed-form transform");
  if (!(s > 0 && s < 1)) throw ConfigError("hilbertian_exact: s must lie in (0,1)");
  switch (which) {
    case Hilbertian::W:
      // W^2 = int |f-hat|^2 int (2 - 2 cos(2 pi xi.z)) |z|^{-n-2s} dz dxi
      //     = A(n,s) I_{2s}   (rescale z by |xi| in the inner integral).
      return std::sqrt(gagliardo_level_constant_closed(tf.dim(), s) * spectral_moment(tf, s));
    case Hilbertian::E: {
      // Plancherel per t-slice:
      //   E^2 = int int t^{1-2s} (2 pi |xi|)^2 e^{-4 pi t |xi|} |f-hat|^2 dt dxi
      // and int_0^inf t^{1-2s} e^{-4 pi t |xi|} dt = Gamma(2-2s)(4 pi |xi|)^{2s-2}:
      //   E^2 = 4 pi^2 (4 pi)^{2s-2} Gamma(2-2s) I_{2s}.
      const double c = 4 * M_PI * M_PI * std::pow(4 * M_PI, 2 * s - 2) * gamma_fn(2 - 2 * s);
      return std::sqrt(c * spectral_moment(tf, s));
    }
    case Hilbertian::F_cont: {
      // Same route with the second derivative symbol and weight t^{3-2s}:
      //   F^2 = (2 pi)^4 (4 pi)^{2s-4} Gamma(4-2s) I_{2s}.
      const double c = std::pow(2 * M_PI, 4) * std::pow(4 * M_PI, 2 * s - 4) * gamma_fn(4 - 2 * s);
      return std::sqrt(c * spectral_moment(tf, s));
    }
    case Hilbertian::M_form: {
      // Fubini over r < t with int_r^inf t e^{-bt} dt = e^{-br}(r/b + b^{-2}):
      //   int_0^inf r^{1-2s} e^{-br}(r/b + b^{-2}) dr = b^{2s-4}[Gamma(3-2s) + Gamma(2-2s)]
      // and Gamma(3-2s) + Gamma(2-2s) = (3-2s) Gamma(2-2s), so
      //   M^2 = (2 pi)^4 (4 pi)^{2s-4} (3-2s) Gamma(2-2s) I_{2s}.
      const double c = std::pow(2 * M_PI, 4) * std::pow(4 * M_PI, 2 * s - 4) * (3 - 2 * s) *
                       gamma_fn(2 - 2 * s);
      return std::sqrt(c * spectral_moment(tf, s));
    }
    case Hilbertian::F_disc_poisson: {
      // Per-block Plancherel: F^2 = sum_j 2^{2js} int u^4 e^{-4 pi u} |f-hat|^2 dxi,
      // u = 2^{-j} |xi|.
      const JRange r = j_range.value_or(JRange{-48, 48});
      if (!r.valid()) throw ConfigError("hilbertian_exact: empty j_range");
      const RadialDensity d = radial_density(tf, std::min(-50, r.lo - 6), 16);
      double total = 0;
      for (int j = r.lo; j <= r.hi; ++j) {
        const double scale = std::exp2(static_cast<double>(-j));
        double bj = 0;
        for (std::size_t i = 0; i < d.xi.size(); ++i) {
          const double u = scale * d.xi[i];
          if (u > 60) break;  // nodes ascend and e^{-4 pi u} has underflowed
          bj += d.w[i] * u * u * u * u * std::exp(-4 * M_PI * u);
        }
        total += std::exp2(2.0 * j * s) * bj;
      }
      return std::sqrt(total);
    }
    case Hilbertian::F_disc_bandlimited: {
      const JRange r = j_range.value_or(JRange{-48, 48});
      if (!r.valid()) throw ConfigError("hilbertian_exact: empty j_range");
      const RadialDensity d = radial_density(tf, std::min(-50, r.lo - 2), 32);
      double total = 0;
      for (int j = r.lo; j <= r.hi; ++j) {
        const double scale = std::exp2(static_cast<double>(-j));
        double bj = 0;
        for (std::size_t i = 0; i < d.xi.size(); ++i) {
          const double u = scale * d.xi[i];
          if (u >= 2) break;
          if (u > 0.5) bj += d.w[i] * sq(bandlimited_psi(u));
        }
        total += std::exp2(2.0 * j * s) * bj;
      }
      return std::sqrt(total);
    }
  }
  throw ConfigError("hilbertian_exact: unknown variant");
}

double brute_force_spectral_moment(const TestFunction& tf, double s) {
  if (!(s > 0 && s <= 1)) throw ConfigError("brute_force_spectral_moment: s must lie in (0,1]");
  const RadialDensity d = radial_density(tf, -20, 12);
  double total = tf.dim() == 1 ? d.f0sq * 2 * std::pow(d.lo, 2 * s + 1) / (2 * s + 1)
                               : d.f0sq * 2 * M_PI * std::pow(d.lo, 2 * s + 2) / (2 * s + 2);
  for (std::size_t i = 0; i < d.xi.size(); ++i) total += d.w[i] * std::pow(d.xi[i], 2 * s);
  return total;
}

double brute_force_extension_sq(const TestFunction& tf, double s) {
  if (!(s > 0 && s < 1)) throw ConfigError("brute_force_extension_sq: s must lie in (0,1)");
  const RadialDensity d = radial_density(tf, -20, 12);
  const NodeSet tg = gl_log_octaves(-60, 30, 12);
  const double t0 = std::ldexp(1.0, -60);
  double total = 0;
  for (std::size_t i = 0; i < d.xi.size(); ++i) {
    const double b = 4 * M_PI * d.xi[i];
    double inner = std::pow(t0, 2 - 2 * s) / (2 - 2 * s);  // [0, t0), where e^{-bt} ~ 1
    for (std::size_t k = 0; k < tg.nodes.size(); ++k) {
      const double e = b * tg.nodes[k];
      if (e > 745) break;
      inner += tg.weights[k] * std::pow(tg.nodes[k], 1 - 2 * s) * std::exp(-e);
    }
    total += d.w[i] * sq(2 * M_PI * d.xi[i]) * inner;
  }
  return total;
}

double brute_force_triebel_cont_sq(const TestFunction& tf, double s) {
  if (!(s > 0 && s < 1)) throw ConfigError("brute_force_triebel_cont_sq: s must lie in (0,1)");
  const RadialDensity d = radial_density(tf, -20, 12);
  const NodeSet tg = gl_log_octaves(-60, 30, 12);
  const double t0 = std::ldexp(1.0, -60);
  double total = 0;
  for (std::size_t i = 0; i < d.xi.size(); ++i) {
    const double b = 4 * M_PI * d.xi[i];
    double inner = std::pow(t0, 4 - 2 * s) / (4 - 2 * s);
    for (std::size_t k = 0; k < tg.nodes.size(); ++k) {
      const double e = b * tg.nodes[k];
      if (e > 745) break;
      inner += tg.weights[k] * std::pow(tg.nodes[k], 3 - 2 * s) * std::exp(-e);
    }
    total += d.w[i] * sq(sq(2 * M_PI * d.xi[i])) * inner;
  }
  return total;
}

double brute_force_mixed_sq(const TestFunction& tf, double s) {
  if (!(s > 0 && s < 1)) throw ConfigError("brute_force_mixed_sq: s must lie in (0,1)");
  const RadialDensity d = radial_density(tf, -20, 12);
  const NodeSet rg = gl_log_octaves(-60, 30, 12);
  const double r0 = std::ldexp(1.0, -60);
  double total = 0;
  for (std::size_t i = 0; i < d.xi.size(); ++i) {
    const double b = 4 * M_PI * d.xi[i];
    // int_r^inf t e^{-bt} dt = e^{-br}(r/b + b^{-2}), elementary and Gamma-free.
    double inner = std::pow(r0, 2 - 2 * s) / ((2 - 2 * s) * b * b) +
                   std::pow(r0, 3 - 2 * s) / ((3 - 2 * s) * b);
    for (std::size_t k = 0; k < rg.nodes.size(); ++k) {
      const double r = rg.nodes[k];
      const double e = b * r;
      if (e > 745) break;
      inner += rg.weights[k] * std::pow(r, 1 - 2 * s) * std::exp(-e) * (r / b + 1 / (b * b));
    }
    total += d.w[i] * sq(sq(2 * M_PI * d.xi[i])) * inner;
  }
  return total;
}

ConvergenceReport refine_check(const std::function<double(int)>& evaluator, int budget_doublings) {
  if (budget_doublings < 1) throw ConfigError("refine_check: need at least one doubling");
  ConvergenceReport r;
  for (int k = 0; k <= budget_doublings; ++k) r.values.push_back(evaluator(k));
  for (int k = 0; k < budget_doublings; ++k) {
    const double denom = std::max(std::abs(r.values[k + 1]), 1e-300);
    r.deltas.push_back(std::abs(r.values[k + 1] - r.values[k]) / denom);
  }
  for (std::size_t i = 0; i + 1 < r.deltas.size(); ++i)
    if (r.deltas[i + 1] > r.deltas[i] * 1.1 && r.deltas[i + 1] > 1e-12) r.monotone = false;
  if (r.deltas.size() >= 2) {
    const double last = r.deltas.back();
    const double before = r.deltas[r.deltas.size() - 2];
    r.stagnating = last > 0.5 * before && last > 1e-12;
  }
  return r;
}

double oracle_self_check(double tol, std::ostream* log) {
  double worst = 0;
  const auto note = [&](const char* name, double s, double got, double want) {
    const double rel = std::abs(got - want) / std::abs(want);
    worst = std::max(worst, rel);
    if (log)
      (*log) << "oracle " << name << " s=" << s << " rel_err=" << rel
             << (rel <= tol ? "" : "  **FAIL**") << "\n";
  };
  const TestFunction g1 = TestFunction::gaussian(1.0, 1);
  const TestFunction g2 = TestFunction::gaussian(1.0, 2);
  for (const double s : {0.3, 0.5, 0.7}) {
    note("I_2s[n=1] closed vs brute", s, gaussian_spectral_moment(s, 1, 1.0),
         brute_force_spectral_moment(g1, s));
    note("I_2s[n=2] closed vs brute", s, gaussian_spectral_moment(s, 2, 1.0),
         brute_force_spectral_moment(g2, s));
    note("E^2 identity vs brute", s, sq(hilbertian_exact(g1, s, Hilbertian::E)),
         brute_force_extension_sq(g1, s));
    note("F^2 identity vs brute", s, sq(hilbertian_exact(g1, s, Hilbertian::F_cont)),
         brute_force_triebel_cont_sq(g1, s));
    note("M^2 identity vs brute", s, sq(hilbertian_exact(g1, s, Hilbertian::M_form)),
         brute_force_mixed_sq(g1, s));
    note("A(1,s) closed vs quadrature", s, gagliardo_level_constant_closed(1, s),
         gagliardo_level_constant(1, s));
    note("A(2,s) closed vs quadrature", s, gagliardo_level_constant_closed(2, s),
         gagliardo_level_constant(2, s));
  }
  note("A(1,1/2) classical value", 0.5, gagliardo_level_constant_closed(1, 0.5),
       4 * M_PI * M_PI);
  note("E Gaussian s=1/2", 0.5, hilbertian_exact(g1, 0.5, Hilbertian::E), std::sqrt(0.5));
  note("I_1[n=1] value", 0.5, gaussian_spectral_moment(0.5, 1, 1.0), 1 / (2 * M_PI));
  return worst;
}

}  // namespace fracspace
