#include "fracspace/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fracspace/grid.hpp"
#include "fracspace/types.hpp"

namespace fracspace {

int ilog2_floor(double v) {
  if (!(v > 0)) throw ConfigError("ilog2_floor: argument must be positive");
  int k = static_cast<int>(std::floor(std::log2(v)));
  while (std::ldexp(1.0, k + 1) <= v) ++k;
  while (std::ldexp(1.0, k) > v) --k;
  return k;
}

int ilog2_ceil(double v) {
  int k = ilog2_floor(v);
  return std::ldexp(1.0, k) == v ? k : k + 1;
}

QuadratureSpec QuadratureSpec::resolved(const GridSpec& g) const {
  QuadratureSpec r = *this;
  const double h = g.h();
  if (r.t_min <= 0) r.t_min = h / 4;
  if (r.t_max <= 0) r.t_max = 4 * g.L;
  if (r.z_r_min <= 0) r.z_r_min = h / 8;
  if (r.z_r_max <= 0) r.z_r_max = 4 * g.L;
  r.t_min = std::ldexp(1.0, ilog2_floor(r.t_min));
  r.t_max = std::ldexp(1.0, ilog2_ceil(r.t_max));
  r.z_r_min = std::ldexp(1.0, ilog2_floor(r.z_r_min));
  r.z_r_max = std::ldexp(1.0, ilog2_ceil(r.z_r_max));
  r.validate();
  return r;
}

int QuadratureSpec::per_octave() const {
  return std::max(1, static_cast<int>(std::lround(nodes_per_decade * 0.30102999566398120)));
}

int QuadratureSpec::gl_order() const {
  return std::clamp(static_cast<int>(std::lround(nodes_per_decade * 0.30102999566398120 / 2.0)),
                    4, 48);
}

void QuadratureSpec::validate() const {
  if (nodes_per_decade < 16) throw ConfigError("nodes_per_decade must be >= 16");
  if (t_min > 0 && t_max > 0 && !(t_min < t_max))
    throw ConfigError("t_min must be below t_max");
  if (z_r_min > 0 && z_r_max > 0 && !(z_r_min < z_r_max))
    throw ConfigError("z_r_min must be below z_r_max");
  if (angular_nodes < 4) throw ConfigError("angular_nodes must be >= 4");
  if (!(tail_tolerance > 0)) throw ConfigError("tail_tolerance must be positive");
}

namespace {
void trapezoid_weights(NodeSet& s) {
  const auto& z = s.nodes;
  const std::size_t n = z.size();
  s.weights.resize(n);
  if (n == 1) {
    s.weights[0] = 0;
    return;
  }
  s.weights.front() = 0.5 * (z[1] - z[0]);
  s.weights.back() = 0.5 * (z[n - 1] - z[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) s.weights[i] = 0.5 * (z[i + 1] - z[i - 1]);
}
}  // namespace

NodeSet dyadic_log_nodes(double lo, double hi, int per_octave,
                         const std::vector<std::pair<double, double>>& patches,
                         double patch_delta) {
  if (!(lo > 0 && hi > lo)) throw ConfigError("dyadic_log_nodes: need 0 < lo < hi");
  if (per_octave < 1) throw ConfigError("dyadic_log_nodes: per_octave must be >= 1");
  const double m = per_octave;
  const long k_lo = std::lround(std::floor(std::log2(lo) * m - 1e-9));
  const long k_hi = std::lround(std::ceil(std::log2(hi) * m + 1e-9));
  std::set<double> pts;
  for (long k = k_lo; k <= k_hi; ++k) {
    double z = std::exp2(static_cast<double>(k) / m);
    if (z >= lo * (1 - 1e-12) && z <= hi * (1 + 1e-12)) pts.insert(std::min(std::max(z, lo), hi));
  }
  pts.insert(lo);
  pts.insert(hi);
  if (patch_delta > 0) {
    for (const auto& [a, b] : patches) {
      const double pa = std::max(a, lo), pb = std::min(b, hi);
      if (!(pb > pa)) continue;
      const long i0 = std::lround(std::ceil(pa / patch_delta - 1e-12));
      const long i1 = std::lround(std::floor(pb / patch_delta + 1e-12));
      for (long i = i0; i <= i1; ++i)
        if (i > 0) pts.insert(static_cast<double>(i) * patch_delta);
    }
  }
  NodeSet out;
  out.nodes.assign(pts.begin(), pts.end());
  trapezoid_weights(out);
  return out;
}

void gauss_legendre(int order, std::vector<double>& x, std::vector<double>& w) {
  if (order < 1) throw ConfigError("gauss_legendre: order must be >= 1");
  x.resize(order);
  w.resize(order);
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton iteration from the Chebyshev-angle initial guess.
    double z = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = 0;
      for (int j = 0; j < order; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2 * j + 1) * z * p1 - j * p2) / (j + 1);
      }
      pp = order * (z * p0 - p1) / (z * z - 1);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[order - 1 - i] = z;
    w[i] = 2.0 / ((1 - z * z) * pp * pp);
    w[order - 1 - i] = w[i];
  }
  if (order % 2 == 1) x[order / 2] = 0;
}

NodeSet gl_panels(const std::vector<double>& bounds, int order) {
  if (bounds.size() < 2) throw ConfigError("gl_panels: need at least two boundaries");
  std::vector<double> gx, gw;
  gauss_legendre(order, gx, gw);
  NodeSet out;
  out.nodes.reserve((bounds.size() - 1) * order);
  out.weights.reserve((bounds.size() - 1) * order);
  for (std::size_t p = 0; p + 1 < bounds.size(); ++p) {
    const double a = bounds[p], b = bounds[p + 1];
    if (!(b > a)) throw ConfigError("gl_panels: boundaries must increase");
    for (int j = 0; j < order; ++j) {
      out.nodes.push_back(0.5 * (a + b) + 0.5 * (b - a) * gx[j]);
      out.weights.push_back(0.5 * (b - a) * gw[j]);
    }
  }
  return out;
}

NodeSet gl_log_panels(const std::vector<double>& bounds, int order) {
  if (bounds.size() < 2) throw ConfigError("gl_log_panels: need at least two boundaries");
  std::vector<double> gx, gw;
  gauss_legendre(order, gx, gw);
  NodeSet out;
  out.nodes.reserve((bounds.size() - 1) * order);
  out.weights.reserve((bounds.size() - 1) * order);
  for (std::size_t p = 0; p + 1 < bounds.size(); ++p) {
    const double la = std::log(bounds[p]), lb = std::log(bounds[p + 1]);
    if (!(bounds[p] > 0 && lb > la)) throw ConfigError("gl_log_panels: boundaries must increase");
    for (int j = 0; j < order; ++j) {
      const double u = 0.5 * (la + lb) + 0.5 * (lb - la) * gx[j];
      const double t = std::exp(u);
      out.nodes.push_back(t);
      out.weights.push_back(0.5 * (lb - la) * gw[j] * t);
    }
  }
  return out;
}

NodeSet gl_log_octaves(int k_lo, int k_hi, int order) {
  if (k_hi <= k_lo) throw ConfigError("gl_log_octaves: empty octave range");
  std::vector<double> gx, gw;
  gauss_legendre(order, gx, gw);
  NodeSet out;
  out.nodes.reserve(static_cast<std::size_t>(k_hi - k_lo) * order);
  out.weights.reserve(out.nodes.capacity());
  constexpr double ln2 = 0.69314718055994530942;
  for (int k = k_lo; k < k_hi; ++k) {
    const double base = std::ldexp(1.0, k);
    for (int j = 0; j < order; ++j) {
      // t = 2^k * 2^((x+1)/2): the per-octave factor is identical for every
      // k, so doubling the range shifts nodes exactly in floating point.
      const double t = base * std::exp2(0.5 * (gx[j] + 1.0));
      out.nodes.push_back(t);
      out.weights.push_back(0.5 * ln2 * gw[j] * t);
    }
  }
  return out;
}

}  // namespace fracspace
