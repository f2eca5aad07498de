#pragma once

#include <utility>
#include <vector>

namespace fracspace {

struct GridSpec;

/// Largest k with 2^k <= v.
int ilog2_floor(double v);
/// Smallest k with 2^k >= v.
int ilog2_ceil(double v);

/// Node/weight bounds for the t-scale, r-scale, and radial-z integrals.
/// Zero bounds mean "derive from the grid": t over [h/4, 4L], z over
/// [h/8, 4L], all snapped outward to powers of two so that every node set
/// lives on a dilation-stable dyadic lattice.
struct QuadratureSpec {
  double t_min = 0;
  double t_max = 0;
  int nodes_per_decade = 64;
  double z_r_min = 0;
  double z_r_max = 0;
  int angular_nodes = 32;
  double tail_tolerance = 1e-2;

  QuadratureSpec resolved(const GridSpec& g) const;
  /// nodes_per_decade converted to a per-octave count.
  int per_octave() const;
  /// Gauss-Legendre order used per octave panel (half the per-octave count).
  int gl_order() const;
  void validate() const;
};

struct NodeSet {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Strictly increasing nodes on the lattice {2^{k/m}} covering [lo, hi],
/// m = per_octave, merged with uniformly spaced points (step patch_delta)
/// inside each patch interval; trapezoid weights on the merged set.
NodeSet dyadic_log_nodes(double lo, double hi, int per_octave,
                         const std::vector<std::pair<double, double>>& patches = {},
                         double patch_delta = 0);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int order, std::vector<double>& x, std::vector<double>& w);

/// Gauss-Legendre panels on [bounds[i], bounds[i+1]] in the linear variable.
NodeSet gl_panels(const std::vector<double>& bounds, int order);

/// Gauss-Legendre panels in log coordinates; weights integrate dt (the
/// log-Jacobian is folded into the weights).
NodeSet gl_log_panels(const std::vector<double>& bounds, int order);

/// One Gauss-Legendre panel per octave [2^k, 2^{k+1}), k in [k_lo, k_hi).
/// Node positions within each octave are the same dyadic multiples, so
/// doubling the range shifts the set exactly in floating point.
NodeSet gl_log_octaves(int k_lo, int k_hi, int order);

}  // namespace fracspace
