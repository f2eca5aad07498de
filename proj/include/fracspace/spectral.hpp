#pragma once

#include <cmath>
#include <vector>

#include "fracspace/grid.hpp"
#include "fracspace/quadrature.hpp"
#include "fracspace/types.hpp"

namespace fracspace {

/// Per-axis frequencies in FFT index order: xi_k = k/(2L) for k <= N/2,
/// (k-N)/(2L) above; the DC mode sits at index 0.
struct FrequencyGrid {
  GridSpec spec;
  std::vector<double> xi;

  explicit FrequencyGrid(const GridSpec& s);
  double nyquist() const { return spec.N / (4.0 * spec.L); }
  /// |xi| at a flat row-major index.
  double abs_at(std::size_t flat) const;
};

/// Smooth transition 1 -> 0 across rho in [1, 2]:
/// H(rho) = G(2-rho) / (G(2-rho) + G(rho-1)) with G(u) = e^{-1/u} (u > 0).
inline double window_step(double rho) {
  if (rho <= 1) return 1.0;
  if (rho >= 2) return 0.0;
  const double g2 = std::exp(-1.0 / (2.0 - rho));
  const double g1 = std::exp(-1.0 / (rho - 1.0));
  return g2 / (g2 + g1);
}

/// Band-limited block profile psi-hat(rho) = H(rho) - H(2 rho), supported on
/// [1/2, 2]; the dyadic family psi-hat(2^{-j} rho) telescopes to 1 off 0.
inline double bandlimited_psi(double rho) { return window_step(rho) - window_step(2 * rho); }

struct MultiplierKind {
  enum class Variant {
    PoissonSemigroup,    // e^{-2 pi t |xi|}
    PoissonDerivative,   // (-2 pi |xi|)^m e^{-2 pi t |xi|}
    LPBlockPoisson,      // |2^{-j} xi|^2 e^{-2 pi 2^{-j} |xi|}
    LPBlockBandlimited,  // psi-hat(2^{-j} |xi|)
    FracLaplacian,       // |xi|^s, DC mode 0
  };

  Variant variant = Variant::PoissonSemigroup;
  double t = 0;
  int m = 1;
  int j = 0;
  double s = 0;

  static MultiplierKind poisson_semigroup(double t);
  static MultiplierKind poisson_derivative(double t, int m);
  static MultiplierKind lp_block_poisson(int j);
  static MultiplierKind lp_block_bandlimited(int j);
  static MultiplierKind frac_laplacian(double s);

  double symbol(double abs_xi) const;
  void validate() const;
};

/// inverse-FFT(symbol * FFT(f)); the imaginary residue must stay below
/// 1e-10 ||f||_2 or the call fails with ResolutionError.
SampledFunction apply_multiplier(const SampledFunction& f, const MultiplierKind& kind);

/// d^m/dt^m P_t * f, m in {1, 2}.
SampledFunction poisson_dt(const SampledFunction& f, double t, int m);

enum class LPKernel { Poisson, Bandlimited };

/// Dyadic frequency block at level j; requires 2^{-j} within [h, 2L].
SampledFunction lp_block(const SampledFunction& f, int j, LPKernel kernel);

/// Levels resolvable on the grid: 2^{-j} in [h, 2L].
JRange default_j_range(const GridSpec& spec);

/// Multiplier |xi|^s, s in (0, 2).
SampledFunction frac_laplacian_spectral(const SampledFunction& f, double s);

/// Second-difference singular integral
///   D f(x) = int (2 f(x) - f(x+z) - f(x-z)) / |z|^{n+s} dz  (z over a half
/// space, so D is proportional to the |xi|^s multiplier with a measured, not
/// assumed, constant).  n=1 folds the kernel over the 2L period and works on
/// grid values alone; n=2 sums the free-space lattice, needs the analytic
/// handle, and fills only the core box |x|_inf <= core_radius (zero outside).
SampledFunction frac_laplacian_difference(const SampledFunction& f, double s,
                                          const QuadratureSpec& quad);

}  // namespace fracspace
