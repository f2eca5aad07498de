#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "fracspace/grid.hpp"
#include "fracspace/types.hpp"

namespace fracspace {

/// Gamma function used by every closed-form identity below.  The fault hook
/// perturbs it by 1e-3 so self-checks can prove they would catch corruption.
double gamma_fn(double x);
void set_gamma_fault(bool on);
bool gamma_fault();

/// Hurwitz zeta  sum_{k>=0} (k+a)^{-sigma},  sigma > 1, a > 0
/// (Euler-Maclaurin with Bernoulli correction terms).
double hurwitz_zeta(double sigma, double a);

/// I_{2s} = int |xi|^{2s} |f-hat|^2 dxi for f = e^{-pi a |x|^2}, closed form;
/// s in (0, 1], n in {1, 2}.
double gaussian_spectral_moment(double s, int n, double a);

/// I_{2s} for any catalog function with a closed-form transform: the Gaussian
/// goes through the closed form, the modulated Gaussian through high-order
/// log-radial quadrature of |f-hat|^2.
double spectral_moment(const TestFunction& tf, double s);

/// A(n,s) = int (2 - 2 cos(2 pi z_1)) / |z|^{n+2s} dz by adaptive quadrature:
/// series expansion near 0, Gauss-Legendre panels in the middle, integration
/// by parts on the oscillatory tail; relative error target 1e-8.
double gagliardo_level_constant(int n, double s);

/// Same constant in closed Gamma form (the quadrature above cross-checks it).
double gagliardo_level_constant_closed(int n, double s);

enum class Hilbertian { W, E, F_cont, F_disc_poisson, F_disc_bandlimited, M_form };

/// Exact p=q=2 seminorm values on the Fourier side.  W, E, F_cont, and M_form
/// reduce to Gamma factors times I_{2s}; the discrete variants are dyadic
/// sums evaluated by radial quadrature (j_range defaults to a range wide
/// enough to be exhaustive; pass the engine's range to mirror its
/// truncation).
double hilbertian_exact(const TestFunction& tf, double s, Hilbertian which,
                        std::optional<JRange> j_range = std::nullopt);

/// Gamma-free 2D (xi, t) / (xi, r) quadratures re-deriving the closed forms.
double brute_force_spectral_moment(const TestFunction& tf, double s);
double brute_force_extension_sq(const TestFunction& tf, double s);
double brute_force_triebel_cont_sq(const TestFunction& tf, double s);
double brute_force_mixed_sq(const TestFunction& tf, double s);

struct ConvergenceReport {
  std::vector<double> values;  // evaluator at 0..budget doublings
  std::vector<double> deltas;  // successive relative changes
  bool monotone = true;
  bool stagnating = false;
};

/// Re-runs the evaluator at successive refinement levels (the evaluator maps
/// a doubling count to a value) and reports the delta sequence.
ConvergenceReport refine_check(const std::function<double(int)>& evaluator, int budget_doublings);

/// Full oracle consistency suite: closed Gamma identities vs the brute-force
/// quadratures at s in {0.3, 0.5, 0.7}, level-constant closed form vs
/// adaptive quadrature, plus pinned classical values.  Returns the worst
/// relative error; logs one line per check when a stream is given.
double oracle_self_check(double tol = 1e-6, std::ostream* log = nullptr);

}  // namespace fracspace
