#pragma once

#include <optional>
#include <vector>

#include "fracspace/grid.hpp"
#include "fracspace/parallel.hpp"
#include "fracspace/quadrature.hpp"
#include "fracspace/spectral.hpp"
#include "fracspace/types.hpp"

namespace fracspace {

/// Exponent triple (s, p, q), all in open ranges: s in (0,1), p and q in
/// (1,inf).  Endpoints are rejected, never clamped — the blow-up factors
/// near them are exactly what the experiments measure.  The optional theta
/// is the admissibility threshold; it defaults to s where a check needs it.
struct SeminormParams {
  double s = 0.5;
  double p = 2.0;
  double q = 2.0;
  std::optional<double> theta;

  double p_conj() const { return p / (p - 1.0); }
  double q_conj() const { return q / (q - 1.0); }
  /// p > n q / (n + theta q); equality (to rounding) counts as failure.
  bool admissible_W(int n) const;
  /// The same constraint on the Holder conjugates p', q'.
  bool admissible_dual(int n) const;
  void validate() const;
};

/// A seminorm value together with the relative weight of everything that
/// was extrapolated or bounded instead of integrated (range ends, omitted
/// levels).  Evaluators throw ResolutionError when tail_est exceeds the
/// QuadratureSpec tail_tolerance.
struct SeminormResult {
  double value = 0.0;
  double tail_est = 0.0;
};

enum class SeminormKind { Gagliardo, Extension, TriebelDiscrete, TriebelContinuous, MixedForm };

/// One entry of a batch evaluation.  kernel and j_range apply only to
/// TriebelDiscrete; j_range falls back to the grid's resolvable band.
struct SeminormRequest {
  SeminormKind kind = SeminormKind::Extension;
  SeminormParams params;
  LPKernel kernel = LPKernel::Bandlimited;
  std::optional<JRange> j_range;
};

/// Evaluates all requests over f in one sweep: Poisson-derivative fields
/// are computed once per t-node and shared by every Extension, continuous
/// Triebel-Lizorkin, and mixed-form request; Gagliardo requests share the
/// per-point difference scan across their s values.  Results line up with
/// the request order.  Serial and parallel modes produce bitwise-identical
/// results.
std::vector<SeminormResult> evaluate_batch(const SampledFunction& f,
                                           const std::vector<SeminormRequest>& requests,
                                           const QuadratureSpec& quad,
                                           ExecMode mode = ExecMode::Parallel);

/// (int (int |f(x+z)-f(x)|^q / |z|^{n+sq} dz)^{p/q} dx)^{1/p}.  The z
/// integral runs in polar form on a dyadic-log radial grid with linear
/// patches where f's own structure crosses the sphere |z| = |x - c|; the
/// |z| < z_r_min piece enters through a measured-slope power law.  Throws
/// ConfigError when p <= nq/(n+sq), where the outer integral diverges.
SeminormResult gagliardo(const SampledFunction& f, const SeminormParams& params,
                         const QuadratureSpec& quad, ExecMode mode = ExecMode::Parallel);

/// (int (int t^{q(1-s)-1} |d_t P_t*f(x)|^q dt)^{p/q} dx)^{1/p} over the
/// resolved t-range, with power-law extrapolation below t_min and an
/// L^1-kernel bound above t_max folded into tail_est.
SeminormResult extension_seminorm(const SampledFunction& f, const SeminormParams& params,
                                  const QuadratureSpec& quad,
                                  ExecMode mode = ExecMode::Parallel);

/// (int (sum_j |2^{js} lp_block(f,j)(x)|^q)^{p/q} dx)^{1/p} over j_range.
/// Omitted levels are bounded geometrically from the edge-level decay;
/// an uncertifiable edge ratio raises ResolutionError.
SeminormResult triebel_discrete(const SampledFunction& f, const SeminormParams& params,
                                const JRange& j_range, LPKernel kernel,
                                ExecMode mode = ExecMode::Parallel);

/// (int (int t^{q(2-s)} |d_t^2 P_t*f(x)|^q dt/t)^{p/q} dx)^{1/p}, the
/// second-derivative continuous characterization; tails as in
/// extension_seminorm.
SeminormResult triebel_continuous(const SampledFunction& f, const SeminormParams& params,
                                  const QuadratureSpec& quad,
                                  ExecMode mode = ExecMode::Parallel);

/// (int (int r^{q(1-s)-1} [int_r^inf t |d_t^2 P_t*f(x)|^2 dt]^{q/2} dr)^{p/q} dx)^{1/p}.
/// The inner t-integral is a cumulative suffix over the shared t-grid,
/// built in one descending pass and reused by every r node.
SeminormResult extension_mixed_form(const SampledFunction& f, const SeminormParams& params,
                                    const QuadratureSpec& quad,
                                    ExecMode mode = ExecMode::Parallel);

/// [f]_{F^sigma_{p,2}} for sigma in [0,1]: the band-limited discrete sum
/// at inner exponent 2, admitting the endpoint orders the (0,1)-only
/// SeminormParams window excludes.  sigma = 1 routes through the gradient
/// norm (the order-1 surrogate); sigma = 0 is the unweighted square sum.
SeminormResult triebel_order(const SampledFunction& f, double sigma, double p,
                             ExecMode mode = ExecMode::Parallel);

}  // namespace fracspace
