#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fracspace/grid.hpp"
#include "fracspace/quadrature.hpp"
#include "fracspace/seminorms.hpp"

namespace fracspace {

/// The s values a scan sweeps, strictly increasing inside (0,1).  The
/// default grid crowds toward 1 so the (1-s) blow-up direction dominates
/// the table.
struct SGrid {
  std::vector<double> values;
  static SGrid defaults();
  void validate() const;
};

/// Orders v < s < sigma for the interpolation inequality; sigma may reach 1
/// (gradient surrogate) and v may reach 0.
struct InterpolationTriple {
  double v = 0.0;
  double s = 0.5;
  double sigma = 1.0;
  void validate() const;
};

/// Theta steers the order gap (1 - sigma_bar) = Theta (1 - s); gamma enters
/// only the W variant, through theta = 1 - 1/gamma and the dual
/// admissibility requirement.
struct LowerSobolevParams {
  double Theta = 2.0;
  double gamma = 2.0;
};

enum class SharpnessPair { E_vs_F, E_vs_Fp2, W_vs_F, W_vs_Fp2, W_vs_E, PT_kernels };
enum class TargetSeminorm { E, W };

struct ScanRow {
  double s = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double tail_lhs = 0.0;
  double tail_rhs = 0.0;
};

struct ScanSummary {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double band = 1.0;  // max_ratio / min_ratio, always >= 1
  double slope = 0.0;  // log ratio vs log(1-s), when enough rows support it
  bool pass = false;
};

struct ReportMeta {
  std::string fn;
  std::string op;
  double p = 0.0;
  double q = 0.0;
  double threshold = 0.0;
  QuadratureSpec quad;
  std::vector<std::string> flags;
};

struct RatioReport {
  std::vector<ScanRow> rows;
  ScanSummary summary;
  ReportMeta meta;
};

/// Ratio-band verdict thresholds: comparisons across seminorm families get
/// a generous tripwire, same-family kernel swaps a tight one.
inline constexpr double kCrossFamilyBand = 50.0;
inline constexpr double kKernelBand = 10.0;
inline constexpr double kBbmStabilization = 0.03;
inline constexpr double kInterpUniformity = 20.0;
inline constexpr double kLowerSupBound = 50.0;
inline constexpr double kLowerSlopeFloor = -0.1;

/// One sharpness table: lhs and rhs carry the inequality's own (1-s)
/// normalization, so a bounded ratio band is the sharpness statement.
/// theta defaults to s row by row; W pairs require admissibility for the
/// configured theta and report violations as errors.  The verdict band is
/// taken over s >= 0.5.
RatioReport sharpness_scan(const SampledFunction& f, double p, double q,
                           const SGrid& s_grid, SharpnessPair pair,
                           std::optional<double> theta = std::nullopt,
                           const QuadratureSpec& quad = {},
                           ExecMode mode = ExecMode::Parallel);

/// R(s) = (1-s)^{1/q} [f]_E / ||grad f||_p; the verdict is Cauchy-style
/// stabilization of the last three rows, not convergence to an asserted
/// limit.  The grid must reach 1 - 2^{-10}.
RatioReport bbm1_limit(const SampledFunction& f, double p, double q,
                       const SGrid& s_grid, const QuadratureSpec& quad = {},
                       ExecMode mode = ExecMode::Parallel);

/// Default catalog of 12 triples: four (v, sigma) shapes at each
/// s in {0.6, 0.75, 0.9}, including the sigma = 1, v = 2s-1 pairing the
/// BBM limit argument leans on.
std::vector<InterpolationTriple> default_interpolation_triples();

/// C(triple) = [f]_{target} / ((sigma-s)^{-1/q} [f]_{F^sigma_{p,2}} +
/// (s-v)^{-1/q} [f]_{F^v_{p,2}}); PASS when max C / median C stays under
/// the uniformity threshold.  sigma = 1 rows use the gradient surrogate
/// and are flagged.
RatioReport sobolev_interpolation_check(const SampledFunction& f, double p, double q,
                                        const std::vector<InterpolationTriple>& triples,
                                        TargetSeminorm target,
                                        const QuadratureSpec& quad = {},
                                        ExecMode mode = ExecMode::Parallel);

/// C(s, sigma) = [f]_{F^sigma_{p,2}} / (||f||_p + (1-s)^{1/q} [f]_{target})
/// for sigma in {1/2, 3/4, 0.95} of sigma_bar = 1 - Theta(1-s), over the
/// grid points inside the admissible s range; PASS when the sup stays
/// under the bound and shows no growth trend toward s = 1.
RatioReport lower_sobolev_check(const SampledFunction& f, double p, double q,
                                const LowerSobolevParams& params,
                                TargetSeminorm target, const SGrid& s_grid,
                                const QuadratureSpec& quad = {},
                                ExecMode mode = ExecMode::Parallel);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
};

/// Least squares of log(values) against log(1-s); needs at least four
/// strictly positive values.
SlopeFit slope_fit(const std::vector<double>& s_values,
                   const std::vector<double>& values);

/// triebel_discrete(Poisson) / triebel_discrete(bandlimited) per s; the
/// verdict band is taken over s in [0.1, 0.95], where the kernel swap is
/// supposed to be s-uniform.
RatioReport kernel_equivalence_scan(const SampledFunction& f, double p, double q,
                                    const SGrid& s_grid,
                                    const QuadratureSpec& quad = {},
                                    ExecMode mode = ExecMode::Parallel);

}  // namespace fracspace
