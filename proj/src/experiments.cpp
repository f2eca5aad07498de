#include "fracspace/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "fracspace/spectral.hpp"
#include "fracspace/types.hpp"

namespace fracspace {

namespace {

void require_nonzero(const SampledFunction& f, const char* op) {
  for (const double v : f.values)
    if (v != 0.0) return;
  throw ConfigError(std::string(op) + ": zero function");
}

std::string fn_identity(const SampledFunction& f) {
  return f.analytic ? f.analytic->id() : "sampled";
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

/// min/max/band over the verdict rows, slope over all rows when the fit is
/// supported; callers set summary.pass afterwards.
void summarize(RatioReport& rep, const std::vector<std::size_t>& verdict_rows) {
  auto& sm = rep.summary;
  sm.min_ratio = sm.max_ratio = rep.rows.empty() ? 0.0 : rep.rows.front().ratio;
  for (const auto& r : rep.rows) {
    sm.min_ratio = std::min(sm.min_ratio, r.ratio);
    sm.max_ratio = std::max(sm.max_ratio, r.ratio);
  }
  double lo = 0, hi = 0;
  bool first = true;
  for (const std::size_t i : verdict_rows) {
    const double v = rep.rows[i].ratio;
    lo = first ? v : std::min(lo, v);
    hi = first ? v : std::max(hi, v);
    first = false;
  }
  sm.band = (!first && lo > 0) ? hi / lo : 1.0;
  std::vector<double> ss, vv;
  for (const auto& r : rep.rows)
    if (r.ratio > 0 && r.s < 1.0) {
      ss.push_back(r.s);
      vv.push_back(r.ratio);
    }
  if (ss.size() >= 4)
    sm.slope = slope_fit(ss, vv).slope;
  else
    rep.meta.flags.push_back("too few rows for a slope fit");
}

const char* pair_name(SharpnessPair pair) {
  switch (pair) {
    case SharpnessPair::E_vs_F: return "E_vs_F";
    case SharpnessPair::E_vs_Fp2: return "E_vs_Fp2";
    case SharpnessPair::W_vs_F: return "W_vs_F";
    case SharpnessPair::W_vs_Fp2: return "W_vs_Fp2";
    case SharpnessPair::W_vs_E: return "W_vs_E";
    case SharpnessPair::PT_kernels: return "PT_kernels";
  }
  return "?";
}

}  // namespace

SGrid SGrid::defaults() {
  SGrid g;
  g.values = {0.1, 0.2, 0.3};
  for (int k = 1; k <= 10; ++k) g.values.push_back(1.0 - std::exp2(double(-k)));
  return g;
}

void SGrid::validate() const {
  if (values.empty()) throw ConfigError("s_grid: needs at least one value");
  double prev = 0.0;
  for (const double s : values) {
    if (!(s > 0.0) || !(s < 1.0) || !std::isfinite(s))
      throw ConfigError("s_grid: every s must lie in (0,1)");
    if (!(s > prev)) throw ConfigError("s_grid: values must increase strictly");
    prev = s;
  }
}

void InterpolationTriple::validate() const {
  if (!(v >= 0.0) || !(v < s) || !(s < sigma) || !(sigma <= 1.0))
    throw ConfigError("interpolation triple needs 0 <= v < s < sigma <= 1");
}

SlopeFit slope_fit(const std::vector<double>& s_values,
                   const std::vector<double>& values) {
  if (s_values.size() != values.size() || s_values.size() < 4)
    throw ConfigError("slope_fit: needs at least four points");
  const std::size_t m = values.size();
  double sx = 0, sy = 0;
  std::vector<double> xs(m), ys(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i]))
      throw ConfigError("slope_fit: values must be positive");
    if (!(s_values[i] > 0.0) || !(s_values[i] < 1.0))
      throw ConfigError("slope_fit: s values must lie in (0,1)");
    xs[i] = std::log1p(-s_values[i]);
    ys[i] = std::log(values[i]);
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / double(m), my = sy / double(m);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0)) throw ConfigError("slope_fit: s values must not coincide");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double e = ys[i] - fit.intercept - fit.slope * xs[i];
    rss += e * e;
  }
  fit.residual = std::sqrt(rss / double(m));
  return fit;
}

RatioReport sharpness_scan(const SampledFunction& f, double p, double q,
                           const SGrid& s_grid, SharpnessPair pair,
                           std::optional<double> theta,
                           const QuadratureSpec& quad, ExecMode mode) {
  s_grid.validate();
  require_nonzero(f, "sharpness_scan");
  const int n = f.spec.n;
  const std::size_t m = s_grid.values.size();

  const bool w_side = pair == SharpnessPair::W_vs_F ||
                      pair == SharpnessPair::W_vs_Fp2 ||
                      pair == SharpnessPair::W_vs_E;
  const bool e_side = pair == SharpnessPair::E_vs_F ||
                      pair == SharpnessPair::E_vs_Fp2 ||
                      pair == SharpnessPair::W_vs_E;
  const bool fc_side =
      pair == SharpnessPair::E_vs_F || pair == SharpnessPair::W_vs_F;

  std::vector<SeminormRequest> reqs;
  std::vector<std::size_t> w_at(m), e_at(m), fc_at(m);
  for (std::size_t i = 0; i < m; ++i) {
    SeminormParams prm;
    prm.s = s_grid.values[i];
    prm.p = p;
    prm.q = q;
    prm.theta = theta;
    if (w_side) {
      if (!prm.admissible_W(n))
        throw ConfigError(
            "sharpness_scan: W side inadmissible; need p > n q / (n + theta q)");
      if (pair == SharpnessPair::W_vs_E && !prm.admissible_dual(n))
        throw ConfigError(
            "sharpness_scan: W side inadmissible; need p' > n q' / (n + theta q')");
      SeminormRequest r;
      r.kind = SeminormKind::Gagliardo;
      r.params = prm;
      w_at[i] = reqs.size();
      reqs.push_back(r);
    }
    if (e_side) {
      SeminormRequest r;
      r.kind = SeminormKind::Extension;
      r.params = prm;
      e_at[i] = reqs.size();
      reqs.push_back(r);
    }
    if (fc_side) {
      SeminormRequest r;
      r.kind = SeminormKind::TriebelContinuous;
      r.params = prm;
      fc_at[i] = reqs.size();
      reqs.push_back(r);
    }
  }
  const auto res = evaluate_batch(f, reqs, quad, mode);

  RatioReport rep;
  rep.meta.fn = fn_identity(f);
  rep.meta.op = std::string("sharpness_scan:") + pair_name(pair);
  rep.meta.p = p;
  rep.meta.q = q;
  rep.meta.quad = quad;
  rep.meta.threshold =
      pair == SharpnessPair::PT_kernels ? kKernelBand : kCrossFamilyBand;
  if (w_side)
    rep.meta.flags.push_back(theta ? "theta fixed across rows"
                                   : "theta defaults to s row by row");

  const JRange jr = default_j_range(f.spec);
  for (std::size_t i = 0; i < m; ++i) {
    const double s = s_grid.values[i];
    const double blow = std::pow(1.0 - s, -1.0 / q);
    ScanRow row;
    row.s = s;
    SeminormParams prm;
    prm.s = s;
    prm.p = p;
    prm.q = q;
    switch (pair) {
      case SharpnessPair::E_vs_F:
        row.lhs = res[e_at[i]].value;
        row.tail_lhs = res[e_at[i]].tail_est;
        row.rhs = blow * res[fc_at[i]].value;
        row.tail_rhs = res[fc_at[i]].tail_est;
        break;
      case SharpnessPair::E_vs_Fp2: {
        const SeminormResult f2 = triebel_order(f, s, p, mode);
        row.lhs = blow * f2.value;
        row.tail_lhs = f2.tail_est;
        row.rhs = res[e_at[i]].value;
        row.tail_rhs = res[e_at[i]].tail_est;
        break;
      }
      case SharpnessPair::W_vs_F:
        row.lhs = res[w_at[i]].value;
        row.tail_lhs = res[w_at[i]].tail_est;
        row.rhs = blow * res[fc_at[i]].value;
        row.tail_rhs = res[fc_at[i]].tail_est;
        break;
      case SharpnessPair::W_vs_Fp2: {
        const SeminormResult f2 = triebel_order(f, s, p, mode);
        row.lhs = res[w_at[i]].value;
        row.tail_lhs = res[w_at[i]].tail_est;
        row.rhs = blow * f2.value;
        row.tail_rhs = f2.tail_est;
        break;
      }
      case SharpnessPair::W_vs_E:
        row.lhs = res[w_at[i]].value;
        row.tail_lhs = res[w_at[i]].tail_est;
        row.rhs = res[e_at[i]].value;
        row.tail_rhs = res[e_at[i]].tail_est;
        break;
      case SharpnessPair::PT_kernels: {
        const SeminormResult fp =
            triebel_discrete(f, prm, jr, LPKernel::Poisson, mode);
        const SeminormResult fb =
            triebel_discrete(f, prm, jr, LPKernel::Bandlimited, mode);
        row.lhs = fp.value;
        row.tail_lhs = fp.tail_est;
        row.rhs = fb.value;
        row.tail_rhs = fb.tail_est;
        break;
      }
    }
    row.ratio = row.rhs > 0 ? row.lhs / row.rhs : 0.0;
    rep.rows.push_back(row);
  }

  std::vector<std::size_t> verdict;
  for (std::size_t i = 0; i < m; ++i)
    if (rep.rows[i].s >= 0.5) verdict.push_back(i);
  summarize(rep, verdict);
  rep.summary.pass = rep.summary.band < rep.meta.threshold &&
                     rep.summary.min_ratio > 0;
  return rep;
}

RatioReport bbm1_limit(const SampledFunction& f, double p, double q,
                       const SGrid& s_grid, const QuadratureSpec& quad,
                       ExecMode mode) {
  s_grid.validate();
  require_nonzero(f, "bbm1_limit");
  if (s_grid.values.back() < 1.0 - std::exp2(-10.0) - 1e-12)
    throw ConfigError("bbm1_limit: s_grid must reach 1 - 2^-10");

  std::vector<SeminormRequest> reqs;
  for (const double s : s_grid.values) {
    SeminormRequest r;
    r.kind = SeminormKind::Extension;
    r.params.s = s;
    r.params.p = p;
    r.params.q = q;
    reqs.push_back(r);
  }
  const auto res = evaluate_batch(f, reqs, quad, mode);
  const double gn = grad_lp_norm(f, p);

  RatioReport rep;
  rep.meta.fn = fn_identity(f);
  rep.meta.op = "bbm1_limit";
  rep.meta.p = p;
  rep.meta.q = q;
  rep.meta.quad = quad;
  rep.meta.threshold = kBbmStabilization;
  for (std::size_t i = 0; i < res.size(); ++i) {
    ScanRow row;
    row.s = s_grid.values[i];
    row.lhs = std::pow(1.0 - row.s, 1.0 / q) * res[i].value;
    row.tail_lhs = res[i].tail_est;
    row.rhs = gn;
    row.ratio = row.lhs / gn;
    rep.rows.push_back(row);
  }
  if (rep.rows.back().tail_lhs > 0.5 * quad.tail_tolerance)
    rep.meta.flags.push_back("t_min marginal at the top grid point");

  std::vector<std::size_t> last3;
  for (std::size_t i = rep.rows.size() >= 3 ? rep.rows.size() - 3 : 0;
       i < rep.rows.size(); ++i)
    last3.push_back(i);
  summarize(rep, last3);
  rep.summary.pass = rep.rows.size() >= 3 &&
                     rep.summary.band < 1.0 + kBbmStabilization;
  return rep;
}

std::vector<InterpolationTriple> default_interpolation_triples() {
  std::vector<InterpolationTriple> out;
  for (const double s : {0.6, 0.75, 0.9}) {
    out.push_back({0.0, s, 1.0});
    out.push_back({std::max(0.0, 2.0 * s - 1.0), s, 1.0});
    out.push_back({0.5 * s, s, 0.5 * (s + 1.0)});
    out.push_back({0.0, s, 0.5 * (s + 1.0)});
  }
  return out;
}

RatioReport sobolev_interpolation_check(const SampledFunction& f, double p, double q,
                                        const std::vector<InterpolationTriple>& triples,
                                        TargetSeminorm target,
                                        const QuadratureSpec& quad, ExecMode mode) {
  require_nonzero(f, "sobolev_interpolation_check");
  if (triples.empty())
    throw ConfigError("sobolev_interpolation_check: needs at least one triple");
  const int n = f.spec.n;

  std::vector<SeminormRequest> reqs;
  for (const auto& tr : triples) {
    tr.validate();
    SeminormRequest r;
    r.kind = target == TargetSeminorm::E ? SeminormKind::Extension
                                         : SeminormKind::Gagliardo;
    r.params.s = tr.s;
    r.params.p = p;
    r.params.q = q;
    if (target == TargetSeminorm::W && !r.params.admissible_W(n))
      throw ConfigError(
          "sobolev_interpolation_check: W target inadmissible; need p > n q / (n + s q)");
    reqs.push_back(r);
  }
  const auto res = evaluate_batch(f, reqs, quad, mode);

  RatioReport rep;
  rep.meta.fn = fn_identity(f);
  rep.meta.op = std::string("sobolev_interpolation_check:") +
                (target == TargetSeminorm::E ? "E" : "W");
  rep.meta.p = p;
  rep.meta.q = q;
  rep.meta.quad = quad;
  rep.meta.threshold = kInterpUniformity;

  std::map<double, SeminormResult> orders;
  auto order_norm = [&](double o) {
    auto it = orders.find(o);
    if (it == orders.end())
      it = orders.emplace(o, triebel_order(f, o, p, mode)).first;
    return it->second;
  };
  bool flagged_surrogate = false;
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const auto& tr = triples[i];
    if (tr.sigma == 1.0 && !flagged_surrogate) {
      rep.meta.flags.push_back("sigma=1 uses the gradient surrogate");
      flagged_surrogate = true;
    }
    const SeminormResult hi = order_norm(tr.sigma);
    const SeminormResult lo = order_norm(tr.v);
    ScanRow row;
    row.s = tr.s;
    row.lhs = res[i].value;
    row.tail_lhs = res[i].tail_est;
    row.rhs = std::pow(tr.sigma - tr.s, -1.0 / q) * hi.value +
              std::pow(tr.s - tr.v, -1.0 / q) * lo.value;
    row.tail_rhs = std::max(hi.tail_est, lo.tail_est);
    row.ratio = row.rhs > 0 ? row.lhs / row.rhs : 0.0;
    rep.rows.push_back(row);
  }

  std::vector<std::size_t> all(rep.rows.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  summarize(rep, all);
  std::vector<double> cs;
  for (const auto& r : rep.rows) cs.push_back(r.ratio);
  const double med = median_of(cs);
  rep.summary.pass = std::isfinite(rep.summary.max_ratio) && med > 0 &&
                     rep.summary.max_ratio / med < kInterpUniformity;
  return rep;
}

RatioReport lower_sobolev_check(const SampledFunction& f, double p, double q,
                                const LowerSobolevParams& params,
                                TargetSeminorm target, const SGrid& s_grid,
                                const QuadratureSpec& quad, ExecMode mode) {
  s_grid.validate();
  require_nonzero(f, "lower_sobolev_check");
  if (!(params.Theta > 1.0))
    throw ConfigError("lower_sobolev_check: Theta must exceed 1");
  if (target == TargetSeminorm::W && !(params.gamma > 1.0))
    throw ConfigError("lower_sobolev_check: gamma must exceed 1");
  const int n = f.spec.n;
  const double s_min =
      target == TargetSeminorm::E
          ? 1.0 - 1.0 / (2.0 * params.Theta)
          : 1.0 - 1.0 / (2.0 * params.gamma * params.Theta);

  std::vector<double> admissible;
  for (const double s : s_grid.values)
    if (s > s_min) admissible.push_back(s);
  if (admissible.empty()) {
    char buf[96];
    std::snprintf(buf, sizeof buf,
                  "lower_sobolev_check: no s in the admissible range (need s > %.6g)",
                  s_min);
    throw ConfigError(buf);
  }

  std::vector<SeminormRequest> reqs;
  for (const double s : admissible) {
    SeminormRequest r;
    r.kind = target == TargetSeminorm::E ? SeminormKind::Extension
                                         : SeminormKind::Gagliardo;
    r.params.s = s;
    r.params.p = p;
    r.params.q = q;
    if (target == TargetSeminorm::W) {
      r.params.theta = 1.0 - 1.0 / params.gamma;
      if (!r.params.admissible_dual(n))
        throw ConfigError(
            "lower_sobolev_check: W variant inadmissible; need p' > n q' / (n + theta q')");
    }
    reqs.push_back(r);
  }
  const auto res = evaluate_batch(f, reqs, quad, mode);
  const double fn_lp = lp_norm(f, p);

  RatioReport rep;
  rep.meta.fn = fn_identity(f);
  rep.meta.op = std::string("lower_sobolev_check:") +
                (target == TargetSeminorm::E ? "E" : "W");
  rep.meta.p = p;
  rep.meta.q = q;
  rep.meta.quad = quad;
  rep.meta.threshold = kLowerSupBound;
  rep.meta.flags.push_back("rows sweep sigma over {1/2, 3/4, 0.95} of sigma_bar");

  std::vector<double> sup_s, sup_c;
  for (std::size_t i = 0; i < admissible.size(); ++i) {
    const double s = admissible[i];
    const double sigma_bar = 1.0 - params.Theta * (1.0 - s);
    const double denom =
        fn_lp + std::pow(1.0 - s, 1.0 / q) * res[i].value;
    double sup_here = 0;
    for (const double frac : {0.5, 0.75, 0.95}) {
      const double sigma = frac * sigma_bar;
      const SeminormResult fs = triebel_order(f, sigma, p, mode);
      ScanRow row;
      row.s = s;
      row.lhs = fs.value;
      row.tail_lhs = fs.tail_est;
      row.rhs = denom;
      row.tail_rhs = res[i].tail_est;
      row.ratio = row.lhs / row.rhs;
      sup_here = std::max(sup_here, row.ratio);
      rep.rows.push_back(row);
    }
    sup_s.push_back(s);
    sup_c.push_back(sup_here);
  }

  std::vector<std::size_t> all(rep.rows.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  summarize(rep, all);
  bool trend_ok = true;
  if (sup_s.size() >= 4) {
    rep.summary.slope = slope_fit(sup_s, sup_c).slope;
    rep.meta.flags.push_back("slope tracks the per-s sup of C");
    trend_ok = rep.summary.slope >= kLowerSlopeFloor;
  } else {
    rep.meta.flags.push_back("too few admissible s for a trend fit");
  }
  rep.summary.pass = rep.summary.max_ratio <= kLowerSupBound && trend_ok;
  return rep;
}

RatioReport kernel_equivalence_scan(const SampledFunction& f, double p, double q,
                                    const SGrid& s_grid,
                                    const QuadratureSpec& quad, ExecMode mode) {
  s_grid.validate();
  require_nonzero(f, "kernel_equivalence_scan");

  RatioReport rep;
  rep.meta.fn = fn_identity(f);
  rep.meta.op = "kernel_equivalence_scan";
  rep.meta.p = p;
  rep.meta.q = q;
  rep.meta.quad = quad;
  rep.meta.threshold = kKernelBand;

  const JRange jr = default_j_range(f.spec);
  for (const double s : s_grid.values) {
    SeminormParams prm;
    prm.s = s;
    prm.p = p;
    prm.q = q;
    const SeminormResult fp =
        triebel_discrete(f, prm, jr, LPKernel::Poisson, mode);
    const SeminormResult fb =
        triebel_discrete(f, prm, jr, LPKernel::Bandlimited, mode);
    ScanRow row;
    row.s = s;
    row.lhs = fp.value;
    row.tail_lhs = fp.tail_est;
    row.rhs = fb.value;
    row.tail_rhs = fb.tail_est;
    row.ratio = row.rhs > 0 ? row.lhs / row.rhs : 0.0;
    rep.rows.push_back(row);
  }

  std::vector<std::size_t> verdict;
  for (std::size_t i = 0; i < rep.rows.size(); ++i)
    if (rep.rows[i].s >= 0.1 && rep.rows[i].s <= 0.95) verdict.push_back(i);
  if (verdict.empty()) {
    for (std::size_t i = 0; i < rep.rows.size(); ++i) verdict.push_back(i);
    rep.meta.flags.push_back("no rows inside the s-uniformity window");
  }
  summarize(rep, verdict);
  rep.summary.pass = rep.summary.band < kKernelBand && rep.summary.min_ratio > 0;
  return rep;
}

}  // namespace fracspace
