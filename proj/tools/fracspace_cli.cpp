#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fracspace/experiments.hpp"
#include "fracspace/grid.hpp"
#include "fracspace/oracle.hpp"
#include "fracspace/report.hpp"
#include "fracspace/spectral.hpp"
#include "fracspace/types.hpp"

using namespace fracspace;

namespace {

const std::set<std::string> kCommonKeys = {
    "fn",         "fn.a",         "fn.omega",
    "fn.R",       "grid.n",       "grid.L",
    "grid.N",     "quad.t_min",   "quad.t_max",
    "quad.nodes_per_decade",      "quad.z_r_min",
    "quad.z_r_max",               "quad.angular_nodes",
    "quad.tail_tolerance",        "output",
    "format",     "mode"};

std::set<std::string> with_extras(std::initializer_list<const char*> extras) {
  std::set<std::string> keys = kCommonKeys;
  for (const char* k : extras) keys.insert(k);
  return keys;
}

const std::map<std::string, std::set<std::string>> kAllowedKeys = {
    {"seminorm", with_extras({"which", "kernel", "s", "p", "q", "theta"})},
    {"scan", with_extras({"pair", "p", "q", "theta", "s", "s_grid"})},
    {"bbm", with_extras({"p", "q", "s_grid"})},
    {"interp", with_extras({"p", "q", "target", "triples"})},
    {"lower", with_extras({"p", "q", "target", "Theta", "gamma", "s_grid"})},
    {"validate", with_extras({"s", "p", "q"})},
    {"oracle-check", with_extras({"tol"})},
};

ConfigMap defaults_for(const std::string& sub) {
  ConfigMap d = {{"fn", "gaussian"}, {"fn.a", "1"},     {"fn.omega", "4"},
                 {"fn.R", "1"},      {"grid.n", "1"},   {"grid.L", "auto"},
                 {"grid.N", "auto"}, {"format", "csv"}, {"mode", "parallel"},
                 {"output", "auto"}, {"quad.t_min", "0"},
                 {"quad.t_max", "0"},
                 {"quad.nodes_per_decade", "64"},
                 {"quad.z_r_min", "0"},
                 {"quad.z_r_max", "0"},
                 {"quad.angular_nodes", "32"},
                 {"quad.tail_tolerance", "0.01"}};
  auto put = [&d](std::initializer_list<std::pair<const char*, const char*>> kv) {
    for (const auto& [k, v] : kv) d[k] = v;
  };
  if (sub == "seminorm")
    put({{"which", "E"}, {"kernel", "poisson"}, {"s", "0.5"}, {"p", "2"}, {"q", "2"}});
  else if (sub == "scan")
    put({{"pair", "E_vs_F"}, {"p", "2"}, {"q", "2"}, {"s_grid", "defaults"}});
  else if (sub == "bbm")
    put({{"p", "2"}, {"q", "2"}, {"s_grid", "defaults"}});
  else if (sub == "interp")
    put({{"p", "2"}, {"q", "2"}, {"target", "E"}, {"triples", "defaults"}});
  else if (sub == "lower")
    put({{"p", "2"}, {"q", "2"}, {"target", "E"}, {"Theta", "2"}, {"gamma", "2"},
         {"s_grid", "defaults"}});
  else if (sub == "validate")
    put({{"s", "0.5"}, {"p", "2"}, {"q", "2"}});
  else if (sub == "oracle-check")
    put({{"tol", "1e-6"}});
  return d;
}

double get_d(const ConfigMap& cfg, const std::string& key) {
  const std::string& v = cfg.at(key);
  double out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
    throw ConfigError("config: " + key + " expects a number, got \"" + v + "\"");
  return out;
}

long get_i(const ConfigMap& cfg, const std::string& key) {
  const std::string& v = cfg.at(key);
  long out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
    throw ConfigError("config: " + key + " expects an integer, got \"" + v + "\"");
  return out;
}

std::vector<double> split_doubles(const std::string& text, const std::string& key) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    double v = 0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (res.ec != std::errc{} || res.ptr != item.data() + item.size())
      throw ConfigError("config: " + key + " expects comma-separated numbers, got \"" +
                        item + "\"");
    out.push_back(v);
  }
  if (out.empty())
    throw ConfigError("config: " + key + " must not be empty");
  return out;
}

TestFunction make_function(const ConfigMap& cfg) {
  const std::string& id = cfg.at("fn");
  const int n = int(get_i(cfg, "grid.n"));
  if (id == "gaussian") return TestFunction::gaussian(get_d(cfg, "fn.a"), n);
  if (id == "modgauss")
    return TestFunction::modulated_gaussian(get_d(cfg, "fn.a"),
                                            get_d(cfg, "fn.omega"), n);
  if (id == "bump") return TestFunction::bump(get_d(cfg, "fn.R"), n);
  throw ConfigError("config: fn must be one of gaussian, modgauss, bump; got \"" +
                    id + "\"");
}

GridSpec make_grid(const ConfigMap& cfg) {
  GridSpec g;
  g.n = int(get_i(cfg, "grid.n"));
  if (g.n != 1 && g.n != 2) throw ConfigError("config: grid.n must be 1 or 2");
  g.L = cfg.at("grid.L") == "auto" ? (g.n == 1 ? 20.0 : 8.0) : get_d(cfg, "grid.L");
  g.N = cfg.at("grid.N") == "auto" ? (g.n == 1 ? 16384 : 256)
                                   : int(get_i(cfg, "grid.N"));
  return g;
}

QuadratureSpec make_quad(const ConfigMap& cfg) {
  QuadratureSpec q;
  q.t_min = get_d(cfg, "quad.t_min");
  q.t_max = get_d(cfg, "quad.t_max");
  q.nodes_per_decade = int(get_i(cfg, "quad.nodes_per_decade"));
  q.z_r_min = get_d(cfg, "quad.z_r_min");
  q.z_r_max = get_d(cfg, "quad.z_r_max");
  q.angular_nodes = int(get_i(cfg, "quad.angular_nodes"));
  q.tail_tolerance = get_d(cfg, "quad.tail_tolerance");
  return q;
}

SGrid make_sgrid(const ConfigMap& cfg) {
  if (const auto it = cfg.find("s"); it != cfg.end()) {
    SGrid g;
    g.values = {get_d(cfg, "s")};
    return g;
  }
  if (cfg.at("s_grid") == "defaults") return SGrid::defaults();
  SGrid g;
  g.values = split_doubles(cfg.at("s_grid"), "s_grid");
  return g;
}

ExecMode make_mode(const ConfigMap& cfg) {
  const std::string& m = cfg.at("mode");
  if (m == "parallel") return ExecMode::Parallel;
  if (m == "serial") return ExecMode::Serial;
  throw ConfigError("config: mode must be parallel or serial, got \"" + m + "\"");
}

SeminormParams make_params(const ConfigMap& cfg) {
  SeminormParams prm;
  prm.s = get_d(cfg, "s");
  prm.p = get_d(cfg, "p");
  prm.q = get_d(cfg, "q");
  if (const auto it = cfg.find("theta"); it != cfg.end())
    prm.theta = get_d(cfg, "theta");
  return prm;
}

std::vector<InterpolationTriple> make_triples(const ConfigMap& cfg) {
  if (cfg.at("triples") == "defaults") return default_interpolation_triples();
  std::vector<InterpolationTriple> out;
  std::string item;
  std::istringstream in(cfg.at("triples"));
  while (std::getline(in, item, ',')) {
    std::istringstream fields(item);
    std::string a, b, c;
    if (!std::getline(fields, a, ':') || !std::getline(fields, b, ':') ||
        !std::getline(fields, c))
      throw ConfigError("config: triples expects v:s:sigma entries, got \"" + item +
                        "\"");
    InterpolationTriple tr;
    tr.v = std::stod(a);
    tr.s = std::stod(b);
    tr.sigma = std::stod(c);
    out.push_back(tr);
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("config: cannot open output path \"" + path + "\"");
  out << text;
  if (!out.good())
    throw ConfigError("config: failed writing output path \"" + path + "\"");
}

/// Report file plus fully-resolved config echo; returns the written path.
std::string emit_report(const RatioReport& rep, const ConfigMap& resolved,
                        const std::string& sub) {
  ConfigMap echo = report_config(rep);
  for (const auto& [k, v] : resolved) echo[k] = v;
  const std::string& fmt = resolved.at("format");
  if (fmt != "csv" && fmt != "json")
    throw ConfigError("config: format must be csv or json, got \"" + fmt + "\"");
  std::string path = resolved.at("output");
  if (path == "auto") path = "fracspace_" + sub + "." + fmt;
  write_text(path, fmt == "csv" ? to_csv(rep, echo) : to_json(rep, echo));
  return path;
}

void print_summary(const RatioReport& rep, const std::string& path) {
  std::printf("%s %s rows=%zu band=%s slope=%s -> %s\n", rep.meta.op.c_str(),
              rep.summary.pass ? "PASS" : "FAIL", rep.rows.size(),
              format_double(rep.summary.band).c_str(),
              format_double(rep.summary.slope).c_str(), path.c_str());
  for (const auto& fl : rep.meta.flags) std::printf("  flag: %s\n", fl.c_str());
}

int run_seminorm(const ConfigMap& cfg) {
  const SampledFunction f = sample(make_function(cfg), make_grid(cfg));
  const SeminormParams prm = make_params(cfg);
  const QuadratureSpec quad = make_quad(cfg);
  const ExecMode mode = make_mode(cfg);
  const std::string& which = cfg.at("which");

  SeminormResult res;
  if (which == "W")
    res = gagliardo(f, prm, quad, mode);
  else if (which == "E")
    res = extension_seminorm(f, prm, quad, mode);
  else if (which == "Fc")
    res = triebel_continuous(f, prm, quad, mode);
  else if (which == "Fd") {
    const std::string& kn = cfg.at("kernel");
    if (kn != "poisson" && kn != "bandlimited")
      throw ConfigError("config: kernel must be poisson or bandlimited, got \"" +
                        kn + "\"");
    res = triebel_discrete(f, prm, default_j_range(f.spec),
                           kn == "poisson" ? LPKernel::Poisson
                                           : LPKernel::Bandlimited,
                           mode);
  } else if (which == "M")
    res = extension_mixed_form(f, prm, quad, mode);
  else
    throw ConfigError("config: which must be one of W, E, Fc, Fd, M; got \"" +
                      which + "\"");

  RatioReport rep;
  rep.meta.op = "seminorm:" + which;
  rep.meta.fn = f.analytic->id();
  rep.meta.p = prm.p;
  rep.meta.q = prm.q;
  rep.meta.quad = quad;
  rep.rows.push_back(
      {prm.s, res.value, res.value, 1.0, res.tail_est, res.tail_est});
  rep.summary.min_ratio = rep.summary.max_ratio = rep.summary.band = 1.0;
  rep.summary.pass = true;
  const std::string path = emit_report(rep, cfg, "seminorm");
  std::printf("%s s=%s value=%s tail=%s -> %s\n", rep.meta.op.c_str(),
              format_double(prm.s).c_str(), format_double(res.value).c_str(),
              format_double(res.tail_est).c_str(), path.c_str());
  return 0;
}

int run_scan(const ConfigMap& cfg) {
  const SampledFunction f = sample(make_function(cfg), make_grid(cfg));
  const std::string& pair = cfg.at("pair");
  const std::map<std::string, SharpnessPair> pairs = {
      {"E_vs_F", SharpnessPair::E_vs_F},   {"E_vs_Fp2", SharpnessPair::E_vs_Fp2},
      {"W_vs_F", SharpnessPair::W_vs_F},   {"W_vs_Fp2", SharpnessPair::W_vs_Fp2},
      {"W_vs_E", SharpnessPair::W_vs_E},   {"PT_kernels", SharpnessPair::PT_kernels}};
  const auto it = pairs.find(pair);
  if (it == pairs.end())
    throw ConfigError("config: pair must be one of E_vs_F, E_vs_Fp2, W_vs_F, "
                      "W_vs_Fp2, W_vs_E, PT_kernels; got \"" + pair + "\"");
  std::optional<double> theta;
  if (cfg.count("theta")) theta = get_d(cfg, "theta");
  const RatioReport rep =
      sharpness_scan(f, get_d(cfg, "p"), get_d(cfg, "q"), make_sgrid(cfg),
                     it->second, theta, make_quad(cfg), make_mode(cfg));
  const std::string path = emit_report(rep, cfg, "scan");
  print_summary(rep, path);
  return rep.summary.pass ? 0 : 1;
}

int run_bbm(const ConfigMap& cfg) {
  const SampledFunction f = sample(make_function(cfg), make_grid(cfg));
  const RatioReport rep = bbm1_limit(f, get_d(cfg, "p"), get_d(cfg, "q"),
                                     make_sgrid(cfg), make_quad(cfg),
                                     make_mode(cfg));
  const std::string path = emit_report(rep, cfg, "bbm");
  print_summary(rep, path);
  return rep.summary.pass ? 0 : 1;
}

TargetSeminorm make_target(const ConfigMap& cfg) {
  const std::string& t = cfg.at("target");
  if (t == "E") return TargetSeminorm::E;
  if (t == "W") return TargetSeminorm::W;
  throw ConfigError("config: target must be E or W, got \"" + t + "\"");
}

int run_interp(const ConfigMap& cfg) {
  const SampledFunction f = sample(make_function(cfg), make_grid(cfg));
  const RatioReport rep = sobolev_interpolation_check(
      f, get_d(cfg, "p"), get_d(cfg, "q"), make_triples(cfg), make_target(cfg),
      make_quad(cfg), make_mode(cfg));
  const std::string path = emit_report(rep, cfg, "interp");
  print_summary(rep, path);
  return rep.summary.pass ? 0 : 1;
}

int run_lower(const ConfigMap& cfg) {
  const SampledFunction f = sample(make_function(cfg), make_grid(cfg));
  LowerSobolevParams prm;
  prm.Theta = get_d(cfg, "Theta");
  prm.gamma = get_d(cfg, "gamma");
  const RatioReport rep = lower_sobolev_check(
      f, get_d(cfg, "p"), get_d(cfg, "q"), prm, make_target(cfg), make_sgrid(cfg),
      make_quad(cfg), make_mode(cfg));
  const std::string path = emit_report(rep, cfg, "lower");
  print_summary(rep, path);
  return rep.summary.pass ? 0 : 1;
}

int run_validate(const ConfigMap& cfg) {
  const TestFunction tf = make_function(cfg);
  const GridSpec grid = make_grid(cfg);
  const SeminormParams prm = make_params(cfg);
  const QuadratureSpec quad = make_quad(cfg);
  const ExecMode mode = make_mode(cfg);

  struct Kind {
    const char* name;
    SeminormKind kind;
  };
  const Kind kinds[] = {{"gagliardo", SeminormKind::Gagliardo},
                        {"extension", SeminormKind::Extension},
                        {"triebel_discrete", SeminormKind::TriebelDiscrete},
                        {"triebel_continuous", SeminormKind::TriebelContinuous},
                        {"mixed_form", SeminormKind::MixedForm}};
  bool all_ok = true;
  for (const Kind& k : kinds) {
    const auto eval_at = [&](const GridSpec& g, const QuadratureSpec& qd) {
      const SampledFunction f = sample(tf, g);
      SeminormRequest req;
      req.kind = k.kind;
      req.params = prm;
      return evaluate_batch(f, {req}, qd, mode)[0].value;
    };
    const auto quad_axis = refine_check(
        [&](int d) {
          QuadratureSpec qd = quad;
          qd.nodes_per_decade = quad.nodes_per_decade << d;
          qd.angular_nodes = quad.angular_nodes << d;
          return eval_at(grid, qd);
        },
        1);
    const auto grid_axis = refine_check(
        [&](int d) {
          GridSpec g = grid;
          g.N = grid.N << d;
          return eval_at(g, quad);
        },
        1);
    const double dq = quad_axis.deltas[0];
    const double dg = grid_axis.deltas[0];
    const bool ok = dq < 1e-3 && dg < 1e-3;
    all_ok = all_ok && ok;
    std::printf("%s %s quad-doubling=%s grid-doubling=%s\n",
                ok ? "PASS" : "FAIL", k.name, format_double(dq).c_str(),
                format_double(dg).c_str());
  }
  std::printf("validate %s\n", all_ok ? "PASS" : "FAIL");
  return all_ok ? 0 : 1;
}

int run_oracle_check(const ConfigMap& cfg, bool inject_fault) {
  set_gamma_fault(inject_fault);
  const double tol = get_d(cfg, "tol");
  const double worst = oracle_self_check(tol, &std::cout);
  set_gamma_fault(false);
  const bool ok = worst <= tol;
  std::printf("oracle-check %s worst=%s tol=%s\n", ok ? "PASS" : "FAIL",
              format_double(worst).c_str(), format_double(tol).c_str());
  return ok ? 0 : 1;
}

struct SubOptions {
  CLI::App* app = nullptr;
  std::string config_path;
  std::vector<std::string> sets;
  std::map<std::string, std::pair<std::string, CLI::Option*>> named;
};

void add_named(SubOptions& sub, const std::string& key, const char* desc) {
  auto& slot = sub.named[key];
  slot.second = sub.app->add_option("--" + key, slot.first, desc);
}

ConfigMap resolve(const std::string& name, const SubOptions& sub) {
  const std::set<std::string>& allowed = kAllowedKeys.at(name);
  ConfigMap cfg = defaults_for(name);
  auto apply = [&](const std::string& key, const std::string& value) {
    if (!allowed.count(key))
      throw ConfigError("config: unknown key \"" + key + "\" for " + name);
    cfg[key] = value;
  };
  if (!sub.config_path.empty()) {
    std::ifstream in(sub.config_path, std::ios::binary);
    if (!in)
      throw ConfigError("config: cannot read config file \"" + sub.config_path +
                        "\"");
    std::ostringstream text;
    text << in.rdbuf();
    for (const auto& [k, v] : parse_config(text.str())) apply(k, v);
  }
  for (const std::string& item : sub.sets) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("config: --set expects key=value, got \"" + item + "\"");
    apply(item.substr(0, eq), item.substr(eq + 1));
  }
  for (const auto& [key, slot] : sub.named)
    if (slot.second->count() > 0) apply(key, slot.first);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "fracspace: fractional seminorm evaluations and asymptotic scans.\n"
      "FRACSPACE_THREADS caps the worker count (default: all cores)."};
  app.require_subcommand(1);

  std::map<std::string, SubOptions> subs;
  const std::map<std::string, const char*> descriptions = {
      {"seminorm", "Evaluate one seminorm at one parameter point"},
      {"scan", "Sharpness ratio scan between two seminorm families"},
      {"bbm", "(1-s)^{1/q} E versus the gradient norm as s -> 1"},
      {"interp", "Interpolation constant sweep over (v, s, sigma) triples"},
      {"lower", "Lower Sobolev bound constants over the admissible s range"},
      {"validate", "Grid and quadrature refinement suite for every seminorm"},
      {"oracle-check", "Closed-form oracle self-consistency suite"}};

  bool inject_fault = false;
  for (const auto& [name, desc] : descriptions) {
    SubOptions& sub = subs[name];
    sub.app = app.add_subcommand(name, desc);
    sub.app->add_option("--config", sub.config_path,
                        "Flat key=value config file");
    sub.app->add_option("--set", sub.sets, "Override one key=value pair");
    for (const std::string& key : kAllowedKeys.at(name))
      add_named(sub, key, "");
    if (name == "oracle-check")
      sub.app->add_flag("--inject-gamma-fault", inject_fault)->group("");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const ConfigMap cfg = resolve(name, subs.at(name));
    if (name == "seminorm") return run_seminorm(cfg);
    if (name == "scan") return run_scan(cfg);
    if (name == "bbm") return run_bbm(cfg);
    if (name == "interp") return run_interp(cfg);
    if (name == "lower") return run_lower(cfg);
    if (name == "validate") return run_validate(cfg);
    return run_oracle_check(cfg, inject_fault);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const ResolutionError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
