#include "fracspace/report.hpp"

#include <charconv>
#include <sstream>

#include <json.hpp>

#include "fracspace/types.hpp"

namespace fracspace {

std::string format_double(double v) {
  char buf[40];
  const auto res =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::string hyphenated(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (c == ' ' || c == '\t') c = '-';
  return out;
}

}  // namespace

ConfigMap parse_config(const std::string& text) {
  ConfigMap out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string tok;
    while (tokens >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos || eq == 0)
        throw ConfigError("config: expected key=value, got \"" + tok + "\"");
      const std::string key = tok.substr(0, eq);
      const std::string value = tok.substr(eq + 1);
      if (!out.emplace(key, value).second)
        throw ConfigError("config: duplicate key \"" + key + "\"");
    }
  }
  return out;
}

std::string render_config(const ConfigMap& config) {
  std::string out;
  for (const auto& [k, v] : config) {
    if (k.find_first_of(" \t=") != std::string::npos ||
        v.find_first_of(" \t") != std::string::npos)
      throw ConfigError("config: keys and values must be single tokens, got \"" +
                        k + "=" + v + "\"");
    if (!out.empty()) out += ' ';
    out += k;
    out += '=';
    out += v;
  }
  return out;
}

ConfigMap report_config(const RatioReport& rep) {
  ConfigMap cfg;
  cfg["report.op"] = rep.meta.op;
  cfg["report.fn"] = rep.meta.fn;
  cfg["report.threshold"] = format_double(rep.meta.threshold);
  cfg["p"] = format_double(rep.meta.p);
  cfg["q"] = format_double(rep.meta.q);
  const QuadratureSpec& qd = rep.meta.quad;
  cfg["quad.t_min"] = format_double(qd.t_min);
  cfg["quad.t_max"] = format_double(qd.t_max);
  cfg["quad.nodes_per_decade"] = std::to_string(qd.nodes_per_decade);
  cfg["quad.z_r_min"] = format_double(qd.z_r_min);
  cfg["quad.z_r_max"] = format_double(qd.z_r_max);
  cfg["quad.angular_nodes"] = std::to_string(qd.angular_nodes);
  cfg["quad.tail_tolerance"] = format_double(qd.tail_tolerance);
  std::string flags;
  for (const auto& fl : rep.meta.flags) {
    if (!flags.empty()) flags += ';';
    flags += hyphenated(fl);
  }
  if (!flags.empty()) cfg["flags"] = flags;
  return cfg;
}

std::string to_csv(const RatioReport& rep, const ConfigMap& config) {
  std::string out;
  out += "# config: " + render_config(config) + "\n";
  out += std::string("# verdict: ") + (rep.summary.pass ? "PASS" : "FAIL") +
         " min_ratio=" + format_double(rep.summary.min_ratio) +
         " max_ratio=" + format_double(rep.summary.max_ratio) +
         " band=" + format_double(rep.summary.band) +
         " slope=" + format_double(rep.summary.slope) + "\n";
  out += "s,lhs,rhs,ratio,tail_est_lhs,tail_est_rhs\n";
  for (const auto& row : rep.rows) {
    out += format_double(row.s) + ',' + format_double(row.lhs) + ',' +
           format_double(row.rhs) + ',' + format_double(row.ratio) + ',' +
           format_double(row.tail_lhs) + ',' + format_double(row.tail_rhs) +
           '\n';
  }
  return out;
}

std::string to_json(const RatioReport& rep, const ConfigMap& config) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config) cfg[k] = v;
  j["meta"]["config"] = std::move(cfg);
  j["meta"]["verdict"] = rep.summary.pass ? "PASS" : "FAIL";
  j["meta"]["min_ratio"] = rep.summary.min_ratio;
  j["meta"]["max_ratio"] = rep.summary.max_ratio;
  j["meta"]["band"] = rep.summary.band;
  j["meta"]["slope"] = rep.summary.slope;
  j["meta"]["flags"] = rep.meta.flags;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : rep.rows) {
    nlohmann::ordered_json r;
    r["s"] = row.s;
    r["lhs"] = row.lhs;
    r["rhs"] = row.rhs;
    r["ratio"] = row.ratio;
    r["tail_est_lhs"] = row.tail_lhs;
    r["tail_est_rhs"] = row.tail_rhs;
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

}  // namespace fracspace
