#pragma once

#include <map>
#include <string>

#include "fracspace/experiments.hpp"

namespace fracspace {

/// Doubles rendered at 17 significant digits, locale-free, so identical
/// reports are byte-identical.
std::string format_double(double v);

/// Flat key=value pairs; ordered so serialization is deterministic.
using ConfigMap = std::map<std::string, std::string>;

/// Parses flat key=value text: one pair per line, '#' starts a comment,
/// blank lines are skipped.  Duplicate keys and lines without '=' are
/// configuration errors.
ConfigMap parse_config(const std::string& text);

/// One "key=value key=value ..." line in map order.
std::string render_config(const ConfigMap& config);

/// The report's own metadata (operation, function, exponents, quadrature,
/// thresholds, flags) as a ConfigMap; the CLI merges its run keys on top.
ConfigMap report_config(const RatioReport& rep);

/// CSV: "# config:" echo line, "# verdict:" summary line, the pinned
/// header s,lhs,rhs,ratio,tail_est_lhs,tail_est_rhs, one row per scan row.
std::string to_csv(const RatioReport& rep, const ConfigMap& config);

/// JSON mirror of the CSV: meta object holding the config echo, verdict,
/// and band statistics, plus the rows array.
std::string to_json(const RatioReport& rep, const ConfigMap& config);

}  // namespace fracspace
