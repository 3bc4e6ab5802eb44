#pragma once

// CSV and JSON artifacts. Numbers are written with 12 significant digits via
// std::to_chars, so output is locale-independent and byte-stable.
//
// JSON layout: {format_version, command, config_echo, rows[], verdicts{}, partial}
// CSV layout:  header row, one line per row, then "# name: value" verdict lines.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <system_error>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "errors.hpp"
#include "potential.hpp"
#include "radial_solver.hpp"
#include "spectral_properties.hpp"

namespace hft_spectra {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;
inline constexpr int kSignificantDigits = 12;

inline std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general,
                                 kSignificantDigits);
  return std::string(buf, res.ptr);
}

/// `value` rounded to 12 significant digits; JSON then prints the shortest
/// representation of the rounded number.
inline Json json_number(double value) {
  if (!std::isfinite(value)) return nullptr;
  const std::string text = format_number(value);
  double rounded = 0.0;
  std::from_chars(text.data(), text.data() + text.size(), rounded);
  return rounded;
}

using Cell = std::variant<double, long long, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Artifact {
  std::string command;
  Json config_echo = Json::object();
  Table table;
  std::vector<std::pair<std::string, std::string>> verdicts;
  bool partial = false;
};

namespace detail {

inline std::string cell_text(const Cell& cell) {
  struct {
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const { return v; }
  } visitor;
  return std::visit(visitor, cell);
}

inline Json cell_json(const Cell& cell) {
  struct {
    Json operator()(double v) const { return json_number(v); }
    Json operator()(long long v) const { return v; }
    Json operator()(bool v) const { return v; }
    Json operator()(const std::string& v) const { return v; }
  } visitor;
  return std::visit(visitor, cell);
}

}  // namespace detail

inline void write_csv(std::ostream& os, const Artifact& artifact) {
  const auto& t = artifact.table;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    os << (c ? "," : "") << t.columns[c];
  }
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      os << (c ? "," : "") << detail::cell_text(row[c]);
    }
    os << '\n';
  }
  if (artifact.partial) os << "# partial: true\n";
  for (const auto& [name, value] : artifact.verdicts) {
    os << "# " << name << ": " << value << '\n';
  }
}

inline Json to_json(const Artifact& artifact) {
  Json doc;
  doc["format_version"] = kFormatVersion;
  doc["command"] = artifact.command;
  doc["config_echo"] = artifact.config_echo;
  Json rows = Json::array();
  for (const auto& row : artifact.table.rows) {
    Json obj = Json::object();
    for (std::size_t c = 0; c < row.size() && c < artifact.table.columns.size(); ++c) {
      obj[artifact.table.columns[c]] = detail::cell_json(row[c]);
    }
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  Json verdicts = Json::object();
  for (const auto& [name, value] : artifact.verdicts) verdicts[name] = value;
  doc["verdicts"] = std::move(verdicts);
  doc["partial"] = artifact.partial;
  return doc;
}

inline void write_json(std::ostream& os, const Artifact& artifact) {
  os << to_json(artifact).dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Beta scans

inline Json scan_config_echo(const BetaScan& scan) {
  Json echo;
  echo["family"] = std::string(to_string(scan.family));
  echo["p"] = json_number(scan.p);
  echo["l"] = scan.l;
  echo["k_max"] = scan.k_max;
  echo["r_max"] = json_number(scan.grid.r_max);
  echo["n_points"] = scan.grid.n_points;
  return echo;
}

inline std::string verdict_text(const ScanVerdict& v) { return v.passed ? "pass" : "fail"; }

/// Rows: beta, E_1..E_k, beta2_E_1..beta2_E_k. Verdicts are only attached
/// when the scan is complete and has at least two rows.
inline Artifact scan_artifact(const BetaScan& scan, Json config_echo = nullptr) {
  Artifact a;
  a.command = "scan";
  a.config_echo = config_echo.is_null() ? scan_config_echo(scan) : std::move(config_echo);
  a.partial = scan.partial;
  a.table.columns.push_back("beta");
  for (int k = 1; k <= scan.k_max; ++k) a.table.columns.push_back("E_" + std::to_string(k));
  for (int k = 1; k <= scan.k_max; ++k) a.table.columns.push_back("beta2_E_" + std::to_string(k));
  for (const auto& row : scan.rows) {
    std::vector<Cell> cells{row.beta};
    for (double e : row.energies) cells.emplace_back(e);
    for (double s : row.scaled_values) cells.emplace_back(s);
    a.table.rows.push_back(std::move(cells));
  }
  if (!scan.partial && scan.rows.size() >= 2) {
    a.verdicts.emplace_back("monotone_decrease", verdict_text(assert_monotone_decrease(scan)));
    a.verdicts.emplace_back("negativity", verdict_text(assert_negativity(scan)));
  }
  return a;
}

/// Rebuilds a scan from its JSON artifact; box-limited flags are recomputed
/// from the stored grid.
inline BetaScan scan_from_json(const Json& doc) {
  try {
    if (doc.at("format_version").get<int>() != kFormatVersion) {
      throw PreconditionError("unsupported scan format_version");
    }
    const Json& echo = doc.at("config_echo");
    BetaScan scan;
    scan.family = parse_family(echo.at("family").get<std::string>());
    scan.p = echo.at("p").get<double>();
    scan.l = echo.at("l").get<int>();
    scan.k_max = echo.at("k_max").get<int>();
    scan.grid = GridSpec{echo.at("r_max").get<double>(), echo.at("n_points").get<std::size_t>()};
    scan.partial = doc.value("partial", false);
    const double threshold = box_limit_threshold(scan.grid);
    for (const Json& row : doc.at("rows")) {
      ScanRow r;
      r.beta = row.at("beta").get<double>();
      for (int k = 1; k <= scan.k_max; ++k) {
        const double e = row.at("E_" + std::to_string(k)).get<double>();
        r.energies.push_back(e);
        r.scaled_values.push_back(row.at("beta2_E_" + std::to_string(k)).get<double>());
        r.box_limited.push_back(std::abs(e) < threshold);
      }
      scan.rows.push_back(std::move(r));
    }
    return scan;
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("malformed scan artifact: ") + e.what());
  }
}

inline BetaScan read_scan_json(std::istream& is) {
  Json doc;
  try {
    doc = Json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("scan artifact is not valid JSON: ") + e.what());
  }
  return scan_from_json(doc);
}

}  // namespace hft_spectra
