#pragma once

#include "maob/free_boundary.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace maob {

struct Check {
  std::string name;
  bool pass = false;
  bool skipped = false;
  std::string detail;  // measured values, or the reason for a skip
};

struct ExperimentReport {
  std::string name;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<Check> checks;
  std::vector<std::pair<std::string, FitReport>> fits;
  std::vector<std::pair<std::string, std::vector<double>>> traces;
  std::vector<std::pair<std::string, double>> values;
  std::vector<std::string> artifacts;

  void echo(const std::string& key, const std::string& value) { config.emplace_back(key, value); }
  void echo(const std::string& key, double value);
  Check& check(const std::string& name, bool pass, const std::string& detail = {});
  Check& skip(const std::string& name, const std::string& reason);
  void fit(const std::string& name, const FitReport& f) { fits.emplace_back(name, f); }
  void trace(const std::string& name, std::vector<double> t) { traces.emplace_back(name, std::move(t)); }
  void value(const std::string& name, double v) { values.emplace_back(name, v); }

  const Check* find(const std::string& name) const;
  double get(const std::string& name) const;  // NaN when absent
  /// Conjunction of all non-skipped checks (false when there are none).
  bool pass() const;
};

/// Shortest round-trip decimal text of a double.
std::string fmt(double x);
std::string fmt(const std::vector<double>& xs);

/// Structured text: [config], [checks], [fits], [values], [traces], [summary].
std::string to_text(const ExperimentReport& r);

/// Writes <dir>/<name>.report and one <name>.<fit>.dat per fit; records the
/// paths in r.artifacts.
void write_report(ExperimentReport& r, const std::filesystem::path& dir);

/// Two-column `log x  log y` data with the fitted line in a header comment.
std::string plot_data(const FitReport& f);

}  // namespace maob
