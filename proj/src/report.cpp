#include "maob/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace maob {

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string fmt(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ' ';
    out += fmt(xs[i]);
  }
  return out;
}

void ExperimentReport::echo(const std::string& key, double value) { config.emplace_back(key, fmt(value)); }

Check& ExperimentReport::check(const std::string& name, bool pass, const std::string& detail) {
  checks.push_back(Check{name, pass, false, detail});
  return checks.back();
}

Check& ExperimentReport::skip(const std::string& name, const std::string& reason) {
  checks.push_back(Check{name, false, true, reason});
  return checks.back();
}

const Check* ExperimentReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

double ExperimentReport::get(const std::string& name) const {
  for (const auto& [k, v] : values)
    if (k == name) return v;
  return std::numeric_limits<double>::quiet_NaN();
}

bool ExperimentReport::pass() const {
  bool any = false;
  for (const auto& c : checks) {
    if (c.skipped) continue;
    any = true;
    if (!c.pass) return false;
  }
  return any;
}

std::string to_text(const ExperimentReport& r) {
  std::ostringstream os;
  os << "experiment = " << r.name << "\n\n[config]\n";
  for (const auto& [k, v] : r.config) os << k << " = " << v << "\n";
  os << "\n[checks]\n";
  for (const auto& c : r.checks) {
    os << c.name << " = " << (c.skipped ? "skipped: " + c.detail : (c.pass ? "pass" : "fail"));
    if (!c.skipped && !c.detail.empty()) os << "  # " << c.detail;
    os << "\n";
  }
  if (!r.fits.empty()) {
    os << "\n[fits]\n";
    for (const auto& [k, f] : r.fits) {
      os << k << " = estimate " << fmt(f.estimate) << ", theory " << fmt(f.theory)
         << (f.lower_bound ? ", lower bound with tolerance " : ", tolerance ") << fmt(f.tolerance) << ", r2 "
         << fmt(f.r_squared) << ", window [" << fmt(f.window_lo) << ", " << fmt(f.window_hi) << "], "
         << (f.pass ? "pass" : "fail") << "\n";
    }
  }
  if (!r.values.empty()) {
    os << "\n[values]\n";
    for (const auto& [k, v] : r.values) os << k << " = " << fmt(v) << "\n";
  }
  if (!r.traces.empty()) {
    os << "\n[traces]\n";
    for (const auto& [k, t] : r.traces) os << k << " = " << fmt(t) << "\n";
  }
  if (!r.artifacts.empty()) {
    os << "\n[artifacts]\n";
    for (const auto& a : r.artifacts) os << a << "\n";
  }
  os << "\n[summary]\nresult = " << (r.pass() ? "pass" : "fail") << "\n";
  return os.str();
}

std::string plot_data(const FitReport& f) {
  std::ostringstream os;
  os << "# log y = " << fmt(f.estimate) << " * log x + " << fmt(f.intercept) << "\n";
  os << "# theory " << fmt(f.theory) << ", r2 " << fmt(f.r_squared) << "\n";
  for (std::size_t i = 0; i < f.log_x.size(); ++i) os << fmt(f.log_x[i]) << " " << fmt(f.log_y[i]) << "\n";
  return os.str();
}

void write_report(ExperimentReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [k, f] : r.fits) {
    const auto p = dir / (r.name + "." + k + ".dat");
    std::ofstream(p) << plot_data(f);
    r.artifacts.push_back(p.string());
  }
  const auto p = dir / (r.name + ".report");
  r.artifacts.push_back(p.string());
  std::ofstream out(p);
  out << to_text(r);
  if (!out) throw std::runtime_error("cannot write " + p.string());
}

}  // namespace maob
