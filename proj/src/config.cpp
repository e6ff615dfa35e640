#include "maob/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace maob {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double x = 0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), x);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(x))
    throw ConfigError("bad number for " + key + ": " + text);
  return x;
}

}  // namespace

Config Config::parse(std::istream& in) {
  Config c;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    const std::string full = section.empty() ? key : section + "." + key;
    if (c.kv_.count(full)) throw ConfigError("duplicate key: " + full);
    c.kv_[full] = trim(line.substr(eq + 1));
  }
  return c;
}

Config Config::parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  return parse(in);
}

std::string Config::str(const std::string& key, const std::string& fallback) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

std::string Config::str(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) throw ConfigError("missing key: " + key);
  return it->second;
}

double Config::num(const std::string& key, double fallback) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : parse_double(key, it->second);
}

int Config::integer(const std::string& key, int fallback) const {
  const double x = num(key, fallback);
  if (x != std::floor(x) || std::abs(x) > 1e9) throw ConfigError("expected an integer for " + key);
  return static_cast<int>(x);
}

std::vector<double> Config::list(const std::string& key, const std::vector<double>& fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  std::vector<double> out;
  std::string text = it->second;
  for (auto& ch : text)
    if (ch == ',') ch = ' ';
  std::istringstream ls(text);
  std::string tok;
  while (ls >> tok) out.push_back(parse_double(key, tok));
  if (out.empty()) throw ConfigError("empty list for " + key);
  return out;
}

std::vector<int> Config::int_list(const std::string& key, const std::vector<int>& fallback) const {
  if (!has(key)) return fallback;
  std::vector<int> out;
  for (double x : list(key, {})) {
    if (x != std::floor(x)) throw ConfigError("expected integers for " + key);
    out.push_back(static_cast<int>(x));
  }
  return out;
}

void Config::require_known(const std::set<std::string>& allowed) const {
  for (const auto& [k, v] : kv_)
    if (!allowed.count(k)) throw ConfigError("unknown key: " + k);
}

}  // namespace maob
