#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace maob {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat `key = value` text with `[section]` headers. Keys are stored as
/// "section.key" (bare "key" before the first header). `#` starts a comment.
class Config {
 public:
  static Config parse(std::istream& in);
  static Config parse_string(const std::string& text);
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return kv_.count(key) != 0; }
  void set(const std::string& key, const std::string& value) { kv_[key] = value; }
  const std::map<std::string, std::string>& entries() const { return kv_; }

  std::string str(const std::string& key, const std::string& fallback) const;
  std::string str(const std::string& key) const;  // throws when missing
  double num(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  std::vector<double> list(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<int> int_list(const std::string& key, const std::vector<int>& fallback) const;

  /// Throws ConfigError("unknown key: ...") for entries outside `allowed`.
  void require_known(const std::set<std::string>& allowed) const;

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace maob
