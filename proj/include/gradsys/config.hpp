#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gradsys {

/// Malformed or inconsistent configuration; the message carries
/// "path:line:" when the problem is tied to a line.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Flat "key = value" text with optional [section] headers. '#' and ';'
/// start comments. Keys before the first header belong to section "".
class Config {
 public:
  static Config parse(const std::string& text, const std::string& origin = "config");
  static Config load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  /// Comma-separated list.
  std::vector<double> get_doubles(const std::string& section, const std::string& key) const;
  std::vector<std::string> get_strings(const std::string& section, const std::string& key) const;

  std::optional<std::string> raw(const std::string& section, const std::string& key) const;
  /// Throws ConfigError naming the first key of a section that is not in
  /// the allowed list.
  void require_known(const std::string& section, const std::vector<std::string>& allowed) const;
  std::vector<std::string> sections() const;
  const std::string& origin() const { return origin_; }

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  const Entry* find(const std::string& section, const std::string& key) const;
  [[noreturn]] void fail(const Entry& e, const std::string& key, const std::string& why) const;

  std::string origin_;
  std::map<std::string, std::map<std::string, Entry>> entries_;
};

}  // namespace gradsys
