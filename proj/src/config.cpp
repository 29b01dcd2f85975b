#include "gradsys/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace gradsys {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool valid_name(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
  });
}

std::optional<double> to_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  auto error = [&](const std::string& why) { throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + why); };
  while (std::getline(in, line)) {
    ++lineno;
    const auto comment = line.find_first_of("#;");
    const std::string body = trim(comment == std::string::npos ? line : line.substr(0, comment));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') error("unterminated section header");
      section = trim(body.substr(1, body.size() - 2));
      if (!valid_name(section)) error("bad section name '" + section + "'");
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) error("expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (!valid_name(key)) error("bad key '" + key + "'");
    if (value.empty()) error("empty value for '" + key + "'");
    auto& sec = cfg.entries_[section];
    if (sec.count(key)) error("duplicate key '" + key + "'");
    sec[key] = Entry{value, lineno};
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str(), path);
}

const Config::Entry* Config::find(const std::string& section, const std::string& key) const {
  const auto s = entries_.find(section);
  if (s == entries_.end()) return nullptr;
  const auto e = s->second.find(key);
  return e == s->second.end() ? nullptr : &e->second;
}

void Config::fail(const Entry& e, const std::string& key, const std::string& why) const {
  throw ConfigError(origin_ + ":" + std::to_string(e.line) + ": " + key + ": " + why);
}

bool Config::has(const std::string& section, const std::string& key) const { return find(section, key) != nullptr; }

std::optional<std::string> Config::raw(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) return std::nullopt;
  return e->value;
}

std::string Config::get_string(const std::string& section, const std::string& key, const std::string& fallback) const {
  const Entry* e = find(section, key);
  return e ? e->value : fallback;
}

double Config::get_double(const std::string& section, const std::string& key, double fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  const auto v = to_double(e->value);
  if (!v) fail(*e, key, "not a number: '" + e->value + "'");
  return *v;
}

int Config::get_int(const std::string& section, const std::string& key, int fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  int v = 0;
  const auto [ptr, ec] = std::from_chars(e->value.data(), e->value.data() + e->value.size(), v);
  if (ec != std::errc() || ptr != e->value.data() + e->value.size()) fail(*e, key, "not an integer: '" + e->value + "'");
  return v;
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  if (e->value == "true" || e->value == "yes" || e->value == "1") return true;
  if (e->value == "false" || e->value == "no" || e->value == "0") return false;
  fail(*e, key, "expected true or false, got '" + e->value + "'");
}

std::vector<std::string> Config::get_strings(const std::string& section, const std::string& key) const {
  std::vector<std::string> out;
  const Entry* e = find(section, key);
  if (!e) return out;
  std::istringstream in(e->value);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) fail(*e, key, "empty list item");
    out.push_back(item);
  }
  return out;
}

std::vector<double> Config::get_doubles(const std::string& section, const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : get_strings(section, key)) {
    const auto v = to_double(item);
    if (!v) fail(*find(section, key), key, "not a number: '" + item + "'");
    out.push_back(*v);
  }
  return out;
}

void Config::require_known(const std::string& section, const std::vector<std::string>& allowed) const {
  const auto s = entries_.find(section);
  if (s == entries_.end()) return;
  for (const auto& [key, entry] : s->second) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) fail(entry, key, "unknown key");
  }
}

std::vector<std::string> Config::sections() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : entries_) out.push_back(name);
  return out;
}

}  // namespace gradsys
