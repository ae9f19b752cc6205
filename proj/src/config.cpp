#include "kdvlab/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "kdvlab/errors.hpp"

namespace kdv {
namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    double d = std::stod(v, &pos);
    if (trim(v.substr(pos)).empty()) return d;
  } catch (const std::exception&) {
  }
  fail(errc::usage, "config key '" + key + "' is not a number: '" + v + "'");
}

}  // namespace

Config Config::parse_text(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      fail(errc::usage, "config line " + std::to_string(lineno) + " has no '='");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      fail(errc::usage, "config line " + std::to_string(lineno) + " has an empty key");
    cfg.entries_[key] = value;
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::usage, "cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : parse_double(key, it->second);
}

int Config::get_int(const std::string& key, int fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  double d = parse_double(key, it->second);
  int i = static_cast<int>(d);
  if (static_cast<double>(i) != d)
    fail(errc::usage, "config key '" + key + "' is not an integer: '" + it->second + "'");
  return i;
}

std::vector<double> Config::get_double_list(const std::string& key,
                                            const std::vector<double>& fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  std::vector<double> out;
  std::string item;
  std::istringstream ss(it->second);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_double(key, item));
  }
  if (out.empty())
    fail(errc::usage, "config key '" + key + "' is an empty list");
  return out;
}

void Config::set(const std::string& key, const std::string& value) {
  entries_[key] = value;
}

std::string Config::canonical_text() const {
  std::ostringstream out;
  for (const auto& [k, v] : entries_) out << k << '=' << v << '\n';
  return out.str();
}

std::uint64_t Config::hash() const {
  // FNV-1a over the canonical text; duplicated in csv.cpp for raw strings.
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : canonical_text()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace kdv
