#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace kdv {

// Flat key=value configuration with dotted section prefixes, e.g.
//   grid.n=256
//   flow.kind=hk
//   # comment
// Unknown keys are preserved (callers may validate); values are strings with
// typed getters.  Parsing errors raise errc::usage.
class Config {
 public:
  static Config parse_text(const std::string& text);
  static Config parse_file(const std::string& path);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& fallback) const;
  void set(const std::string& key, const std::string& value);

  // Canonical text (sorted keys) used for the reproducibility hash.
  std::string canonical_text() const;
  std::uint64_t hash() const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace kdv
