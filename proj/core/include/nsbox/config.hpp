#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace nsbox {

// Flat key=value document: one `path.to.key = value` per line, '#' starts a
// comment, blank lines ignored. Values are scalars or comma-separated lists.
// Getters consume keys so a job can reject unknown ones afterwards; errors
// carry the field path.
class Config {
 public:
  static Config parse(const std::string& text);
  static Config load_file(const std::string& path);

  // Override or add a key (the CLI flag path). Later set wins.
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get_string(const std::string& key) const;
  std::string get_string_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key) const;
  std::int64_t get_int_or(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_uint64_or(const std::string& key, std::uint64_t fallback) const;
  bool get_bool_or(const std::string& key, bool fallback) const;
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<std::string> get_string_list(const std::string& key) const;

  // Keys present but never read by any getter.
  std::vector<std::string> unconsumed() const;
  void require_all_consumed() const;

  // Resolved snapshot in key order, for embedding in reports.
  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> consumed_;
};

}  // namespace nsbox
