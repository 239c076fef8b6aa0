#include "nsbox/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "nsbox/errors.hpp"

namespace nsbox {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '.' ||
                    c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidParameter("config line " + std::to_string(lineno) +
                             ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!valid_key(key))
      throw InvalidParameter("config line " + std::to_string(lineno) +
                             ": bad key '" + key + "'");
    if (cfg.values_.count(key))
      throw InvalidParameter("config line " + std::to_string(lineno) +
                             ": duplicate key '" + key + "'");
    cfg.values_[key] = value;
  }
  return cfg;
}

Config Config::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidParameter("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void Config::set(const std::string& key, const std::string& value) {
  if (!valid_key(key)) throw InvalidParameter("bad config key '" + key + "'");
  values_[key] = trim(value);
}

bool Config::has(const std::string& key) const { return values_.count(key) != 0; }

std::string Config::get_string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw InvalidParameter(key + ": missing required key");
  consumed_.insert(key);
  return it->second;
}

std::string Config::get_string_or(const std::string& key,
                                  const std::string& fallback) const {
  consumed_.insert(key);
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const {
  const std::string raw = get_string(key);
  if (raw == "inf") return std::numeric_limits<double>::infinity();
  char* end = nullptr;
  const double v = std::strtod(raw.c_str(), &end);
  if (raw.empty() || end != raw.c_str() + raw.size() || !std::isfinite(v))
    throw InvalidParameter(key + ": expected a number, got '" + raw + "'");
  return v;
}

double Config::get_double_or(const std::string& key, double fallback) const {
  consumed_.insert(key);
  return has(key) ? get_double(key) : fallback;
}

std::int64_t Config::get_int(const std::string& key) const {
  const std::string raw = get_string(key);
  char* end = nullptr;
  const long long v = std::strtoll(raw.c_str(), &end, 10);
  if (raw.empty() || end != raw.c_str() + raw.size())
    throw InvalidParameter(key + ": expected an integer, got '" + raw + "'");
  return v;
}

std::int64_t Config::get_int_or(const std::string& key, std::int64_t fallback) const {
  consumed_.insert(key);
  return has(key) ? get_int(key) : fallback;
}

std::uint64_t Config::get_uint64_or(const std::string& key,
                                    std::uint64_t fallback) const {
  consumed_.insert(key);
  if (!has(key)) return fallback;
  const std::string raw = get_string(key);
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw.c_str(), &end, 10);
  if (raw.empty() || end != raw.c_str() + raw.size())
    throw InvalidParameter(key + ": expected an unsigned integer, got '" + raw + "'");
  return v;
}

bool Config::get_bool_or(const std::string& key, bool fallback) const {
  consumed_.insert(key);
  if (!has(key)) return fallback;
  const std::string raw = get_string(key);
  if (raw == "true") return true;
  if (raw == "false") return false;
  throw InvalidParameter(key + ": expected true or false, got '" + raw + "'");
}

std::vector<std::string> Config::get_string_list(const std::string& key) const {
  const std::string raw = get_string(key);
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(raw);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  if (out.empty()) throw InvalidParameter(key + ": expected a nonempty list");
  return out;
}

std::vector<double> Config::get_double_list(const std::string& key) const {
  std::vector<double> out;
  for (const std::string& item : get_string_list(key)) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (end != item.c_str() + item.size() || !std::isfinite(v))
      throw InvalidParameter(key + ": expected numbers, got '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> Config::unconsumed() const {
  std::vector<std::string> out;
  for (const auto& [key, value] : values_)
    if (!consumed_.count(key)) out.push_back(key);
  return out;
}

void Config::require_all_consumed() const {
  const std::vector<std::string> extra = unconsumed();
  if (extra.empty()) return;
  std::string msg = "unknown config keys:";
  for (const std::string& k : extra) msg += " " + k;
  throw InvalidParameter(msg);
}

}  // namespace nsbox
