#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace grushin {

/// Flat key=value configuration. Lines starting with '#' are comments.
using Config = std::map<std::string, std::string>;

/// Error raised for a missing or malformed key; key() names the offender.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

private:
  std::string key_;
};

Config parse_config(const std::string& text);
Config load_config(const std::string& path);
std::string config_text(const Config& cfg);

/// FNV-1a over the canonical text of the config.
std::uint64_t config_hash(const Config& cfg);
std::string hash_hex(std::uint64_t h);

bool has_key(const Config& cfg, const std::string& key);
std::string get_string(const Config& cfg, const std::string& key);
std::string get_string(const Config& cfg, const std::string& key, const std::string& fallback);
double get_double(const Config& cfg, const std::string& key);
double get_double(const Config& cfg, const std::string& key, double fallback);
long get_int(const Config& cfg, const std::string& key);
long get_int(const Config& cfg, const std::string& key, long fallback);

/// Parses "inf", "infinity", or a number.
double parse_exponent(const std::string& s);

/// Round-trip exact text for a double.
std::string format_double(double v);

} // namespace grushin
