#include "grushin/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace grushin {

namespace {

std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
    return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v)
{
  const std::string t = trim(v);
  if (t == "inf" || t == "infinity" || t == "Inf")
    return std::numeric_limits<double>::infinity();
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || ptr != t.data() + t.size())
    throw ConfigError(key, "config key '" + key + "': not a number: '" + v + "'");
  return out;
}

} // namespace

Config parse_config(const std::string& text)
{
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#')
      continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("", "config line " + std::to_string(lineno) + ": expected key=value");
    cfg[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return cfg;
}

Config load_config(const std::string& path)
{
  std::ifstream f(path);
  if (!f)
    throw ConfigError("", "cannot open config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string config_text(const Config& cfg)
{
  std::string out;
  for (const auto& [k, v] : cfg)
    out += k + "=" + v + "\n";
  return out;
}

std::uint64_t config_hash(const Config& cfg)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config_text(cfg)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h)
{
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool has_key(const Config& cfg, const std::string& key) { return cfg.count(key) > 0; }

std::string get_string(const Config& cfg, const std::string& key)
{
  auto it = cfg.find(key);
  if (it == cfg.end())
    throw ConfigError(key, "missing required config key '" + key + "'");
  return it->second;
}

std::string get_string(const Config& cfg, const std::string& key, const std::string& fallback)
{
  auto it = cfg.find(key);
  return it == cfg.end() ? fallback : it->second;
}

double get_double(const Config& cfg, const std::string& key)
{
  return to_double(key, get_string(cfg, key));
}

double get_double(const Config& cfg, const std::string& key, double fallback)
{
  auto it = cfg.find(key);
  return it == cfg.end() ? fallback : to_double(key, it->second);
}

long get_int(const Config& cfg, const std::string& key)
{
  const double v = get_double(cfg, key);
  if (v != std::floor(v) || std::abs(v) > 1e15)
    throw ConfigError(key, "config key '" + key + "': not an integer");
  return static_cast<long>(v);
}

long get_int(const Config& cfg, const std::string& key, long fallback)
{
  return has_key(cfg, key) ? get_int(cfg, key) : fallback;
}

double parse_exponent(const std::string& s) { return to_double("exponent", s); }

std::string format_double(double v)
{
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

} // namespace grushin
