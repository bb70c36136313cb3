#include "hlz/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <vector>

namespace hlz {

namespace {

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {"epsilon",  "mu_coeff",     "mu_omega1",    "mu_omega2",      "rs_terms",
                                                "tol",      "height_budget", "sieve_budget", "checkpoint_path", "threads"};
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    throw ConfigError(fmt::format("{}: '{}' is not a number", key, v));
  }
  return out;
}

int parse_int(const std::string& key, const std::string& v) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    throw ConfigError(fmt::format("{}: '{}' is not an integer", key, v));
  }
  return out;
}

}  // namespace

void set_config_value(Config& c, const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "epsilon") {
    c.epsilon = parse_real(key, v);
  } else if (key == "mu_coeff") {
    c.mu.coeff = parse_real(key, v);
  } else if (key == "mu_omega1") {
    c.mu.omega1 = parse_real(key, v);
  } else if (key == "mu_omega2") {
    c.mu.omega2 = parse_real(key, v);
  } else if (key == "rs_terms") {
    c.rs_terms = parse_int(key, v);
  } else if (key == "tol") {
    c.tol = parse_real(key, v);
  } else if (key == "height_budget") {
    c.height_budget = parse_real(key, v);
  } else if (key == "sieve_budget") {
    c.sieve_budget = parse_real(key, v);
  } else if (key == "checkpoint_path") {
    c.checkpoint_path = v;
  } else if (key == "threads") {
    c.threads = parse_int(key, v);
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

void load_config_file(Config& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(fmt::format("{}:{}: expected key=value", path, lineno));
    try {
      set_config_value(c, trim(s.substr(0, eq)), s.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("{}:{}: {}", path, lineno, e.what()));
    }
  }
}

void apply_environment(Config& c) {
  for (const auto& key : config_keys()) {
    std::string name = "HLZ_" + key;
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char ch) { return std::toupper(ch); });
    if (const char* v = std::getenv(name.c_str())) {
      try {
        set_config_value(c, key, v);
      } catch (const ConfigError& e) {
        throw ConfigError(name + ": " + e.what());
      }
    }
  }
}

void validate(const Config& c) {
  if (!(c.epsilon > 0.0) || !(c.epsilon < 1.0 / 24.0)) throw ConfigError("epsilon must lie in (0, 1/24)");
  if (!(c.mu.coeff > 0.0) || !(c.mu.omega1 >= 1.0) || !(c.mu.omega2 >= 1.0)) {
    throw ConfigError("mu needs coeff > 0, omega1 >= 1, omega2 >= 1");
  }
  if (c.rs_terms < 0 || c.rs_terms > kMaxRsTerms) throw ConfigError("rs_terms must lie in [0, 5]");
  if (!(c.tol > 0.0)) throw ConfigError("tol must be positive");
  if (!(c.height_budget > 0.0)) throw ConfigError("height_budget must be positive");
  if (!(c.sieve_budget > 0.0)) throw ConfigError("sieve_budget must be positive");
  if (c.threads < 0) throw ConfigError("threads must be >= 0");
}

std::string to_text(const Config& c) {
  std::string out;
  out += fmt::format("epsilon={:.17g}\n", c.epsilon);
  out += fmt::format("mu_coeff={:.17g}\n", c.mu.coeff);
  out += fmt::format("mu_omega1={:.17g}\n", c.mu.omega1);
  out += fmt::format("mu_omega2={:.17g}\n", c.mu.omega2);
  out += fmt::format("rs_terms={}\n", c.rs_terms);
  out += fmt::format("tol={:.17g}\n", c.tol);
  out += fmt::format("height_budget={:.17g}\n", c.height_budget);
  out += fmt::format("sieve_budget={:.17g}\n", c.sieve_budget);
  out += fmt::format("checkpoint_path={}\n", c.checkpoint_path);
  out += fmt::format("threads={}\n", c.threads);
  return out;
}

}  // namespace hlz
