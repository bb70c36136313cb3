#pragma once

// Run configuration. Sources, lowest priority first: built-in defaults, a
// key=value file, HLZ_<KEY> environment variables, command-line flags.

#include <map>
#include <string>

#include "hlz/ladder.hpp"
#include "hlz/quadrature.hpp"

namespace hlz {

struct Config {
  double epsilon = 0.01;
  MuParams mu;
  int rs_terms = kDefaultRsTerms;
  double tol = 1e-8;
  double height_budget = 2e6;
  double sieve_budget = 1e8;
  std::string checkpoint_path;
  int threads = 0;  // 0: OpenMP default
};

/// Thrown for unknown keys, unparsable values and out-of-range settings.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sets one field from its textual value. Keys: epsilon, mu_coeff,
/// mu_omega1, mu_omega2, rs_terms, tol, height_budget, sieve_budget,
/// checkpoint_path, threads.
void set_config_value(Config& c, const std::string& key, const std::string& value);

/// Applies a key=value file. Blank lines and lines starting with '#' are
/// skipped.
void load_config_file(Config& c, const std::string& path);

/// Applies HLZ_<KEY> variables (upper case) that are set.
void apply_environment(Config& c);

/// Throws ConfigError unless every field is in range.
void validate(const Config& c);

/// The effective configuration as a loadable key=value block.
std::string to_text(const Config& c);

}  // namespace hlz
