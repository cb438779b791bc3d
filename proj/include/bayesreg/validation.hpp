#ifndef BAYESREG_VALIDATION_HPP
#define BAYESREG_VALIDATION_HPP

// Named self-check suites behind `bayesreg validate`.

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace bayesreg {

struct ValidationOptions {
  int cases = 10000;
  std::uint64_t seed = 1;
  std::int64_t samples = 100000;  // Monte Carlo draws
};

struct ValidationReport {
  std::string suite;
  bool passed = false;
  nlohmann::json details;
};

/// "mc-region", "lemma", "conservativeness".
const std::vector<std::string>& validation_suites();

/// Throws std::invalid_argument for an unknown suite name.
ValidationReport run_validation(const std::string& suite, const ValidationOptions& options);

}  // namespace bayesreg

#endif  // BAYESREG_VALIDATION_HPP
