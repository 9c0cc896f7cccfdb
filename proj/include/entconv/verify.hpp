// verify.hpp
// Self-check suites behind the `verify` subcommand.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace entconv {

struct Check {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
  /// Reported only; does not affect SuiteReport::passed().
  bool informational = false;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<Check> checks;

  bool passed() const;
};

/// unitarity, conservation, roundtrip, werner, formulas
const std::vector<std::string>& suite_names();

/// Runs one suite, or every suite for "all". Throws std::invalid_argument
/// for an unknown name.
std::vector<SuiteReport> run_verification(std::string_view suite, std::uint64_t seed);

nlohmann::json to_json(const SuiteReport& report);

}  // namespace entconv
