#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace spinor {

struct CheckResult {
  std::string suite;
  std::string name;
  bool pass = false;
  std::string detail;
};

const std::vector<std::string>& verification_suites();

/// Runs one named suite ("all" for everything). quick trims the sizes so the
/// sweep finishes in tens of seconds; the seed fixes every random draw.
std::vector<CheckResult> run_verification(const std::string& suite, bool quick,
                                          std::uint64_t seed);

nlohmann::json verification_to_json(const std::vector<CheckResult>& results);

}  // namespace spinor
