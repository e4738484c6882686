#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace nls {

enum class VerifyLevel { Quick, Full };
VerifyLevel parse_verify_level(const std::string& s);

struct CriterionResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
  double budget_seconds = 0;  // runtime limit; exceeding it fails the criterion
};

struct AcceptanceOptions {
  bool flip_term4_sign = false;  // deliberate fault: the Morawetz identity check must fail
  std::uint64_t seed = 0;
  std::vector<std::string> only;  // run just these criteria; empty runs all
  std::function<void(const CriterionResult&)> on_result;
};

std::vector<std::string> criterion_names(VerifyLevel level);
std::vector<CriterionResult> run_acceptance(VerifyLevel level, const AcceptanceOptions& opt = {});

// "PASS name: detail (12.3 s of 120 s)"
std::string format_result(const CriterionResult& r);

}  // namespace nls
