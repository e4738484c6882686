// One PASS/FAIL line per acceptance criterion. Argument: quick or full (default full).
#include <cstdio>
#include <exception>
#include <string>

#include "nls/harness/acceptance.hpp"

int main(int argc, char** argv) {
  try {
    const auto level = nls::parse_verify_level(argc > 1 ? argv[1] : "full");
    nls::AcceptanceOptions opt;
    opt.on_result = [](const nls::CriterionResult& r) {
      std::printf("%s\n", nls::format_result(r).c_str());
      std::fflush(stdout);
    };
    for (int i = 2; i < argc; ++i) opt.only.emplace_back(argv[i]);
    const auto results = nls::run_acceptance(level, opt);
    std::size_t passed = 0;
    for (const auto& r : results) passed += r.passed;
    std::printf("%zu/%zu criteria passed\n", passed, results.size());
    return passed == results.size() ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
