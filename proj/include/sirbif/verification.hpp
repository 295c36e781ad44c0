#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sirbif {

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct SuiteOptions {
    std::uint64_t seed = 20241015;  // drives every random sample in the suite
    std::vector<int> only;          // empty: run all thirteen checks
};

// The thirteen acceptance checks, each at its fixed tolerance.
std::vector<CheckResult> run_acceptance_suite(const SuiteOptions& options = {});

// "PASS 04 flip cascade: ..." (one line, no trailing newline).
std::string format_check_line(const CheckResult& check);

}  // namespace sirbif
