// Runs the thirteen acceptance checks and prints one line per check.
// Exit status is nonzero when any check fails.

#include "sirbif/verification.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

int main(int argc, char** argv)
{
    sirbif::SuiteOptions options;
    for (int i = 1; i < argc; ++i) {
        options.only.push_back(std::atoi(argv[i]));
    }
    const auto checks = sirbif::run_acceptance_suite(options);
    int failed = 0;
    for (const auto& c : checks) {
        std::cout << sirbif::format_check_line(c) << '\n';
        failed += c.pass ? 0 : 1;
    }
    std::cout << (checks.size() - static_cast<std::size_t>(failed)) << "/" << checks.size() << " acceptance checks passed\n";
    return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
