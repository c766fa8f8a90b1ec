#pragma once

#include <string>
#include <vector>

namespace telesim {

struct CheckResult {
    std::string name;
    double max_deviation = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

// Invariant suites behind the `verify` subcommand. Each returns one result
// per invariant with the worst observed deviation.
std::vector<CheckResult> verify_bases();
std::vector<CheckResult> verify_formulas();
std::vector<CheckResult> verify_distill(int q_max);
std::vector<CheckResult> verify_bounds();

bool all_pass(const std::vector<CheckResult>& results);

}  // namespace telesim
