#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gicselect {

struct CheckResult
{
    std::string name;
    bool passed = false;
    double value = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

// Toy-scale KL / delta_n / Z_alpha / deviance-identity checks.
std::vector<CheckResult> run_diagnostic_suite(std::uint64_t seed);

}  // namespace gicselect
