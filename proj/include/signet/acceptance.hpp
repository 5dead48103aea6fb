#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace signet::acceptance {

struct CriterionResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Runs the full verification suite, printing one pass/fail line per
/// criterion to `out`. Returns true when every criterion passes.
bool run_all(std::ostream& out);

/// Individual criteria, in suite order.
std::vector<CriterionResult> run_suite();

}  // namespace signet::acceptance
