#ifndef SUBFRACTAL_SELFTEST_HPP
#define SUBFRACTAL_SELFTEST_HPP

#include <string>
#include <vector>

namespace subfractal {

struct SelftestResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Quick built-in checks against fixtures with closed-form answers.
std::vector<SelftestResult> run_selftests();

} // namespace subfractal

#endif
