#pragma once

#include "wedge/anderson.hpp"

#include <string>
#include <vector>

namespace wedge {

struct SelftestCheck {
    std::string name;
    bool passed = false;
    std::string detail;  ///< worst observed value against its limit
};

struct SelftestReport {
    std::vector<SelftestCheck> checks;

    [[nodiscard]] bool ok() const noexcept;
};

struct SelftestOptions {
    AndersonOptions anderson;  ///< lets a fixture break the image series on purpose
};

/// Fast consistency suite: the two finite-horizon series on a grid, the two
/// strip density and survival representations, the infinite-horizon limits
/// and the long-horizon approach to them. Never throws for a numerical
/// failure; exceptions are recorded as failed checks.
[[nodiscard]] SelftestReport run_selftest(const SelftestOptions& options = {});

}  // namespace wedge
