#pragma once

// Named validation checks shared by `softedge validate` and the acceptance
// binary. Each check reports its measured value against a pinned tolerance.

#include <cstdint>
#include <string>
#include <vector>

namespace softedge::checks {

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double tolerance = 0.0;
    std::string detail;
    double seconds = 0.0;
};

/// Scales every Monte-Carlo sample size; 1 is the full acceptance setting.
struct McOptions {
    double scale = 1.0;
    std::uint64_t seed = 20261016;
};

CheckResult dual_oracle_f2();
CheckResult bound_gue_density();
CheckResult expansion_orders();
CheckResult kernel_expansion();
CheckResult m1_system();
CheckResult beta14_derivation();
CheckResult turning_point_recursions();
CheckResult wave_expansion();
CheckResult monte_carlo(const McOptions& opt = {});
CheckResult laguerre_gaussian();
CheckResult finite_rank_corrections();

/// The ten acceptance checks in criterion order, then m1_system. monte_carlo is the only slow one.
const std::vector<std::string>& check_names();

/// Runs one check by name. Throws std::invalid_argument for an unknown name.
CheckResult run_check(const std::string& name, const McOptions& opt = {});

}  // namespace softedge::checks
