// Acceptance run: one line per criterion, full Monte-Carlo sample sizes.

#include "checks.hpp"

#include <cstdio>
#include <exception>

int main() {
    using namespace softedge::checks;
    const auto& names = check_names();
    int failed = 0;
    // The first ten names are the criteria in order; m1_system is covered by beta14_derivation.
    for (int i = 0; i < 10; ++i) {
        CheckResult r;
        try {
            r = run_check(names[i]);
        } catch (const std::exception& e) {
            r.name = names[i];
            r.detail = std::string("exception: ") + e.what();
        }
        failed += !r.pass;
        std::printf("criterion %2d %-18s %s  value=%.6g tolerance=%.6g time=%.1fs  %s\n", i + 1, r.name.c_str(),
                    r.pass ? "PASS" : "FAIL", r.value, r.tolerance, r.seconds, r.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of 10 criteria passed\n", 10 - failed);
    return failed == 0 ? 0 : 1;
}
