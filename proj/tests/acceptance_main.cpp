// Acceptance harness: evaluates the ten release criteria and prints one
// PASS/FAIL line per criterion with the measured sub-checks behind it.
// Exit status 0 only when every criterion passes.
#include <cstdio>

#include "sclab/experiments.hpp"

int main() {
    using namespace sclab::experiments;
    AcceptanceReport rep;
    try {
        rep = acceptance_suite(AcceptanceOptions{});
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "acceptance harness aborted: %s\n", ex.what());
        return 1;
    }

    int passed = 0;
    for (const auto& crit : rep.criteria) {
        std::printf("[%s] criterion %d: %s\n", crit.pass ? "PASS" : "FAIL", crit.id,
                    crit.name.c_str());
        for (const auto& l : crit.checks)
            std::printf("    %s%s  %s: measured=%.9g target=%.9g tol=%.9g\n",
                        l.pass ? "ok  " : "FAIL", l.informational ? " (info)" : "",
                        l.label.c_str(), l.measured, l.target, l.tolerance);
        if (!crit.note.empty()) std::printf("    note: %s\n", crit.note.c_str());
        if (crit.pass) ++passed;
    }
    std::printf("ACCEPTANCE: %d/%zu criteria passed, convention constants (sign, scale) = (%+d, %g)\n",
                passed, rep.criteria.size(), rep.dgr_sign, rep.dgr_scale);
    return rep.all_pass ? 0 : 1;
}
