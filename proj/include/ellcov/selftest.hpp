#pragma once

// Built-in oracle suite: every analytic distribution is checked against an
// independent path (brute-force quadrature, closed-form limits, or
// Monte-Carlo sampling) at reduced sample counts.

#include <iosfwd>

namespace ellcov::selftest {

struct Options {
    bool quick = false;                 // smaller sample counts (~10x faster)
    bool inject_tolerance_fault = false;  // test hook: corrupts one tolerance so
                                          // the harness can observe a failure
};

struct Report {
    int checks = 0;
    int failures = 0;
    bool ok() const { return failures == 0; }
};

/// Runs all checks, one "[PASS]/[FAIL] name: detail" line per check on
/// `out`.  Timing goes to `timing` so that `out` stays byte-reproducible
/// between runs with identical options.
Report run(const Options& opts, std::ostream& out, std::ostream& timing);

}  // namespace ellcov::selftest
