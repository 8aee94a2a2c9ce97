#pragma once

#include <string>
#include <vector>

namespace magband {

// One verification criterion of the suite: an exact identity, a fitted
// asymptotic, or a cross-check between independent pipelines, with its
// pinned tolerances baked into the implementation.
struct CriterionResult {
    int id = 0;
    std::string name;
    bool ran = true;      // false: skipped by quick mode
    bool passed = false;  // meaningful only when ran
    double elapsed_seconds = 0.0;
    std::string detail;   // measured values vs bounds, one line
};

struct AcceptanceOptions {
    bool quick = false;       // run the cheap subset only
    int workers = 1;
    std::string scratch_dir;  // for determinism byte-compare files; empty = system temp
};

struct AcceptanceReport {
    std::vector<CriterionResult> results;
    bool all_passed() const {
        for (const auto& r : results)
            if (r.ran && !r.passed) return false;
        return true;
    }
};

AcceptanceReport run_acceptance(const AcceptanceOptions& opts = {});

} // namespace magband
