#pragma once

#include "magband/correction.hpp"
#include "magband/fiber_ids.hpp"
#include "magband/model.hpp"
#include "magband/oracle2d.hpp"
#include "magband/weyl_ids.hpp"

#include <string>
#include <vector>

namespace magband {

struct SweepOptions {
    double tau = 0.0;
    Box2D box;                   // comparison window; also the oracle domain
    bool auto_resolution = true; // grow n1/n2 to the resolution guard
    bool with_correction = true;
    IdsOptions ids;
    WeylOptions weyl;
    Oracle2dOptions oracle;
    CorrectionOptions corr;
    int workers = 1;
};

// One (nu, l, mu, h) evaluation: fiber count vs 2D oracle on the shared hard
// window, with the Weyl and correction values carried alongside.
struct SweepRecord {
    int nu = 0, ell = 0;
    double mu = 0.0, h = 0.0, tau = 0.0;
    double fiber = 0.0;
    double weyl = 0.0;
    double correction = 0.0;
    double oracle_lo = 0.0, oracle_hi = 0.0;
    double remainder = 0.0;  // |oracle midpoint - fiber|
    double normalized = 0.0; // remainder * mu^(1/nu) * h, or remainder itself
                             // in the supercritical regime (mu h^nu >= 1)
    double quad_error = 0.0; // fiber budgets + oracle interval half-width
    bool supercritical = false;
    int n1 = 0, n2 = 0;
    bool skipped = false;
    std::string skip_reason;
};

std::vector<SweepRecord> remainder_sweep(const std::vector<ModelParams>& points,
                                         const SweepOptions& opts);

} // namespace magband
