#pragma once

#include "magband/cutoff.hpp"
#include "magband/fiber_ids.hpp"
#include "magband/model.hpp"
#include "magband/weyl_ids.hpp"

#include <vector>

namespace magband {

struct CorrectionOptions {
    double tau = 0.0;
    double half_width = 0.0; // x1 comparison window halfwidth; <= 0 picks 0.35
    IdsOptions ids;          // quadrature budgets (its tau field is ignored)
    WeylOptions weyl;        // stair handling (its tau/cut fields are ignored)
    int workers = 1;
};

struct CorrectionRow {
    double x2 = 0.0;
    double fiber = 0.0;      // inner fiber count density at this x2
    double weyl = 0.0;       // inner pointwise-count density at this x2
    double correction = 0.0; // fiber - weyl
    double error = 0.0;
};

struct CorrectionResult {
    double value = 0.0;        // int psi2(x2) (fiber - weyl)(x2) dx2
    double error_budget = 0.0; // per-row budgets + window-growth check
    double half_width = 0.0;
    double window_growth = 0.0; // |corr(1.4a) - corr(a)| at the x2 midpoint
    std::vector<CorrectionRow> rows;
};

// Finite-size correction to the pointwise-count density: the fiber count over
// a hard x1 window [-a, a] minus the Landau-count integral over the same
// window, per x2, integrated against psi2.  Both sides share tau and the
// window, so the bulk contributions cancel and the window-edge and
// degeneration-zone discrepancies remain.
CorrectionResult correction_term(const ModelParams& params, const Bump1D& psi2,
                                 const CorrectionOptions& opts = {});

} // namespace magband
