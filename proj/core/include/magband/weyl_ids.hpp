#pragma once

#include "magband/cutoff.hpp"
#include "magband/model.hpp"

#include <vector>

namespace magband {

struct WeylOptions {
    double tau = 0.0;
    double cut_radius = 0.0;   // excise |x1| < cut_radius (0 keeps everything:
                               // the count-times-density integrand stays bounded)
    int x2_panels = 6;
    int max_levels_exact = 64; // beyond this the stair is replaced by its
                               // midline with the half-level width as error
    int workers = 1;
};

struct WeylFieldRow {
    double x1 = 0.0;
    double field = 0.0;  // signed magnetic field b(x1)
    double levels = 0.0; // occupied-level count at (x1, mid supp psi2)
};

struct WeylResult {
    double value = 0.0; // integral of psi * (|b|/(2 pi h)) * occupied-level count
    double error = 0.0; // stair midline + breakpoint-location budget
    // The single-level normalization (mu/(4 pi h)) l_pm int psi |b|/mu, with
    // l_+ = l where W > 0 and l_- = l - 1 where W < 0, floored at 0: counts
    // only the pinned-level multiplicity instead of the full Landau stair.
    // Reported for calibration next to the brute-force count, never asserted;
    // NaN when W changes sign on supp psi2.
    double value_single_level = 0.0;
    double cut_radius = 0.0;
    double cut_mass_bound = 0.0; // integrand mass bound inside the excised disc
    double gamma_bar1 = 0.0;     // reference zone radius (mu h)^(-1/(nu-1))
    double max_levels = 0.0;     // largest occupied count met outside the cut
    std::vector<WeylFieldRow> field;
};

// Pointwise Landau-level count against the frozen constant-field calibration:
// at each x1 the comparison operator has levels
//   E_n = (n + 1/2) h |b(x1)| - (2l+1) mu h sigma phi x1^(nu-1) / 2 - W(x2)/2
// with degeneracy |b(x1)|/(2 pi h) per unit area, b = mu (phi x1^nu / nu)'.
// Integer crossings of the count become exact quadrature breakpoints; where
// the count exceeds max_levels_exact (near x1 = 0) the stair is replaced by
// its midline and the half-level width enters the error budget.
WeylResult weyl_ids(const ModelParams& params, const CutoffSpec& psi,
                    const WeylOptions& opts = {});

// Inner x1 integral at a fixed shifted threshold tau_w = tau + W(x2)/2;
// value/error/cut fields only (no x2 weighting, no single-level constant).
struct WeylInner {
    double value = 0.0;
    double error = 0.0;
    double cut_mass_bound = 0.0;
    double max_levels = 0.0;
};
WeylInner weyl_ids_inner(const ModelParams& params, const Bump1D& psi1,
                         double tau_w, const WeylOptions& opts = {});

} // namespace magband
