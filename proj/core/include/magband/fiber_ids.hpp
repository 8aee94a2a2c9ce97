#pragma once

#include "magband/bands.hpp"
#include "magband/cutoff.hpp"
#include "magband/model.hpp"

#include <limits>
#include <memory>
#include <vector>

namespace magband {

struct IdsOptions {
    double tau = 0.0;
    int n_branch_cap = 12;     // refuse if more branches stay active
    double rel_tol = 1e-6;     // adaptive quadrature target (relative)
    double abs_tol = 1e-9;
    int x2_panels = 6;         // composite Gauss panels on supp psi2
    int scan_points = 161;     // breakpoint scan resolution in eta
    int subdiv_budget = 4000;  // adaptive interval splits per inner integral
    SolveOptions solve;
    int workers = 1;
};

struct IdsResult {
    double value = 0.0;       // (2 pi h)^-1 weighted phase-space count
    double quad_error = 0.0;  // quadrature + breakpoint + weight-resolution budget
    double tail_bound = 0.0;  // mass estimate beyond the eta window
    double edge_budget = 0.0; // cutoff transition-zone state count
    int n_branches = 0;
    double eta_lo = 0.0, eta_hi = 0.0; // unit-scale integration window
    long long solver_points = 0;       // distinct band-table entries computed
};

// (2 pi h)^-1 \int\int sum_n 1{Lambda_n(x2, xi2) < tau} w_n(x2, xi2) dxi2 dx2,
// with w_n the psi1-mass of the fiber eigenvector and psi2 weighting x2.
// Branch-crossing locations become mandatory quadrature breakpoints; between
// them the integrand is smooth and the adaptive rule converges.
IdsResult fiber_ids(const ModelParams& params, const CutoffSpec& psi,
                    const IdsOptions& opts = {});

// Variant reusing a caller-provided band table (window/branch count already
// fixed); used by sweeps to share solver work across tau values.
IdsResult fiber_ids_with_table(const BandTable& table, const ModelParams& params,
                               const CutoffSpec& psi, const IdsOptions& opts);

// Smallest branch count whose top member stays above the active threshold on
// the whole window (higher branches are inactive by eigenvalue ordering);
// used to size shared band tables.
int fiber_active_branches(const ModelParams& params, const CutoffSpec& psi,
                          const IdsOptions& opts = {});

// Inner phase-space count at fixed x2, i.e. at fixed shifted threshold
// tau_w = tau + W(x2)/2 against the table's psi1:
//   (2 pi h)^-1 int sum_n 1{lambda_n(xi2) < tau_w} w_n(xi2) dxi2.
struct InnerIds {
    double value = 0.0;
    double quad_error = 0.0;
    double tail_bound = 0.0;
    double edge_budget = 0.0;
    double eta_lo = 0.0, eta_hi = 0.0;
};
// tau_plan, when finite, fixes the integration window as if the threshold
// were that value; callers sweeping many tau_w against one table pass their
// common ceiling so every sweep point shares one scan grid (and thus the
// table cache).  The window stays valid for any tau_w <= tau_plan.
InnerIds fiber_ids_inner(const BandTable& table, const ModelParams& params,
                         double tau_w, const IdsOptions& opts,
                         double tau_plan = std::numeric_limits<double>::quiet_NaN());

} // namespace magband
