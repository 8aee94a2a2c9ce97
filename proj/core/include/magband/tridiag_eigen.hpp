#pragma once

#include "magband/grid.hpp"
#include "magband/model.hpp"

#include <functional>
#include <vector>

namespace magband {

struct EigenResult {
    std::vector<double> values;          // strictly increasing
    std::vector<double> error_estimates; // >= 0, same length
    Grid1D grid_used;
    std::vector<double> residual_norms;  // filled only when vectors were computed
    bool tie_flag = false;               // two values within tolerance: under-resolved
};

// Exact count of eigenvalues strictly below tau (Sturm sequence).  The
// recurrence is clamped at |q| = 1e150 and tiny pivots are treated as
// negative, so an eigenvalue exactly at tau counts as below.
int inertia_below(const TridiagOperator& op, double tau);

// k smallest eigenvalues by Sturm bisection; each bracket is narrowed to
// width max(rtol, 1e-13) * max(1, |lambda|).  error_estimates = half-widths.
EigenResult eigen_lowest_k(const TridiagOperator& op, int k, double rtol);

// Unit-norm eigenvector by inverse iteration (at most 5 steps), optionally
// reorthogonalized against previously extracted vectors of nearby values.
// Throws NumericalFailure if the residual fails to reach 100*rtol*|A|.
std::vector<double> eigenvector(const TridiagOperator& op, double lambda,
                                double rtol = 1e-10,
                                const std::vector<std::vector<double>>& prior = {});

// ||(A - lambda) v||_2 for a unit vector v.
double residual_norm(const TridiagOperator& op, double lambda, const std::vector<double>& v);

// Two-grid Richardson extrapolation for a second-order discretization:
// lambda* = (4 lambda_fine - lambda_coarse) / 3, error = |diff| / 3.
// Requires fine to halve the spacing of coarse (n_fine = 2 n_coarse + 1).
EigenResult refine_richardson(const std::function<TridiagOperator(const Grid1D&)>& build,
                              int k, const Grid1D& coarse, const Grid1D& fine, double rtol);

} // namespace magband
