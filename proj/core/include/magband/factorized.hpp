#pragma once

#include "magband/grid.hpp"

#include <functional>
#include <vector>

namespace magband {

// Ground state of the factorized family  hbar^2 D^2 + g(x)^2 + hbar g'(x)
// = L* L with L = -hbar d/dx + g, computed as sigma_min(B)^2 of a cell-
// centered bidiagonal discretization of L.  B is reduced by Givens
// rotations to upper bidiagonal R whose entries carry only relative
// rounding error, and sigma_min comes from inverse iteration on R^T R with
// per-stage normalization: at the converged right singular vector the
// forward and back substitutions each have norm 1/sigma, so
// lambda = 1/(|y| |z|) with cancellation-free norms.  That keeps lambda
// accurate in relative terms down to ~1e-290 per double-range stage, far
// below the absolute floor of Sturm bisection on L*L.
struct FactorizedGround {
    double lambda = 0.0;          // sigma_min^2
    std::vector<double> vec;      // unit right singular vector on grid nodes
    int iterations = 0;
};

FactorizedGround ground_factorized(const std::function<double(double)>& g,
                                   double hbar, const Grid1D& grid);

// Richardson pair over (n, 2n+1) grids.  The discrete growth factor per
// cell is exp(g dx + O((g dx)^3)), so the leading error is multiplicative
// and the extrapolation acts on log(lambda):
// value = lf exp((ln lf - ln lc)/3), error = value expm1(|ln lf - ln lc|/3).
struct RefinedValue {
    double value = 0.0;
    double error = 0.0;
};

RefinedValue ground_factorized_refined(const std::function<double(double)>& g,
                                       double hbar, const Grid1D& coarse);

// Number of singular values of the discretized factor L below thresh,
// via the Sturm count on the Golub-Kahan permutation of [[0, B^T],[B, 0]]
// (zero diagonal, the bidiagonal entries as offdiagonals).  No entry is
// squared, so the count is exact for a componentwise relative perturbation
// of B and stays trustworthy arbitrarily far below the matrix scale, even
// where 1/sigma overflows and the inverse iteration above must refuse.
int ground_factorized_count_below(const std::function<double(double)>& g,
                                  double hbar, const Grid1D& grid, double thresh);

} // namespace magband
