#pragma once

#include "magband/banded.hpp"
#include "magband/cutoff.hpp"
#include "magband/model.hpp"

#include <complex>
#include <utility>

namespace magband {

// Dirichlet box with n1 x n2 interior points, x1 fastest in memory.
struct Box2D {
    double x1_lo = -0.5, x1_hi = 0.5;
    double x2_lo = -0.5, x2_hi = 0.5;
    int n1 = 0, n2 = 0;

    double dx1() const { return (x1_hi - x1_lo) / (n1 + 1); }
    double dx2() const { return (x2_hi - x2_lo) / (n2 + 1); }
    double x1(int i) const { return x1_lo + (i + 1) * dx1(); }
    double x2(int j) const { return x2_lo + (j + 1) * dx2(); }
    long long cells() const { return static_cast<long long>(n1) * n2; }
    void validate(long long cell_cap = 250000) const;
};

struct Oracle2dOptions {
    double tau = 0.0;
    double delta = 0.0; // interval half-width around tau; <= 0 picks an
                        // operator-scale multiple of machine epsilon
    long long cell_cap = 250000;
    long long memory_cap_bytes = 1500000000;
    int dense_cap = 6000;        // dense eigenpair path dimension limit
    bool check_resolution = true; // refuse under-resolved grids
    bool gauge_center = true;     // subtract the midrange of the vector
                                  // potential (unitary in the Dirichlet box,
                                  // halves the oscillation rate to resolve)
};

// 5-point discretization of
//   (1/2) (h^2 D1^2 + (h D2 - a(x1))^2 - (2l+1) mu h sigma phi x1^(nu-1) - W(x2))
// with a(x1) = mu phi(x1) x1^nu / nu and the first-order cross term centered;
// complex Hermitian by construction, lower band stored, bandwidth n1.
BandedHermitian<std::complex<double>> build_2d(const ModelParams& params,
                                               const Box2D& box,
                                               const Oracle2dOptions& opts = {});

// Eigenvalue count below tau as an interval: factorizations at tau -+ delta
// widened by the perturbed-pivot ambiguity on each side.
struct CountInterval {
    long long lo = 0, hi = 0;
    long long at_tau = 0; // plain inertia at tau itself
    int perturbed = 0;    // pivots inside the perturbation floor at tau
};
CountInterval count_below_2d(const BandedHermitian<std::complex<double>>& A,
                             double tau, double delta = 0.0);

struct OracleIdsResult {
    double value = 0.0;       // sum over lambda_k < tau of <psi v_k, v_k>
    double count_gap = 0.0;   // interval width when the count path was taken
    CountInterval count;
    long long dim = 0;
    bool dense_path = false;
};

// psi-weighted spectral count on the box: the exact-count path when psi is 1
// at every grid point, otherwise dense eigenpairs (dimension <= dense_cap).
OracleIdsResult oracle_ids(const ModelParams& params, const CutoffSpec& psi,
                           const Box2D& box, const Oracle2dOptions& opts = {});

// Smallest (n1, n2) meeting the resolution guard (8 grid points per shortest
// local wavelength) for this box; used by sweeps to size grids per point.
std::pair<int, int> required_grid(const ModelParams& params, const Box2D& box);

} // namespace magband
