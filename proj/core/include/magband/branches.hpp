#pragma once

#include "magband/grid.hpp"
#include "magband/model.hpp"

#include <string>
#include <vector>

namespace magband {

struct SolveOptions {
    double rtol = 1e-10;       // eigenvalue bisection tolerance
    double target_rel = 1e-3;  // requested relative accuracy after Richardson
    int n_min = 400;
    int n_max = 24000;
    double gamma_switch = 12.0; // move to the recentered frame beyond this well distance
    double pad_lengths = 5.0;
};

struct PointSolve {
    std::vector<double> values; // eigenvalues of the unit-scale operator at eta
    std::vector<double> errors;
    bool recentered = false;
    bool factorized_bottom = false;
    int grid_n = 0; // fine-grid size of the accepted solve

    // Filled only when vectors were requested: unit eigenvectors on the
    // coarse solve grid (frame coordinates); to_physical maps a frame
    // coordinate back to the unit-scale operator coordinate.
    Grid1D domain{0.0, 1.0, 3};
    std::vector<std::vector<double>> vectors;
    double x_offset = 0.0, x_scale = 1.0;
    bool reflected = false;
    double to_physical(double z) const {
        double x = x_offset + x_scale * z;
        return reflected ? -x : x;
    }
};

struct EigenBranch {
    int nu = 2, ell = 0;
    std::vector<double> eta_grid;
    std::vector<std::vector<double>> values; // [branch][i_eta], columns strictly increasing
    std::vector<std::vector<double>> errors;
    int n_branches() const { return static_cast<int>(values.size()); }
};

struct PowerLawFit {
    double coefficient = 0.0;
    double exponent = 0.0;
    double eta_lo = 0.0, eta_hi = 0.0;
    double max_relative_residual = 0.0;
    int points = 0;
};

struct DecayFit {
    PowerLawFit fit;         // -log(value) ~ coefficient * eta^exponent
    double slope_ratio_min = 0.0; // of (-d log(value)/d eta) / eta^(1/nu)
    double slope_ratio_max = 0.0;
    int derivative_points = 0;
};

struct ZeroCrossing {
    double eta_bar = 0.0;
    int branch = 0;
    int order_r = 1;
    double alpha_local = 0.0;
    double rounding_gap = 0.0; // |fitted slope - order_r|
    bool ambiguous = false;    // rounding_gap > 0.2
};

struct SpacingRow {
    double eta = 0.0;
    int n = 0;              // gap between branches n and n+1
    double gap = 0.0;
    double normalized = 0.0; // gap / (1+|eta|)^((nu-1)/nu)
};

// Lowest-branch evaluator for the unit-scale operator family
//   D^2 + (eta - x^nu/nu)^2 - (2l+1) x^(nu-1),
// choosing a literal or recentered solve frame per eta, with two-grid
// Richardson refinement and an energy-budget retry loop.  For l = 0 the
// bottom branch is replaced by the factorized ground value, which stays
// accurate in relative terms when it is exponentially small.
class BranchTracer {
public:
    BranchTracer(int nu, int ell, int n_branches, SolveOptions opts = {});

    PointSolve solve(double eta, bool with_vectors = false) const;
    double value(double eta, int branch) const { return solve(eta).values[branch]; }
    EigenBranch trace(const std::vector<double>& eta_grid, int workers = 1) const;

    int nu() const { return nu_; }
    int ell() const { return ell_; }
    int n_branches() const { return nb_; }
    const SolveOptions& options() const { return opts_; }

private:
    int nu_, ell_, nb_;
    SolveOptions opts_;
};

std::vector<double> eta_grid_uniform(double lo, double hi, int n);
std::vector<double> eta_grid_geometric(double lo, double hi, int n); // lo, hi > 0

std::vector<SpacingRow> spacing_stats(const EigenBranch& branch);

// Least squares of log(value) vs log(eta) for one branch over a window;
// requires positive branch values there.
PowerLawFit fit_power_law(const EigenBranch& branch, int n, double eta_lo, double eta_hi);

// Fit -log(value) ~ k2 * eta^p on the representable window (positive,
// below 0.5, and resolved in relative terms by the per-point error
// estimate) and check the log-derivative against eta^(1/nu).
DecayFit fit_exponential_decay(const EigenBranch& branch, int n, double eta_lo, double eta_hi);

// Sign changes per branch located by bisection, with the local vanishing
// order fitted from a log-log slope just off the crossing.  Branches that
// are zero to solver tolerance on the whole grid are excluded.
std::vector<ZeroCrossing> detect_zeros(const BranchTracer& tracer, const EigenBranch& branch);

// Smallest |eta_bar_i - eta_bar_j| over crossings of distinct branches
// (infinity when fewer than two branches cross).
double min_crossing_separation(const std::vector<ZeroCrossing>& crossings);

// Indices i where |lambda(eta_{i+1}) - lambda(eta_i)| exceeds the
// eta-derivative bound 2 max|eta - x^nu/nu| estimated on the classically
// allowed region; nonempty output flags an under-resolved grid.
std::vector<std::size_t> continuity_violations(const EigenBranch& branch, int n);

// Explicit bottom zero mode exp(eta x - x^(nu+1)/(nu(nu+1))) for odd nu at
// l = 0: discrete residual of the assembled operator against it, with the
// a-priori bound (dx^2/12) ||v''''|| plus boundary truncation terms.
struct ZeroModeCheck {
    double residual = 0.0;
    double bound = 0.0;
    Grid1D grid;
};
ZeroModeCheck zero_mode_residual(int nu, double eta, const Grid1D& grid);

} // namespace magband
