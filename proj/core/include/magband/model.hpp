#pragma once

#include "magband/grid.hpp"

#include <array>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace magband {

// Parameters of the two-dimensional family: magnetic well of degeneration
// order nu, Landau index ell, coupling mu, semiclassical parameter h,
// electric potential W(x2), and the polynomial shape parameters of the
// generalized well operator.  sigma/phi are metric-type coefficient profiles
// of x1 with sigma(0) = phi(0) = 1.
struct ModelParams {
    int nu = 2;
    int ell = 0;
    double mu = 1.0;
    double h = 1.0;
    std::function<double(double)> W;            // defaults to 0
    std::array<double, 3> alpha{0.0, 0.0, 0.0};
    std::array<double, 3> beta{0.0, 0.0, 0.0};
    std::function<double(double)> sigma;        // defaults to 1
    std::function<double(double)> phi;          // defaults to 1

    double W_at(double x2) const { return W ? W(x2) : 0.0; }
    double sigma_at(double x1) const { return sigma ? sigma(x1) : 1.0; }
    double phi_at(double x1) const { return phi ? phi(x1) : 1.0; }

    void validate() const;

    // mu * h^nu, the regime classifier (sub-critical versus super-critical).
    double coupling_product() const;
};

struct OperatorMeta {
    double eta = 0.0;
    int nu = 0;
    int ell = 0;
    std::string tag;            // "pilot", "general", "fiber", "well-frame"
    double energy_scale = 1.0;  // physical eigenvalue = energy_scale * matrix eigenvalue + energy_shift
    double energy_shift = 0.0;
    double x_offset = 0.0;      // physical x = x_offset + x_scale * grid x
    double x_scale = 1.0;
};

// Symmetric tridiagonal operator on the interior nodes of a Grid1D.
struct TridiagOperator {
    std::vector<double> diag;
    std::vector<double> offdiag; // size diag.size()-1
    Grid1D grid;
    OperatorMeta meta;

    int n() const { return static_cast<int>(diag.size()); }
    double norm_inf() const;
    void validate() const;
};

// Unit-scale change of variables: x -> x_factor * x carries the unit frame
// to the physical frame, xi2 = eta_factor * eta_unit, and fiber energies
// (before the additive -W/2 shift) are energy_factor * unit energies / 2.
struct ScalingMap {
    double x_factor = 1.0;
    double eta_factor = 1.0;
    double energy_factor = 1.0;

    double to_unit_eta(double xi2) const { return xi2 / eta_factor; }
};

// Effective potentials.
double pilot_veff(int nu, int ell, double eta, double x);
double general_veff(int nu, int ell, double eta,
                    const std::array<double, 3>& alpha,
                    const std::array<double, 3>& beta, double x);
double fiber_veff(const ModelParams& p, double x2, double xi2, double x1);

TridiagOperator build_pilot(int nu, int ell, double eta, const Grid1D& grid);
TridiagOperator build_general(int nu, int ell, double eta,
                              const std::array<double, 3>& alpha,
                              const std::array<double, 3>& beta,
                              const Grid1D& grid);
TridiagOperator build_fiber(const ModelParams& params, double x2, double xi2, const Grid1D& grid);

ScalingMap rescale_to_unit(const ModelParams& params);

// Generic assembly: kinetic * D^2 + V on the grid, second-order central
// differences.  No boundary guard; callers owning a potential apply their own.
TridiagOperator assemble_schrodinger(const std::function<double(double)>& veff,
                                     double kinetic, const Grid1D& grid);

// ---- Solver frames ------------------------------------------------------
//
// For large eta the well sits at gamma = (nu*|eta|)^(1/nu) and the literal
// coordinates become stiff.  The well frame recenters at gamma and rescales
// so the well has unit width; physical eigenvalues are
// energy_scale * (frame eigenvalues).  Valid for the low branches only when
// nu is even (a secondary well at -gamma enters at frame energy ~ 2l+1).
struct PilotFrame {
    std::function<double(double)> veff; // frame potential
    double energy_scale = 1.0;
    double x_offset = 0.0;              // physical x = x_offset + x_scale * frame x
    double x_scale = 1.0;
    bool reflected = false;             // physical x = -(x_offset + x_scale * frame x)
    bool recentered = false;
    // Largest frame energy whose eigenvalues this frame represents faithfully.
    double energy_guard = std::numeric_limits<double>::infinity();
};

// gamma_switch: recenter once gamma >= gamma_switch.  Odd-nu negative eta is
// mapped to |eta| with the reflection recorded.
PilotFrame pilot_frame(int nu, int ell, double eta, double gamma_switch = 12.0);

// Domain for a pilot frame: confining box at energy e_max with padding.
Grid1D pilot_frame_domain(int nu, int ell, double eta, const PilotFrame& frame,
                          double e_max_frame, int n, double pad_lengths = 5.0);

} // namespace magband
