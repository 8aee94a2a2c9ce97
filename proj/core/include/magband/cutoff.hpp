#pragma once

#include <utility>
#include <vector>

namespace magband {

// C^2 plateau bump: 0 outside [lo, hi], 1 on [lo+edge, hi-edge], quintic
// smoothstep flanks.  edge = 0 degenerates to the hard indicator of [lo, hi]
// (used for oracle-comparison windows, where the 2D box is the cutoff).
struct Bump1D {
    double lo = -0.5;
    double hi = 0.5;
    double edge = 0.15;

    double operator()(double x) const;
    bool is_smooth() const { return edge > 0.0; }
    double support_length() const { return hi - lo; }
    void validate() const;
};

struct CutoffSpec {
    Bump1D psi1; // x1 factor
    Bump1D psi2; // x2 factor

    double operator()(double x1, double x2) const { return psi1(x1) * psi2(x2); }
    void validate() const;

    // Smooth product bump supported inside (-1/2, 1/2)^2.
    static CutoffSpec standard();
    // Hard indicator of a rectangle (oracle-comparison mode).
    static CutoffSpec window(double x1_lo, double x1_hi, double x2_lo, double x2_hi);
};

// Quadrature panels over supp(bump) whose edges align with the flank knots,
// so each panel sees a single polynomial piece; at least min_panels total.
std::vector<std::pair<double, double>> bump_panels(const Bump1D& bump, int min_panels);

// Appends the 8-point Gauss-Legendre rule for [a, b] to (xs, ws).
void gauss8_append(double a, double b, std::vector<double>& xs, std::vector<double>& ws);

} // namespace magband
