#pragma once

#include "magband/hermite.hpp"
#include "magband/sqrtfield.hpp"

#include <map>
#include <utility>

namespace magband {

// Second-order perturbation data for the bottom-of-band branch: the sharp
// eigenvalue expansion of the recentered, rescaled well operator
//   b_eps = h0 + eps*h1 + eps^2*h2 + O(eps^3),
//   h0 = D^2 + x^2 - (2l+1),
//   h1 = (nu-1)(x^3 - (2l+1)x),
//   h2 = (nu-1)((7nu-11)/12 x^4 - (nu-2)(2l+1)/2 x^2),
// whose eigenvalue near 0 is Lambda_eps = omega2*eps^2 + O(eps^4).
struct PerturbationResult {
    Rational omega2;        // = (nu-1) l (l+1) / 2, verified by the ladder computation
    HermiteVector h1_u0;    // h1 applied to the unperturbed state v_l
    HermiteVector u1;       // first-order state correction
    Rational inner_h0;      // <h0 u1, u1>
    Rational inner_h2;      // <h2 v_l, v_l>
    double kappa = 0.0;     // omega2 * nu^(-2/nu): leading decay coefficient of the band
};

struct DerivativeCoeffs {
    Rational kappa1, kappa2, kappa3; // exact; kappa1 = kappa2 = -kappa3/2
    double kappa4 = 0.0;             // no closed form is asserted; reported numerically
};

// Polynomial coefficient lists (power of x -> rational coefficient).
std::pair<std::map<int, Rational>, std::map<int, Rational>> build_h1_h2(int nu, int ell);

// h0 = D^2 + x^2 - (2l+1) applied through the ladder relations.
HermiteVector apply_h0(const HermiteVector& v, int ell);

// Solves h0 u1 + h1 v_l = 0 on the complement of v_l; u1[l] = 0.
HermiteVector solve_first_order(int nu, int ell);

// (<h0 u1, u1>, <h2 v_l, v_l>), each checked against its closed form.
std::pair<Rational, Rational> intermediate_inner_products(int nu, int ell);

// omega2 computed as <h2 v_l, v_l> - <h0 u1, u1> and checked against
// (nu-1) l (l+1) / 2; throws NumericalFailure carrying both values on mismatch.
Rational omega2(int nu, int ell);

// First-moment coefficients of the eigenvalue with respect to the cubic-well
// shape parameters, at leading order in 1/eta.  The well sits at
// gamma = (nu*eta)^(1/nu); gamma-frame moments <x^2> = <D^2> = (2l+1)/2 pick
// up the chain factor gamma^nu = nu*eta when expressed at fixed eta, so
// kappa1 = kappa2 = nu(2l+1)/2 and kappa3 = -nu(2l+1).  kappa4 multiplies
// eta^(1/nu)*lambda_l in the summed-derivative identity and equals the
// gamma/eta^(1/nu) ratio nu^(1/nu); it is reported, not asserted.
DerivativeCoeffs derivative_coeffs(int nu, int ell);

PerturbationResult perturb_summary(int nu, int ell);

} // namespace magband
