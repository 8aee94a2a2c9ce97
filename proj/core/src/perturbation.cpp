#include "magband/perturbation.hpp"

#include "magband/errors.hpp"

#include <cmath>
#include <sstream>

namespace magband {

namespace {

void check_params(int nu, int ell) {
    if (nu < 2) throw InvalidInput("perturbation: nu must be >= 2");
    if (ell < 0) throw InvalidInput("perturbation: ell must be >= 0");
}

[[noreturn]] void discrepancy(const char* what, const Rational& computed, const Rational& closed) {
    std::ostringstream os;
    os << what << ": ladder computation gives " << computed
       << " but the closed form gives " << closed;
    throw NumericalFailure(os.str());
}

Rational exact_rational(const SqrtField& v, const char* what) {
    if (!v.is_rational())
        throw NumericalFailure(std::string(what) + ": expected rational, got " + v.str());
    return v.rational_part();
}

} // namespace

std::pair<std::map<int, Rational>, std::map<int, Rational>> build_h1_h2(int nu, int ell) {
    check_params(nu, ell);
    const Rational m(nu - 1);
    const Rational tl(2 * ell + 1);
    std::map<int, Rational> h1{{3, m}, {1, -m * tl}};
    std::map<int, Rational> h2{{4, m * Rational(7 * nu - 11, 12)},
                               {2, -m * Rational(nu - 2, 2) * tl}};
    return {h1, h2};
}

HermiteVector apply_h0(const HermiteVector& v, int ell) {
    HermiteVector out = v.apply_D2();
    out += v.apply_x().apply_x();
    out -= v.scaled(SqrtField(Rational(2 * ell + 1)));
    return out;
}

HermiteVector solve_first_order(int nu, int ell) {
    check_params(nu, ell);
    auto [h1, h2] = build_h1_h2(nu, ell);
    (void)h2;
    HermiteVector w = apply_x_polynomial(HermiteVector::basis(ell), h1);

    if (!w.coeff(ell).is_zero())
        throw NumericalFailure("solve_first_order: <h1 v_l, v_l> != 0, first-order equation unsolvable");

    // h0 is diagonal with entries 2(k-l), so the complement solve is componentwise.
    HermiteVector u1;
    for (const auto& [k, c] : w.coeffs()) {
        if (k == ell) continue;
        // Division keeps the sign in the numerator; a negative-denominator
        // Rational(p, q) construction is rejected by this backend.
        u1.set_coeff(k, c * SqrtField(Rational(-1) / Rational(2 * (k - ell))));
    }
    return u1;
}

std::pair<Rational, Rational> intermediate_inner_products(int nu, int ell) {
    check_params(nu, ell);
    auto [h1, h2] = build_h1_h2(nu, ell);
    (void)h1;
    const HermiteVector u0 = HermiteVector::basis(ell);
    const HermiteVector u1 = solve_first_order(nu, ell);

    Rational inner_h0 = exact_rational(inner(apply_h0(u1, ell), u1), "<h0 u1, u1>");
    Rational inner_h2 = exact_rational(inner(apply_x_polynomial(u0, h2), u0), "<h2 u0, u0>");

    const Rational m(nu - 1);
    const Rational l(ell);
    Rational closed_h0 = Rational(1, 16) * m * m * (-2 * l * l - 2 * l + 3);
    Rational closed_h2 = m * Rational(7 * nu - 11, 16) * (2 * l * l + 2 * l + 1)
                       - Rational(nu - 2, 4) * m * (2 * l + 1) * (2 * l + 1);

    if (inner_h0 != closed_h0) discrepancy("<h0 u1, u1>", inner_h0, closed_h0);
    if (inner_h2 != closed_h2) discrepancy("<h2 u0, u0>", inner_h2, closed_h2);
    return {inner_h0, inner_h2};
}

Rational omega2(int nu, int ell) {
    auto [inner_h0, inner_h2] = intermediate_inner_products(nu, ell);
    Rational value = inner_h2 - inner_h0;
    Rational closed = Rational(nu - 1) * Rational(ell) * Rational(ell + 1) / 2;
    if (value != closed) discrepancy("omega2", value, closed);
    return value;
}

DerivativeCoeffs derivative_coeffs(int nu, int ell) {
    check_params(nu, ell);
    const HermiteVector u0 = HermiteVector::basis(ell);

    Rational mx2 = exact_rational(inner(u0.apply_x().apply_x(), u0), "<x^2 v_l, v_l>");
    Rational md2 = exact_rational(inner(u0.apply_D2(), u0), "<D^2 v_l, v_l>");
    Rational expected(2 * ell + 1, 2);
    if (mx2 != expected) discrepancy("<x^2 v_l, v_l>", mx2, expected);
    if (md2 != expected) discrepancy("<D^2 v_l, v_l>", md2, expected);

    DerivativeCoeffs out;
    out.kappa1 = Rational(nu) * md2;
    out.kappa2 = Rational(nu) * mx2;
    out.kappa3 = -Rational(nu) * Rational(2 * ell + 1);
    if (!(out.kappa1 == out.kappa2 && out.kappa1 == -out.kappa3 / 2))
        throw NumericalFailure("derivative_coeffs: kappa1 = kappa2 = -kappa3/2 failed");
    out.kappa4 = std::pow(static_cast<double>(nu), 1.0 / nu);
    return out;
}

PerturbationResult perturb_summary(int nu, int ell) {
    check_params(nu, ell);
    PerturbationResult r;
    auto [h1, h2] = build_h1_h2(nu, ell);
    (void)h2;
    r.h1_u0 = apply_x_polynomial(HermiteVector::basis(ell), h1);
    r.u1 = solve_first_order(nu, ell);
    auto [inner_h0, inner_h2] = intermediate_inner_products(nu, ell);
    r.inner_h0 = inner_h0;
    r.inner_h2 = inner_h2;
    r.omega2 = omega2(nu, ell);
    r.kappa = r.omega2.convert_to<double>() * std::pow(static_cast<double>(nu), -2.0 / nu);
    return r;
}

} // namespace magband
