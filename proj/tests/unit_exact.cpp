#include "doctest.h"

#include "magband/hermite.hpp"
#include "magband/perturbation.hpp"
#include "magband/sqrtfield.hpp"

#include <cmath>

using namespace magband;

TEST_CASE("squarefree split strips square factors") {
    CHECK(squarefree_split(1) == std::pair<std::int64_t, std::int64_t>{1, 1});
    CHECK(squarefree_split(12) == std::pair<std::int64_t, std::int64_t>{2, 3});
    CHECK(squarefree_split(49) == std::pair<std::int64_t, std::int64_t>{7, 1});
    CHECK(squarefree_split(360) == std::pair<std::int64_t, std::int64_t>{6, 10});
}

TEST_CASE("sqrt field arithmetic is exact and closed") {
    SqrtField r2 = SqrtField::sqrt_of(2);
    SqrtField r8 = SqrtField::sqrt_of(8);
    CHECK(r8 == r2 * SqrtField(2)); // sqrt(8) reduces to 2 sqrt(2)

    SqrtField a = SqrtField(1) + r2;
    SqrtField b = SqrtField(1) - r2;
    SqrtField prod = a * b;
    REQUIRE(prod.is_rational());
    CHECK(prod.rational_part() == Rational(-1)); // (1+s)(1-s) = 1 - 2

    CHECK(SqrtField::sqrt_of(2) * SqrtField::sqrt_of(3) == SqrtField::sqrt_of(6));
    CHECK(SqrtField::sqrt_of(12) * SqrtField::sqrt_of(3) == SqrtField(6));

    SqrtField z = a - a;
    CHECK(z.is_zero());
    CHECK((-a + a).is_zero());
    CHECK(std::abs(a.to_double() - (1.0 + std::sqrt(2.0))) < 1e-15);
    CHECK_FALSE(a.str().empty());
}

TEST_CASE("ladder relations move basis states one step") {
    // x v_k = (sqrt(2k+2) v_{k+1} + sqrt(2k) v_{k-1}) / 2 in this basis.
    HermiteVector v3 = HermiteVector::basis(3);
    HermiteVector xv = v3.apply_x();
    CHECK(inner(xv, HermiteVector::basis(4)) == SqrtField::sqrt_of(8, Rational(1, 2)));
    CHECK(inner(xv, HermiteVector::basis(2)) == SqrtField::sqrt_of(6, Rational(1, 2)));
    CHECK(inner(xv, v3).is_zero());

    HermiteVector v0 = HermiteVector::basis(0);
    CHECK(inner(v0.apply_x(), HermiteVector::basis(1)) ==
          SqrtField::sqrt_of(2, Rational(1, 2)));

    // Number operator: (D^2 + x^2) v_k = (2k+1) v_k.
    for (int k : {0, 1, 4}) {
        HermiteVector vk = HermiteVector::basis(k);
        HermiteVector hv = vk.apply_D2() + vk.apply_x().apply_x();
        CHECK(hv == vk.scaled(SqrtField(2 * k + 1)));
    }
}

TEST_CASE("basis states are orthonormal under the exact inner product") {
    CHECK(inner(HermiteVector::basis(2), HermiteVector::basis(2)) == SqrtField(1));
    CHECK(inner(HermiteVector::basis(2), HermiteVector::basis(3)).is_zero());
}

TEST_CASE("ladder words compose left to right") {
    HermiteVector v = HermiteVector::basis(1);
    HermiteVector direct = v.apply_x().apply_x();
    CHECK(ladder_apply(v, {LadderSymbol::X, LadderSymbol::X}) == direct);
    CHECK(ladder_apply(v, {LadderSymbol::D, LadderSymbol::D}) == v.apply_D2());
}

TEST_CASE("polynomial application matches repeated ladder steps") {
    HermiteVector v = HermiteVector::basis(2);
    std::map<int, Rational> poly{{0, Rational(3)}, {2, Rational(1, 2)}};
    HermiteVector expect = v.scaled(SqrtField(3)) +
                           v.apply_x().apply_x().scaled(SqrtField(Rational(1, 2)));
    CHECK(apply_x_polynomial(v, poly) == expect);
}

TEST_CASE("shifted oscillator acts diagonally") {
    // h0 = D^2 + x^2 - (2l+1) has eigenvalue 2(k-l) on basis k.
    for (int ell : {0, 2}) {
        for (int k : {0, 1, 3, 6}) {
            HermiteVector vk = HermiteVector::basis(k);
            CHECK(apply_h0(vk, ell) == vk.scaled(SqrtField(2 * (k - ell))));
        }
    }
}

TEST_CASE("second order eigenvalue coefficient matches its closed form") {
    for (int nu = 2; nu <= 6; ++nu)
        for (int ell = 0; ell <= 3; ++ell)
            CHECK(omega2(nu, ell) == Rational((nu - 1) * ell * (ell + 1)) / 2);
}

TEST_CASE("first order correction solves its defining equation exactly") {
    for (int nu : {2, 3, 5}) {
        for (int ell : {0, 1, 3}) {
            HermiteVector u1 = solve_first_order(nu, ell);
            CHECK(u1.coeff(ell).is_zero()); // gauge: no component along v_l

            auto [h1, h2] = build_h1_h2(nu, ell);
            HermiteVector rhs = apply_x_polynomial(HermiteVector::basis(ell), h1);
            CHECK(inner(rhs, HermiteVector::basis(ell)).is_zero()); // odd polynomial
            CHECK((apply_h0(u1, ell) + rhs).is_zero());
        }
    }
}

TEST_CASE("perturbation summary is internally consistent") {
    // Regression: construction must survive basis indices below ell, where the
    // resolvent denominators are negative.
    for (int nu = 2; nu <= 6; ++nu) {
        for (int ell = 0; ell <= 3; ++ell) {
            PerturbationResult res;
            REQUIRE_NOTHROW(res = perturb_summary(nu, ell));
            CHECK(res.omega2 == res.inner_h2 - res.inner_h0);
            double om = static_cast<double>(res.omega2);
            CHECK(res.kappa == doctest::Approx(om * std::pow(nu, -2.0 / nu)).epsilon(1e-12));
        }
    }
}

TEST_CASE("well shape derivative coefficients") {
    for (int nu : {2, 4, 5}) {
        for (int ell : {0, 2}) {
            DerivativeCoeffs dc = derivative_coeffs(nu, ell);
            CHECK(dc.kappa1 == dc.kappa2);
            CHECK(dc.kappa1 == Rational(nu * (2 * ell + 1)) / 2);
            CHECK(dc.kappa3 == Rational(-nu * (2 * ell + 1)));
            CHECK(dc.kappa4 == doctest::Approx(std::pow(nu, 1.0 / nu)).epsilon(1e-6));
        }
    }
}
