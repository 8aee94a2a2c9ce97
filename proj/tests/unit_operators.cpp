#include "doctest.h"

#include "magband/banded.hpp"
#include "magband/cutoff.hpp"
#include "magband/errors.hpp"
#include "magband/grid.hpp"
#include "magband/model.hpp"
#include "magband/tridiag_eigen.hpp"

#include <cmath>
#include <complex>
#include <vector>

using namespace magband;

TEST_CASE("grid exposes interior nodes with Dirichlet ends") {
    Grid1D g{-1.0, 1.0, 3};
    CHECK(g.spacing() == doctest::Approx(0.5));
    CHECK(g.point(0) == doctest::Approx(-0.5));
    CHECK(g.point(2) == doctest::Approx(0.5));
    CHECK(g.points().size() == 3);
    CHECK_THROWS_AS((Grid1D{0.0, 1.0, 2}.validate()), InvalidInput);
    CHECK_THROWS_AS((Grid1D{1.0, 1.0, 10}.validate()), InvalidInput);
}

TEST_CASE("auto domain brackets the allowed region and pads it") {
    auto veff = [](double x) { return x * x; };
    Grid1D g = auto_domain(veff, {0.0}, 9.0, 200);
    CHECK(g.x_min < -3.0);
    CHECK(g.x_max > 3.0);
    CHECK(g.x_max - g.x_min < 30.0);
    CHECK(g.n == 200);
}

TEST_CASE("oscillator spectrum from assembly plus Sturm bisection") {
    auto veff = [](double x) { return x * x; };
    Grid1D g{-8.0, 8.0, 1600};
    TridiagOperator op = assemble_schrodinger(veff, 1.0, g);
    op.validate();

    EigenResult res = eigen_lowest_k(op, 3, 1e-11);
    REQUIRE(res.values.size() == 3);
    CHECK(res.values[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(res.values[1] == doctest::Approx(3.0).epsilon(1e-4));
    CHECK(res.values[2] == doctest::Approx(5.0).epsilon(1e-4));
    CHECK(res.values[0] < res.values[1]);
    CHECK_FALSE(res.tie_flag);

    // Inertia agrees with the extracted values on both sides of a gap.
    CHECK(inertia_below(op, 0.5) == 0);
    CHECK(inertia_below(op, 2.0) == 1);
    CHECK(inertia_below(op, 6.0) == 3);

    std::vector<double> v = eigenvector(op, res.values[0]);
    double nrm = 0.0;
    for (double x : v) nrm += x * x;
    CHECK(std::sqrt(nrm) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(residual_norm(op, res.values[0], v) < 1e-6 * op.norm_inf());
}

TEST_CASE("richardson refinement bounds its own error") {
    auto build = [](const Grid1D& g) {
        return assemble_schrodinger([](double x) { return x * x; }, 1.0, g);
    };
    Grid1D coarse{-8.0, 8.0, 400};
    Grid1D fine{-8.0, 8.0, 801};
    EigenResult res = refine_richardson(build, 2, coarse, fine, 1e-12);
    REQUIRE(res.values.size() == 2);
    CHECK(std::abs(res.values[0] - 1.0) <= res.error_estimates[0] + 1e-9);
    CHECK(std::abs(res.values[1] - 3.0) <= res.error_estimates[1] + 1e-9);
    CHECK(res.error_estimates[0] < 1e-4);
}

TEST_CASE("pilot assembly matches the closed effective potential") {
    int nu = 2, ell = 1;
    double eta = 0.7;
    Grid1D g{-4.0, 4.0, 57};
    TridiagOperator op = build_pilot(nu, ell, eta, g);
    double dx2 = g.spacing() * g.spacing();
    for (int i : {0, 10, 42}) {
        double x = g.point(i);
        double v = (eta - x * x / 2) * (eta - x * x / 2) - 3 * x; // (2l+1) = 3
        CHECK(pilot_veff(nu, ell, eta, x) == doctest::Approx(v).epsilon(1e-14));
        CHECK(op.diag[i] == doctest::Approx(2.0 / dx2 + v).epsilon(1e-14));
    }
    CHECK(op.offdiag[5] == doctest::Approx(-1.0 / dx2).epsilon(1e-14));

    // Zero shape parameters reduce the general family to the pilot.
    TridiagOperator gen = build_general(nu, ell, eta, {0, 0, 0}, {0, 0, 0}, g);
    for (int i = 0; i < op.n(); ++i)
        CHECK(gen.diag[i] == doctest::Approx(op.diag[i]).epsilon(1e-14));
}

TEST_CASE("solver frames keep the physical map invertible") {
    PilotFrame lit = pilot_frame(2, 0, 1.0);
    CHECK_FALSE(lit.recentered);
    CHECK(lit.x_scale == 1.0);

    PilotFrame rec = pilot_frame(2, 0, 100.0); // gamma = sqrt(200) > 12
    CHECK(rec.recentered);
    CHECK(rec.energy_scale > 0.0);
    double gamma = std::sqrt(200.0);
    CHECK(rec.x_offset == doctest::Approx(gamma).epsilon(1e-12));

    PilotFrame refl = pilot_frame(3, 0, -5.0);
    CHECK(refl.reflected); // odd order solves at |eta| and mirrors back
}

TEST_CASE("model validation enforces the parameter domain") {
    ModelParams p;
    CHECK_NOTHROW(p.validate());
    p.nu = 1;
    CHECK_THROWS_AS(p.validate(), InvalidInput);
    p.nu = 2;
    p.ell = -1;
    CHECK_THROWS_AS(p.validate(), InvalidInput);
    p.ell = 0;
    p.h = 1.5;
    CHECK_THROWS_AS(p.validate(), InvalidInput);
    p.h = 0.5;
    p.mu = 0.0;
    CHECK_THROWS_AS(p.validate(), InvalidInput);
    p.mu = 8.0;
    p.nu = 3;
    CHECK(p.coupling_product() == doctest::Approx(1.0));
}

TEST_CASE("plateau bump is a smooth partition factor") {
    Bump1D b{-1.0, 1.0, 0.25};
    b.validate();
    CHECK(b(-1.0) == 0.0);
    CHECK(b(1.0) == 0.0);
    CHECK(b(-2.0) == 0.0);
    CHECK(b(-0.75) == doctest::Approx(1.0));
    CHECK(b(0.0) == 1.0);
    for (double x = -1.2; x <= 1.2; x += 0.01) {
        CHECK(b(x) >= 0.0);
        CHECK(b(x) <= 1.0);
    }
    // Quintic flanks: the first derivative vanishes at the knots.  The
    // centered difference straddles a piece boundary, so it sees the
    // one-sided third derivative at order hstep^2.
    double hstep = 1e-4;
    for (double knot : {-1.0, -0.75, 0.75, 1.0}) {
        double deriv = (b(knot + hstep) - b(knot - hstep)) / (2 * hstep);
        CHECK(std::abs(deriv) < 1e-5);
    }
    // Flanks increase monotonically.
    CHECK(b(-0.95) > b(-0.99));
    CHECK(b(-0.80) > b(-0.90));

    CHECK_THROWS_AS((Bump1D{1.0, -1.0, 0.1}.validate()), InvalidInput);
    CHECK_THROWS_AS((Bump1D{-1.0, 1.0, 1.5}.validate()), InvalidInput);
}

TEST_CASE("zero edge width degenerates to the hard window") {
    Bump1D w{-0.5, 0.5, 0.0};
    CHECK_FALSE(w.is_smooth());
    CHECK(w(0.0) == 1.0);
    CHECK(w(0.4999) == 1.0);
    CHECK(w(0.6) == 0.0);
    CutoffSpec cs = CutoffSpec::window(-1, 1, -2, 2);
    CHECK(cs(0.9, -1.9) == 1.0);
    CHECK(cs(1.5, 0.0) == 0.0);
}

TEST_CASE("bump panels align with the flank knots and tile the support") {
    Bump1D b{-1.0, 1.0, 0.25};
    auto panels = bump_panels(b, 8);
    REQUIRE(panels.size() >= 8);
    CHECK(panels.front().first == doctest::Approx(-1.0));
    CHECK(panels.back().second == doctest::Approx(1.0));
    for (std::size_t i = 1; i < panels.size(); ++i)
        CHECK(panels[i].first == doctest::Approx(panels[i - 1].second));
    // Knots appear among the panel edges so each panel is one smooth piece.
    for (double knot : {-0.75, 0.75}) {
        bool found = false;
        for (const auto& [a, c] : panels)
            if (std::abs(a - knot) < 1e-12 || std::abs(c - knot) < 1e-12) found = true;
        CHECK(found);
    }
}

TEST_CASE("eight point panels integrate low degree polynomials exactly") {
    std::vector<double> xs, ws;
    gauss8_append(0.0, 1.0, xs, ws);
    REQUIRE(xs.size() == 8);
    double s7 = 0.0, s0 = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        s7 += ws[i] * std::pow(xs[i], 7);
        s0 += ws[i];
    }
    CHECK(s7 == doctest::Approx(1.0 / 8.0).epsilon(1e-14));
    CHECK(s0 == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("banded inertia agrees with the tridiagonal count") {
    auto veff = [](double x) { return x * x; };
    Grid1D g{-8.0, 8.0, 300};
    TridiagOperator op = assemble_schrodinger(veff, 1.0, g);

    BandedHermitian<double> A;
    A.allocate(op.n(), 1);
    for (int i = 0; i < op.n(); ++i) {
        A.at(i, i) = op.diag[i];
        if (i + 1 < op.n()) A.at(i + 1, i) = op.offdiag[i];
    }
    for (double tau : {0.5, 2.0, 6.0, 11.0}) {
        BandedInertia bi = banded_inertia_below(A, tau);
        CHECK(bi.negative == inertia_below(op, tau));
        CHECK(bi.perturbed == 0);
    }
}

TEST_CASE("complex banded inertia sees the Hermitian spectrum") {
    // Tridiagonal [[2, i, 0], [-i, 2, i], [0, -i, 2]]: eigenvalues 2, 2 +- sqrt(2).
    using cd = std::complex<double>;
    BandedHermitian<cd> A;
    A.allocate(3, 1);
    A.at(0, 0) = A.at(1, 1) = A.at(2, 2) = cd(2.0, 0.0);
    A.at(1, 0) = cd(0.0, -1.0);
    A.at(2, 1) = cd(0.0, -1.0);
    CHECK(banded_inertia_below(A, 0.5).negative == 0);
    CHECK(banded_inertia_below(A, 1.0).negative == 1);
    CHECK(banded_inertia_below(A, 2.5).negative == 2);
    CHECK(banded_inertia_below(A, 4.0).negative == 3);
}
