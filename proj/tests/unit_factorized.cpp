#include "doctest.h"

#include "magband/errors.hpp"
#include "magband/factorized.hpp"
#include "magband/grid.hpp"
#include "magband/tridiag_eigen.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <vector>

using namespace magband;

namespace {

using BigFloat = boost::multiprecision::cpp_bin_float_100;

// Eigenvalue count of B^T B below t, where B is the same (n+1) x n lower
// bidiagonal the factorized solver assembles: cell midpoints carry
// d[j] = g(mid_j)/2 - 1/dx and s[j] = g(mid_j+1)/2 + 1/dx.  The Sturm
// recurrence runs in 100-digit floats, so counts stay exact even when the
// probe t is fifty orders below the matrix scale.
int count_below_mp(const std::function<double(double)>& g, const Grid1D& grid, double t) {
    const int n = grid.n;
    const double dx = grid.spacing();
    std::vector<BigFloat> d(n), s(n);
    for (int j = 0; j < n; ++j) {
        double mid_above = grid.x_min + (j + 0.5) * dx;
        double mid_below = grid.x_min + (j + 1.5) * dx;
        d[j] = BigFloat(0.5 * g(mid_above)) - BigFloat(1.0) / BigFloat(dx);
        s[j] = BigFloat(0.5 * g(mid_below)) + BigFloat(1.0) / BigFloat(dx);
    }
    const BigFloat shift(t);
    BigFloat q = d[0] * d[0] + s[0] * s[0] - shift;
    int count = q < 0 ? 1 : 0;
    for (int j = 1; j < n; ++j) {
        BigFloat a = d[j] * d[j] + s[j] * s[j];
        BigFloat b = s[j - 1] * d[j];
        if (q == 0) q = BigFloat(-1e-200);
        q = (a - shift) - (b * b) / q;
        if (q < 0) ++count;
    }
    return count;
}

} // namespace

TEST_CASE("factorized ground state matches the direct solve at moderate size") {
    // g = x: the factorized operator is D^2 + x^2 + 1 with ground value 2.
    auto g = [](double x) { return x; };
    Grid1D coarse{-8.0, 8.0, 1200};
    RefinedValue rv = ground_factorized_refined(g, 1.0, coarse);
    CHECK(std::abs(rv.value - 2.0) <= rv.error + 2e-5);
    CHECK(rv.value == doctest::Approx(2.0).epsilon(1e-4));

    FactorizedGround fg = ground_factorized(g, 1.0, coarse);
    CHECK(fg.iterations >= 1);
    double nrm = 0.0;
    for (double x : fg.vec) nrm += x * x;
    CHECK(std::sqrt(nrm) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("reversed sign puts the ground state at the bottom of the gap") {
    // g = -x has normalizable kernel direction exp(-x^2/2); on a finite
    // Dirichlet box only the truncation tail survives.
    auto g = [](double x) { return -x; };
    Grid1D grid{-10.0, 10.0, 2000};
    FactorizedGround fg = ground_factorized(g, 1.0, grid);
    CHECK(fg.lambda >= 0.0);
    CHECK(fg.lambda < 1e-20);
}

TEST_CASE("factorized value agrees with Sturm bisection in the benign regime") {
    // Same operator two ways: factorized sigma_min^2 versus the assembled
    // D^2 + g^2 + g' solved by bisection, where absolute accuracy suffices.
    double eta = 1.0;
    auto g = [eta](double x) { return eta - x * x / 2; };
    auto veff = [g](double x) { return g(x) * g(x) - x; };
    Grid1D coarse{-6.0, 6.0, 1500};
    Grid1D fine{-6.0, 6.0, 3001};

    RefinedValue fac = ground_factorized_refined(g, 1.0, coarse);
    auto build = [&](const Grid1D& gr) { return assemble_schrodinger(veff, 1.0, gr); };
    EigenResult dir = refine_richardson(build, 1, coarse, fine, 1e-12);
    CHECK(std::abs(fac.value - dir.values[0]) <=
          fac.error + dir.error_estimates[0] + 1e-8);
}

TEST_CASE("exponentially small ground value is certified by exact counting") {
    // Deep well: the bottom sits near 2.29e-52, fifty orders below the
    // matrix scale.  The high-precision Sturm count on the identical
    // bidiagonal brackets the computed value within one percent, so the
    // solver's relative accuracy claim is checked against an independent
    // arithmetic, not against itself.
    double eta = 10.0;
    auto g = [eta](double x) { return eta - x * x / 2; };
    Grid1D grid{-6.94, 12.32, 1270};

    FactorizedGround fg = ground_factorized(g, 1.0, grid);
    REQUIRE(fg.lambda > 0.0);
    // Tiny magnitudes need ratio comparisons; additive tolerances are vacuous.
    CHECK(count_below_mp(g, grid, fg.lambda * 0.99) == 0);
    CHECK(count_below_mp(g, grid, fg.lambda * 1.01) == 1);

    // The refined pair removes the leading discretization error; the frozen
    // reference pins the continuum value.
    RefinedValue rv = ground_factorized_refined(g, 1.0, grid);
    REQUIRE(rv.value > 0.0);
    CHECK(rv.value / 2.2896e-52 > 0.95);
    CHECK(rv.value / 2.2896e-52 < 1.05);
    CHECK(rv.error > 0.0);
    CHECK(rv.error < 0.05 * rv.value);
    // The single-grid value carries the discretization bias the pair reports.
    CHECK(std::abs(std::log(rv.value) - std::log(fg.lambda)) < 0.5);
}

TEST_CASE("double-precision factor count agrees across scales") {
    // The Golub-Kahan count never squares an entry, so plain double
    // arithmetic resolves thresholds from O(1) down to arbitrarily far
    // below the matrix scale.
    auto gx = [](double x) { return x; };
    Grid1D box{-8.0, 8.0, 1200};
    // D^2 + x^2 + 1 has spectrum 2, 4, 6, ...: sigma = sqrt(2), 2, sqrt(6).
    CHECK(ground_factorized_count_below(gx, 1.0, box, 1.0) == 0);
    CHECK(ground_factorized_count_below(gx, 1.0, box, 1.7) == 1);
    CHECK(ground_factorized_count_below(gx, 1.0, box, 2.2) == 2);
    CHECK(ground_factorized_count_below(gx, 1.0, box, 2.6) == 3);

    // Deep well: the count brackets the solver's own sigma at 1e-26 and
    // knows nothing sits below 1e-150 on this grid.
    double eta = 10.0;
    auto g = [eta](double x) { return eta - x * x / 2; };
    Grid1D grid{-6.94, 12.32, 1270};
    double sigma = std::sqrt(ground_factorized(g, 1.0, grid).lambda);
    REQUIRE(sigma > 0.0);
    CHECK(ground_factorized_count_below(g, 1.0, grid, 0.99 * sigma) == 0);
    CHECK(ground_factorized_count_below(g, 1.0, grid, 1.01 * sigma) == 1);
    CHECK(ground_factorized_count_below(g, 1.0, grid, 1e-150) == 0);
    CHECK(ground_factorized_count_below(g, 1.0, grid, 1e-20) == 1);

    // Where 1/sigma overflows and the solver refuses, the count still
    // certifies a bottom under the representability floor.
    double eta_deep = 60.0;
    auto gd = [eta_deep](double x) { return eta_deep - x * x / 2; };
    Grid1D wide{-24.0, 24.0, 9000};
    CHECK(ground_factorized_count_below(gd, 1.0, wide, 1e-150) == 1);

    CHECK_THROWS_AS(ground_factorized_count_below(gx, 1.0, box, 0.0), InvalidInput);
}

TEST_CASE("values beyond double range are refused, not fabricated") {
    // Here sigma ~ exp(-876): the per-stage solve overflows and the solver
    // must throw instead of returning a saturated number.
    double eta = 60.0;
    auto g = [eta](double x) { return eta - x * x / 2; };
    Grid1D grid{-24.0, 24.0, 9000};
    CHECK_THROWS_AS(ground_factorized(g, 1.0, grid), NumericalFailure);
}

TEST_CASE("factorized input contracts") {
    auto g = [](double x) { return x; };
    CHECK_THROWS_AS(ground_factorized(g, 0.0, Grid1D{-1, 1, 100}), InvalidInput);
    CHECK_THROWS_AS(ground_factorized(g, 1.0, Grid1D{-1, 1, 2}), InvalidInput);
    auto bad = [](double) { return std::nan(""); };
    CHECK_THROWS_AS(ground_factorized(bad, 1.0, Grid1D{-1, 1, 100}), NumericalFailure);
}
