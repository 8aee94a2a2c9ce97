#include "doctest.h"

#include "magband/bands.hpp"
#include "magband/correction.hpp"
#include "magband/cutoff.hpp"
#include "magband/fiber_ids.hpp"
#include "magband/model.hpp"
#include "magband/weyl_ids.hpp"

#include <cmath>

using namespace magband;

namespace {

ModelParams cheap_model() {
    ModelParams p;
    p.nu = 2;
    p.ell = 0;
    p.h = 0.6;
    p.mu = 1.4; // coupling mu h^2 = 0.5, subcritical
    return p;
}

} // namespace

TEST_CASE("pointwise level count integrates the degenerate field") {
    ModelParams p = cheap_model();
    CutoffSpec psi = CutoffSpec::standard();

    WeylOptions wo;
    wo.tau = 1.0;
    WeylResult r1 = weyl_ids(p, psi, wo);
    CHECK(r1.value > 0.0);
    CHECK(r1.error >= 0.0);
    CHECK(r1.max_levels > 0.0);

    wo.tau = 2.0;
    WeylResult r2 = weyl_ids(p, psi, wo);
    CHECK(r2.value > r1.value); // count grows with the threshold

    // The sampled field is the derivative of the vector potential profile.
    for (const WeylFieldRow& row : r1.field)
        CHECK(row.field == doctest::Approx(p.mu * row.x1).epsilon(1e-9));
}

TEST_CASE("level count is invariant under sliding the transverse window") {
    // Nothing depends on x2 when the electric profile is absent.
    ModelParams p = cheap_model();
    WeylOptions wo;
    wo.tau = 1.5;

    CutoffSpec a = CutoffSpec::standard();
    CutoffSpec b = a;
    b.psi2.lo += 0.8;
    b.psi2.hi += 0.8;
    WeylResult ra = weyl_ids(p, a, wo);
    WeylResult rb = weyl_ids(p, b, wo);
    CHECK(ra.value == doctest::Approx(rb.value).epsilon(1e-12));
}

TEST_CASE("excising the degeneration zone is reported with a mass bound") {
    ModelParams p = cheap_model();
    CutoffSpec psi = CutoffSpec::standard();
    WeylOptions wo;
    wo.tau = 1.0;
    wo.cut_radius = 0.1;
    WeylResult cut = weyl_ids(p, psi, wo);
    wo.cut_radius = 0.0;
    WeylResult full = weyl_ids(p, psi, wo);
    CHECK(cut.cut_mass_bound > 0.0);
    CHECK(cut.value <= full.value + 1e-12);
    CHECK(full.value <= cut.value + cut.cut_mass_bound + full.error + cut.error);
}

TEST_CASE("fiber count is nonnegative, monotone, and deterministic") {
    ModelParams p = cheap_model();
    CutoffSpec psi = CutoffSpec::standard();

    IdsOptions io;
    io.tau = 0.8;
    io.rel_tol = 1e-5;
    IdsResult r1 = fiber_ids(p, psi, io);
    CHECK(r1.value >= 0.0);
    CHECK(r1.quad_error >= 0.0);
    CHECK(r1.tail_bound >= 0.0);
    CHECK(r1.n_branches >= 1);
    CHECK(r1.eta_lo < r1.eta_hi);
    CHECK(r1.solver_points > 0);

    io.tau = 1.6;
    IdsResult r2 = fiber_ids(p, psi, io);
    CHECK(r2.value > r1.value);

    io.workers = 3;
    IdsResult r3 = fiber_ids(p, psi, io);
    CHECK(r3.value == doctest::Approx(r2.value).epsilon(1e-12));
}

TEST_CASE("count mass confined to one panel edge is not lost") {
    // Depressed potential with a hard window: the only band crossing sits
    // near the left end of the planned eta range and the cutoff weight dies
    // far inside it, so the whole integrand is a bump at one edge of a wide
    // breakpoint panel.  An adaptive pass that never splits at the scan
    // points terminates on a zero defect and reports exactly 0 here; the
    // true mass is the weight plateau times the density prefactor, about 6.
    ModelParams p;
    p.nu = 2;
    p.ell = 1;
    p.h = 0.15;
    p.mu = 1.0 / (p.h * p.h);
    p.W = [](double) { return -1.0; };
    CutoffSpec psi = CutoffSpec::window(-0.5, 0.5, -0.5, 0.5);

    IdsOptions io;
    io.tau = 0.0;
    IdsResult r = fiber_ids(p, psi, io);
    CHECK(r.value > 4.0);
    CHECK(r.value < 9.0);
    CHECK(r.quad_error < 0.05);
}

TEST_CASE("active branch sizing is monotone in the threshold") {
    ModelParams p = cheap_model();
    CutoffSpec psi = CutoffSpec::standard();
    IdsOptions lo, hi;
    lo.tau = 0.5;
    hi.tau = 2.5;
    int nlo = fiber_active_branches(p, psi, lo);
    int nhi = fiber_active_branches(p, psi, hi);
    CHECK(nlo >= 1);
    CHECK(nhi >= nlo);
    CHECK(nhi <= hi.n_branch_cap);
}

TEST_CASE("band table serves cached fiber data consistently") {
    ModelParams p = cheap_model();
    Bump1D psi1{-0.5, 0.5, 0.15};
    BandTable table(p, 2, psi1);
    auto pt = table.at_eta(1.0);
    REQUIRE(pt);
    REQUIRE(pt->lambda.size() == 2);
    CHECK(pt->lambda[0] < pt->lambda[1]);
    for (double w : pt->weight) {
        CHECK(w >= 0.0);
        CHECK(w <= 1.0 + 1e-9);
    }
    auto again = table.at_eta(1.0);
    CHECK(again.get() == pt.get()); // cache hit returns the same record
    CHECK(table.cache_size() >= 1);

    // The band function subtracts half the electric shift.
    ModelParams q = cheap_model();
    q.W = [](double) { return 0.6; };
    double with = band_function(q, 0.3, 0.9, 0);
    q.W = nullptr;
    double without = band_function(q, 0.3, 0.9, 0);
    CHECK(with == doctest::Approx(without - 0.3).epsilon(1e-9));
}

TEST_CASE("nondegeneracy functional is positive for the pilot family") {
    ModelParams p = cheap_model();
    NondegeneracyReport rep =
        check_nondegeneracy(p, {-0.2, 0.0, 0.2}, {0.4, 0.7, 1.0}, 2);
    CHECK(rep.epsilon0 > 0.0);
    CHECK(std::isfinite(rep.epsilon0));
    CHECK(rep.at_branch >= 0);
    // Interior scan points only: the report cites a central mesh node.
    CHECK(rep.at_x2 == doctest::Approx(0.0));
    CHECK(rep.at_xi2 == doctest::Approx(0.7));
}

TEST_CASE("window correction rows decompose as fiber minus pointwise count") {
    ModelParams p = cheap_model();
    p.h = 0.7;

    CorrectionOptions co;
    co.tau = 0.9;
    co.half_width = 0.3;
    co.ids.rel_tol = 1e-4;
    CorrectionResult res = correction_term(p, CutoffSpec::standard().psi2, co);
    CHECK(res.half_width == doctest::Approx(0.3));
    CHECK(res.error_budget >= 0.0);
    CHECK(res.window_growth >= 0.0);
    REQUIRE_FALSE(res.rows.empty());
    for (const CorrectionRow& row : res.rows) {
        CHECK(row.correction ==
              doctest::Approx(row.fiber - row.weyl).epsilon(1e-12));
        CHECK(row.error >= 0.0);
    }
    CHECK(std::isfinite(res.value));
}
