#include "magband/acceptance.hpp"

#include "magband/branches.hpp"
#include "magband/config.hpp"
#include "magband/correction.hpp"
#include "magband/errors.hpp"
#include "magband/fiber_ids.hpp"
#include "magband/model.hpp"
#include "magband/oracle2d.hpp"
#include "magband/parallel.hpp"
#include "magband/perturbation.hpp"
#include "magband/report.hpp"
#include "magband/stats.hpp"
#include "magband/sweep.hpp"
#include "magband/tridiag_eigen.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace magband {

namespace {

// ---- pinned tolerances and frozen constants --------------------------------
// Changing any of these is a contract change, not a tuning knob.
constexpr double kKappaFitRelTol = 0.02;   // criterion 2
constexpr double kZeroModeFloor = 1e-8;    // criterion 3
constexpr double kDecayExponentTol = 0.05; // criterion 4, relative to 3/2
constexpr double kSandwichRatioMax = 10.0; // criterion 4
constexpr double kSymmetrySlackRel = 1e-10; // criterion 5 absolute floor, x scale
// Frozen two-sided bounds for the normalized branch spacing
// gap / (1+|eta|)^((nu-1)/nu), measured once at development time over
// |eta| <= 20 and eta in [1e2, 1e4] and frozen with ~25% headroom.
// The large-eta end converges to 2 nu^((nu-1)/nu) (4.160 / 7.248); the
// nu=3 floor is the eta=0 tunneling doublet of the even double well
// x^6/9 - 2x^2 (gap 0.132), so the low bound sits well under it.
constexpr double kSpacingLoNu3 = 0.10, kSpacingHiNu3 = 5.20;
constexpr double kSpacingLoNu5 = 0.90, kSpacingHiNu5 = 9.10;
constexpr double kCrossingMinSep = 1e-3;   // criterion 6
constexpr double kOracleFrozen = 1.0;      // criterion 7 remainder constant
constexpr double kFdDerivativeTol = 0.01;  // criterion 10
constexpr double kC1Budget = 10.0;         // seconds
constexpr double kC2Budget = 300.0;        // seconds
constexpr double kC7PointBudget = 1200.0;  // seconds per point

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double to_d(const Rational& q) { return q.convert_to<double>(); }

// ---- criterion 1: exact second-order coefficient ---------------------------
CriterionResult crit_omega2(const AcceptanceOptions&) {
    CriterionResult r;
    auto t0 = std::chrono::steady_clock::now();
    int cases = 0, bad = 0;
    std::string first_bad;
    for (int nu = 2; nu <= 8; ++nu)
        for (int ell = 0; ell <= 5; ++ell) {
            ++cases;
            Rational w = omega2(nu, ell);
            Rational target = Rational((nu - 1) * ell * (ell + 1), 2);
            if (w != target) {
                ++bad;
                if (first_bad.empty())
                    first_bad = fmt(" first mismatch at (%d,%d)", nu, ell);
            }
        }
    double el = seconds_since(t0);
    r.passed = bad == 0 && el < kC1Budget;
    r.detail = fmt("%d ladder values == (nu-1)l(l+1)/2 exactly, %d mismatches%s, %.2fs (< %.0fs)",
                   cases, bad, first_bad.c_str(), el, kC1Budget);
    return r;
}

// ---- criterion 2: kappa asymptotics ----------------------------------------
CriterionResult crit_kappa_fit(const AcceptanceOptions& o) {
    CriterionResult r;
    auto t0 = std::chrono::steady_clock::now();
    const std::array<std::pair<int, int>, 4> cases{{{2, 1}, {2, 2}, {3, 1}, {4, 1}}};
    bool ok = true;
    std::string d;
    for (auto [nu, ell] : cases) {
        BranchTracer tr(nu, ell, ell + 1);
        EigenBranch br = tr.trace(eta_grid_geometric(1e2, 1e4, 17), o.workers);
        PowerLawFit fit = fit_power_law(br, ell, 1e2, 1e4);
        double texp = -2.0 / nu;
        double tcoef = 0.5 * (nu - 1) * ell * (ell + 1) * std::pow(double(nu), -2.0 / nu);
        bool okc = std::abs(fit.exponent - texp) <= kKappaFitRelTol * std::abs(texp) &&
                   std::abs(fit.coefficient - tcoef) <= kKappaFitRelTol * tcoef;
        ok = ok && okc;
        d += fmt("(%d,%d): exp %.4f->%.4f coef %.4f->%.4f%s; ", nu, ell, fit.exponent, texp,
                 fit.coefficient, tcoef, okc ? "" : " FAIL");
    }
    double el = seconds_since(t0);
    ok = ok && el < kC2Budget;
    r.passed = ok;
    r.detail = d + fmt("tol 2%%, %.1fs (< %.0fs)", el, kC2Budget);
    return r;
}

// ---- criterion 3: odd-nu zero mode -----------------------------------------
Grid1D zero_mode_grid(int nu, double eta, int n) {
    auto expo = [nu, eta](double x) {
        double p = 1.0;
        for (int i = 0; i <= nu; ++i) p *= x;
        return eta * x - p / (double(nu) * (nu + 1));
    };
    double gamma = eta > 0 ? std::pow(nu * eta, 1.0 / nu) : 0.0;
    double peak = expo(gamma);
    double w = gamma > 1 ? std::pow(gamma, -(nu - 1.0) / 2.0) : 1.0;
    double step = 0.05 * w;
    double hi = gamma, lo = gamma;
    for (int i = 0; i < 200000 && expo(hi) > peak - 60.0; ++i) hi += step;
    for (int i = 0; i < 200000 && expo(lo) > peak - 60.0; ++i) lo -= step;
    return Grid1D{lo, hi, n};
}

CriterionResult crit_zero_mode(const AcceptanceOptions& o) {
    CriterionResult r;
    bool ok = true;
    std::string d;
    const double eta_top = o.quick ? 1e2 : 1e3;
    const int pts = o.quick ? 6 : 21;
    for (int nu : {3, 5}) {
        BranchTracer tr(nu, 0, 1);
        EigenBranch br = tr.trace(eta_grid_uniform(0.0, eta_top, pts), o.workers);
        double worst = 0.0;
        for (std::size_t i = 0; i < br.eta_grid.size(); ++i) {
            double eta = br.eta_grid[i];
            double cap = kZeroModeFloor * std::max(1.0, std::pow(eta, 2.0 * (nu - 1) / nu));
            worst = std::max(worst, std::abs(br.values[0][i]) / cap);
        }
        ok = ok && worst <= 1.0;
        d += fmt("nu=%d max|l0|/cap %.2e; ", nu, worst);

        std::vector<double> res_etas = o.quick ? std::vector<double>{1.0, 10.0}
                                               : std::vector<double>{0.0, 1.0, 10.0, 100.0, 1000.0};
        for (double eta : res_etas) {
            ZeroModeCheck zc = zero_mode_residual(nu, eta, zero_mode_grid(nu, eta, 4000));
            bool okr = std::isfinite(zc.residual) && zc.residual <= zc.bound;
            ok = ok && okr;
            if (!okr) d += fmt("residual FAIL nu=%d eta=%g: %.2e > %.2e; ", nu, eta, zc.residual, zc.bound);
        }
    }
    r.passed = ok;
    r.detail = d + "residuals within a-priori grid bounds";
    return r;
}

// ---- criterion 4: even-nu exponential smallness ----------------------------
CriterionResult crit_decay_fit(const AcceptanceOptions& o) {
    CriterionResult r;
    BranchTracer tr(2, 0, 1);
    EigenBranch br = tr.trace(eta_grid_uniform(0.5, 31.0, 62), o.workers);
    DecayFit df = fit_exponential_decay(br, 0, 4.0, 31.0);
    double ratio = df.slope_ratio_max / df.slope_ratio_min;
    bool ok = std::abs(df.fit.exponent - 1.5) <= kDecayExponentTol * 1.5 &&
              df.slope_ratio_min > 0.0 && std::isfinite(ratio) && ratio < kSandwichRatioMax;
    r.passed = ok;
    r.detail = fmt("-log(l0) ~ %.4f * eta^%.4f over %d pts (target p=1.5 +/-5%%); "
                   "slope/eta^(1/2) in [%.3f, %.3f], ratio %.2f (< %.0f)",
                   df.fit.coefficient, df.fit.exponent, df.fit.points,
                   df.slope_ratio_min, df.slope_ratio_max, ratio, kSandwichRatioMax);
    return r;
}

// ---- criterion 5: symmetry and spacing -------------------------------------
// Mirror solve assembled literally at -eta (no reflection shortcut), so the
// comparison against the reflected solver path is a real symmetry test.
EigenResult mirror_solve(int nu, int ell, double eta, int nb) {
    const double meta = -eta;
    auto veff = [nu, ell, meta](double x) { return pilot_veff(nu, ell, meta, x); };
    double gamma = std::pow(nu * eta, 1.0 / nu);
    double s = std::pow(1.0 + eta, (nu - 1.0) / nu);
    double r = 2.0 + 1.6 * std::pow(nu * (eta + 2.0), 1.0 / nu);
    double vmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 800; ++i) vmin = std::min(vmin, veff(-r + 2 * r * i / 800.0));
    double e_max = vmin + 2.0 * (nb + ell + 2) * s;
    Grid1D dom = auto_domain(veff, {-gamma, 0.0, -1.0, 1.0}, e_max, 3, 5.0);
    double len = dom.x_max - dom.x_min;
    int n = std::clamp(static_cast<int>(4.0 * len * std::sqrt(e_max - vmin)) + 1, 400, 24000);
    auto build = [nu, ell, meta](const Grid1D& g) { return build_pilot(nu, ell, meta, g); };
    return refine_richardson(build, nb, Grid1D{dom.x_min, dom.x_max, n},
                             Grid1D{dom.x_min, dom.x_max, 2 * n + 1}, 1e-10);
}

CriterionResult crit_symmetry_spacing(const AcceptanceOptions& o) {
    CriterionResult r;
    bool ok = true;
    std::string d;
    const int pts_per_case = o.quick ? 5 : 25;

    struct Case { int nu, ell, nb; double sp_lo, sp_hi; };
    const std::array<Case, 2> cases{{{3, 1, 3, kSpacingLoNu3, kSpacingHiNu3},
                                     {5, 0, 2, kSpacingLoNu5, kSpacingHiNu5}}};
    for (const Case& c : cases) {
        BranchTracer tr(c.nu, c.ell, c.nb);
        std::vector<double> etas = eta_grid_uniform(1.0, 100.0, pts_per_case);
        double worst = 0.0;
        int checked = 0;
        std::vector<EigenResult> mirror(etas.size());
        std::vector<PointSolve> direct(etas.size());
        parallel_for(etas.size(), o.workers, [&](std::size_t i) {
            mirror[i] = mirror_solve(c.nu, c.ell, etas[i], c.nb);
            direct[i] = tr.solve(etas[i]);
        });
        for (std::size_t i = 0; i < etas.size(); ++i) {
            double s = std::pow(1.0 + etas[i], (c.nu - 1.0) / c.nu);
            for (int b = 0; b < c.nb; ++b) {
                double diff = std::abs(mirror[i].values[b] - direct[i].values[b]);
                double cap = 2.0 * (mirror[i].error_estimates[b] + direct[i].errors[b]) +
                             kSymmetrySlackRel * s;
                worst = std::max(worst, diff / cap);
                ++checked;
            }
        }
        bool oks = worst <= 1.0;
        ok = ok && oks;
        d += fmt("nu=%d sym worst |l(-eta)-l(eta)|/2err %.3f over %d values%s; ", c.nu, worst,
                 checked, oks ? "" : " FAIL");

        if (!o.quick) {
            EigenBranch near = tr.trace(eta_grid_uniform(-20.0, 20.0, 21), o.workers);
            EigenBranch far = tr.trace(eta_grid_geometric(1e2, 1e4, 9), o.workers);
            double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
            for (const EigenBranch* br : {&near, &far})
                for (const SpacingRow& row : spacing_stats(*br)) {
                    lo = std::min(lo, row.normalized);
                    hi = std::max(hi, row.normalized);
                }
            bool okg = lo >= c.sp_lo && hi <= c.sp_hi;
            ok = ok && okg;
            d += fmt("spacing [%.3f, %.3f] in [%.2f, %.2f]%s; ", lo, hi, c.sp_lo, c.sp_hi,
                     okg ? "" : " FAIL");
        }
    }
    r.passed = ok;
    r.detail = d;
    return r;
}

// ---- criterion 6: sign separation and zero structure ------------------------
CriterionResult crit_zero_structure(const AcceptanceOptions& o) {
    CriterionResult r;
    bool ok = true;
    std::string d;

    BranchTracer tr(2, 2, 6);
    EigenBranch br = tr.trace(eta_grid_uniform(-10.0, 100.0, 45), o.workers);
    std::vector<ZeroCrossing> zc = detect_zeros(tr, br);
    bool have0 = false, have1 = false, clean = true;
    for (const ZeroCrossing& z : zc) {
        if (z.branch == 0) have0 = true;
        else if (z.branch == 1) have1 = true;
        else clean = false;
        if (z.ambiguous) clean = false;
        d += fmt("b%d: eta*=%.4f r=%d gap %.3f; ", z.branch, z.eta_bar, z.order_r, z.rounding_gap);
    }
    double sep = min_crossing_separation(zc);
    bool okz = zc.size() == 2 && have0 && have1 && clean && sep > kCrossingMinSep;
    ok = ok && okz;
    d += fmt("count %zu (want 2 on b0,b1), sep %.4g%s; ", zc.size(), sep, okz ? "" : " FAIL");

    for (int b = 3; b < 6; ++b) {
        double mn = std::numeric_limits<double>::infinity();
        for (double v : br.values[b]) mn = std::min(mn, v);
        bool okp = mn > 0.0;
        ok = ok && okp;
        if (!okp) d += fmt("branch %d dips to %.3g FAIL; ", b, mn);
    }

    for (int ell : {1, 2}) {
        BranchTracer ts(2, ell, ell + 3);
        PointSolve ps = ts.solve(100.0);
        for (int n = 0; n < ell + 3; ++n) {
            if (n == ell) continue;
            bool oks = (n < ell) ? ps.values[n] < 0.0 : ps.values[n] > 0.0;
            ok = ok && oks;
            if (!oks) d += fmt("sign FAIL l=%d n=%d lambda=%.3g; ", ell, n, ps.values[n]);
        }
    }
    if (ok) d += "n>=3 positive, signs of n-l match";
    r.passed = ok;
    r.detail = d;
    return r;
}

// ---- criterion 7: fiber vs 2D oracle ----------------------------------------
CriterionResult crit_oracle_box(const AcceptanceOptions& o) {
    CriterionResult r;
    bool ok = true;
    std::string d;
    const double h = 0.15;
    for (double c : {0.3, 1.0, 3.0}) {
        for (double wsign : {1.0, -1.0}) {
            auto tp = std::chrono::steady_clock::now();
            ModelParams p;
            p.nu = 2;
            p.ell = 1;
            p.h = h;
            p.mu = c / (h * h);
            p.W = [wsign](double) { return wsign; };
            Box2D box;
            box.n1 = box.n2 = 200;
            CutoffSpec psi = CutoffSpec::window(box.x1_lo, box.x1_hi, box.x2_lo, box.x2_hi);

            IdsOptions io;
            io.workers = o.workers;
            IdsResult fib = fiber_ids(p, psi, io);

            Oracle2dOptions oo;
            OracleIdsResult orc = oracle_ids(p, psi, box, oo);

            double diff = std::abs(orc.value - fib.value);
            double budget = fib.quad_error + fib.tail_bound + fib.edge_budget +
                            0.5 * orc.count_gap;
            double floor_arm = 3.0 * std::pow(p.mu, -1.0 / p.nu) / p.h * kOracleFrozen;
            double bound = std::max(budget, floor_arm);
            double el = seconds_since(tp);
            bool okp = diff <= bound && el < kC7PointBudget;
            ok = ok && okp;
            d += fmt("muh2=%.1f W=%+g: |%.2f-%.2f|=%.3f <= %.3f (budget %.3f, floor %.3f) %.0fs%s; ",
                     c, wsign, orc.value, fib.value, diff, bound, budget, floor_arm, el,
                     okp ? "" : " FAIL");
        }
    }
    r.passed = ok;
    r.detail = d;
    return r;
}

// ---- criterion 8: remainder scaling trend ------------------------------------
CriterionResult crit_remainder_trend(const AcceptanceOptions& o) {
    CriterionResult r;
    bool ok = true;
    std::string d;

    std::vector<ModelParams> pts;
    for (double h : {0.25, 0.125, 0.0625}) {
        ModelParams p;
        p.nu = 2;
        p.ell = 1;
        p.h = h;
        p.mu = 1.0 / (h * h); // mu h^nu = 1
        p.W = [](double) { return 1.0; };
        pts.push_back(p);
    }
    SweepOptions so;
    so.box.n1 = so.box.n2 = 48;
    so.with_correction = false;
    so.workers = o.workers;
    std::vector<SweepRecord> recs = remainder_sweep(pts, so);
    std::vector<double> ys;
    for (const SweepRecord& rec : recs) {
        if (rec.skipped) {
            ok = false;
            d += fmt("point h=%g skipped: %s; ", rec.h, rec.skip_reason.c_str());
            continue;
        }
        ys.push_back(rec.normalized);
        d += fmt("h=%g R*mu^(1/2)h=%.4f; ", rec.h, rec.normalized);
    }
    bool trend = ys.size() == 3 && !increasing_trend(ys, 0.05);
    ok = ok && trend;
    d += fmt("increasing trend rejected at 5%%: %s; ", trend ? "yes" : "NO");

    ModelParams sp;
    sp.nu = 3;
    sp.ell = 0;
    sp.h = 0.2;
    sp.mu = 10.0 / std::pow(sp.h, 3.0); // supercritical gap case
    sp.W = [](double) { return 1.0; };
    std::vector<SweepRecord> sup = remainder_sweep({sp}, so);
    const SweepRecord& s0 = sup.at(0);
    bool oks = !s0.skipped && s0.supercritical && s0.remainder <= s0.quad_error;
    ok = ok && oks;
    if (s0.skipped)
        d += fmt("supercritical skipped: %s", s0.skip_reason.c_str());
    else
        d += fmt("supercritical R_I=%.4f <= budget %.4f%s", s0.remainder, s0.quad_error,
                 oks ? "" : " FAIL");
    r.passed = ok;
    r.detail = d;
    return r;
}

// ---- criterion 9: l=0 correction vanishing -----------------------------------
CriterionResult crit_correction_l0(const AcceptanceOptions& o) {
    CriterionResult r;
    bool ok = true;
    std::string d;
    std::vector<std::pair<double, double>> muh{{4.0, 0.3}, {9.0, 0.25}, {16.0, 0.2},
                                               {25.0, 0.18}, {36.0, 0.15}};
    if (o.quick) muh = {{16.0, 0.2}};
    for (auto [mu, h] : muh) {
        ModelParams p;
        p.nu = 2;
        p.ell = 0;
        p.mu = mu;
        p.h = h;
        p.W = [](double x2) { return 1.0 + 0.3 * std::cos(x2); };
        Bump1D psi2{-1.0, 1.0, 0.3};
        CorrectionOptions co;
        co.workers = o.workers;
        CorrectionResult cr = correction_term(p, psi2, co);
        bool okp = std::abs(cr.value) <= cr.error_budget;
        ok = ok && okp;
        d += fmt("(mu=%g,h=%g): |%.3e| <= %.3e%s; ", mu, h, cr.value, cr.error_budget,
                 okp ? "" : " FAIL");
    }
    r.passed = ok;
    r.detail = d;
    return r;
}

// ---- criterion 10: derivative coefficients ------------------------------------
CriterionResult crit_derivative_coeffs(const AcceptanceOptions&) {
    CriterionResult r;
    bool ok = true;
    std::string d;
    for (int nu = 2; nu <= 8 && ok; ++nu)
        for (int ell = 0; ell <= 5 && ok; ++ell) {
            DerivativeCoeffs dc = derivative_coeffs(nu, ell);
            Rational closed = Rational(nu * (2 * ell + 1), 2);
            if (dc.kappa1 != dc.kappa2 || dc.kappa3 != Rational(-2) * dc.kappa1 ||
                dc.kappa1 != closed) {
                ok = false;
                d += fmt("exact relation FAIL at (%d,%d); ", nu, ell);
            }
        }
    if (ok) d += "k1=k2=-k3/2=nu(2l+1)/2 exact on nu 2..8, l 0..5; ";

    // Finite differences of the shape derivatives on the generalized
    // operator: same grids for +/- delta so discretization bias cancels.
    constexpr int nu = 2, ell = 1;
    constexpr double eta = 1e3, delta = 1e-6;
    DerivativeCoeffs dc = derivative_coeffs(nu, ell);
    const double targets[3] = {to_d(dc.kappa1) * eta, to_d(dc.kappa2) * eta,
                               to_d(dc.kappa3) * eta};
    Grid1D coarse{-60.0, 60.0, 8000};
    Grid1D fine{-60.0, 60.0, 16001};
    for (int j = 0; j < 3; ++j) {
        double lam[2];
        for (int s = 0; s < 2; ++s) {
            std::array<double, 3> a{0.0, 0.0, 0.0};
            a[j] = (s == 0 ? delta : -delta);
            auto build = [&a](const Grid1D& g) {
                return build_general(nu, ell, eta, a, {0.0, 0.0, 0.0}, g);
            };
            lam[s] = refine_richardson(build, ell + 1, coarse, fine, 1e-11).values[ell];
        }
        double fd = (lam[0] - lam[1]) / (2.0 * delta);
        bool okj = std::abs(fd - targets[j]) <= kFdDerivativeTol * std::abs(targets[j]);
        ok = ok && okj;
        d += fmt("d/da%d: %.2f vs %.2f%s; ", j + 1, fd, targets[j], okj ? "" : " FAIL");
    }
    r.passed = ok;
    r.detail = d + "FD at eta=1e3, 1% tol";
    return r;
}

// ---- criterion 11: determinism -------------------------------------------------
CriterionResult crit_determinism(const AcceptanceOptions& o) {
    namespace fs = std::filesystem;
    CriterionResult r;

    Config cfg;
    cfg.set("model.nu", "2");
    cfg.set("model.ell", "1");
    cfg.set("model.mu", "8");
    cfg.set("model.h", "0.25");
    const std::string hash = cfg.hash();

    fs::path dir = o.scratch_dir.empty() ? fs::temp_directory_path() : fs::path(o.scratch_dir);
    dir /= "magband-determinism";
    fs::create_directories(dir);

    ModelParams p;
    p.nu = 2;
    p.ell = 1;
    p.mu = 8.0;
    p.h = 0.25;
    p.W = [](double) { return 1.0; };

    std::array<fs::path, 2> files;
    const int wk[2] = {1, std::max(3, o.workers)};
    for (int pass = 0; pass < 2; ++pass) {
        IdsOptions io;
        io.workers = wk[pass];
        IdsResult fib = fiber_ids(p, CutoffSpec::standard(), io);

        BranchTracer tr(2, 1, 2);
        EigenBranch br = tr.trace(eta_grid_uniform(-5.0, 5.0, 9), wk[pass]);

        files[pass] = dir / fmt("det_pass%d.csv", pass);
        CsvWriter w(files[pass].string(), {"kind", "x", "a", "b", "c"}, hash, "accept-det");
        for (std::size_t i = 0; i < br.eta_grid.size(); ++i)
            w.row({0.0, br.eta_grid[i], br.values[0][i], br.values[1][i], br.errors[1][i]});
        w.row({1.0, fib.value, fib.quad_error, fib.tail_bound, fib.edge_budget});
    }

    auto slurp = [](const fs::path& f) {
        std::ifstream in(f, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    std::string a = slurp(files[0]), b = slurp(files[1]);
    bool ok = !a.empty() && a == b;
    fs::remove(files[0]);
    fs::remove(files[1]);

    r.passed = ok;
    r.detail = fmt("CSV bodies (%zu bytes) with workers=%d vs workers=%d: %s", a.size(), wk[0],
                   wk[1], ok ? "byte-identical" : "DIFFER");
    return r;
}

} // namespace

AcceptanceReport run_acceptance(const AcceptanceOptions& opts) {
    AcceptanceReport rep;
    using Fn = CriterionResult (*)(const AcceptanceOptions&);
    struct Entry { int id; const char* name; Fn fn; bool in_quick; };
    const std::array<Entry, 11> entries{{
        {1, "omega2-exact", crit_omega2, true},
        {2, "kappa-fit", crit_kappa_fit, false},
        {3, "odd-zero-mode", crit_zero_mode, true},
        {4, "even-decay", crit_decay_fit, false},
        {5, "symmetry-spacing", crit_symmetry_spacing, true},
        {6, "zero-structure", crit_zero_structure, false},
        {7, "oracle-box", crit_oracle_box, false},
        {8, "remainder-trend", crit_remainder_trend, false},
        {9, "correction-l0", crit_correction_l0, true},
        {10, "derivative-coeffs", crit_derivative_coeffs, true},
        {11, "determinism", crit_determinism, true},
    }};

    for (const Entry& e : entries) {
        CriterionResult r;
        r.id = e.id;
        r.name = e.name;
        if (opts.quick && !e.in_quick) {
            r.ran = false;
            r.detail = "skipped (quick mode)";
            rep.results.push_back(r);
            continue;
        }
        auto t0 = std::chrono::steady_clock::now();
        try {
            r = e.fn(opts);
        } catch (const std::exception& ex) {
            r.passed = false;
            r.detail = std::string("exception: ") + ex.what();
        }
        r.id = e.id;
        r.name = e.name;
        r.ran = true;
        r.elapsed_seconds = seconds_since(t0);
        rep.results.push_back(r);
    }
    return rep;
}

} // namespace magband
