#include "CLI11.hpp"

#include "magband/acceptance.hpp"
#include "magband/branches.hpp"
#include "magband/config.hpp"
#include "magband/correction.hpp"
#include "magband/errors.hpp"
#include "magband/fiber_ids.hpp"
#include "magband/model.hpp"
#include "magband/oracle2d.hpp"
#include "magband/perturbation.hpp"
#include "magband/report.hpp"
#include "magband/sweep.hpp"
#include "magband/version.hpp"
#include "magband/weyl_ids.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace magband;

namespace {

struct Common {
    std::string config_path;
    std::string out_dir = "out";
    int workers = 0; // 0: take run.workers from config, else hardware
    bool quick = false;
};

struct RunContext {
    Config cfg;
    std::string out;
    int workers = 1;
    bool quick = false;
    RunSummary summary;

    std::string artifact(const std::string& name) {
        std::string p = (fs::path(out) / name).string();
        summary.artifacts[name] = p;
        return p;
    }
};

int resolve_workers(const Common& com, const Config& cfg) {
    if (com.workers > 0) return com.workers;
    long long k = cfg.get_int("run.workers", 0);
    if (k > 0) return static_cast<int>(k);
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

ModelParams params_from(const Config& c) {
    ModelParams p;
    p.nu = static_cast<int>(c.get_int("model.nu", 2));
    p.ell = static_cast<int>(c.get_int("model.ell", 0));
    p.mu = c.get_num("model.mu", 4.0);
    p.h = c.get_num("model.h", 0.25);
    double w0 = c.get_num("model.w0", 0.0);
    double wa = c.get_num("model.w_cos_amp", 0.0);
    double wf = c.get_num("model.w_cos_freq", 1.0);
    if (w0 != 0.0 || wa != 0.0)
        p.W = [w0, wa, wf](double x2) { return w0 + wa * std::cos(wf * x2); };
    std::vector<double> al = c.get_list("model.alpha", {0.0, 0.0, 0.0});
    std::vector<double> be = c.get_list("model.beta", {0.0, 0.0, 0.0});
    if (al.size() != 3 || be.size() != 3)
        throw InvalidInput("model.alpha/model.beta need exactly 3 entries");
    for (int i = 0; i < 3; ++i) {
        p.alpha[i] = al[i];
        p.beta[i] = be[i];
    }
    p.validate();
    return p;
}

CutoffSpec cutoff_from(const Config& c) {
    CutoffSpec cs = CutoffSpec::standard();
    cs.psi1 = Bump1D{c.get_num("cutoff.x1_lo", cs.psi1.lo), c.get_num("cutoff.x1_hi", cs.psi1.hi),
                     c.get_num("cutoff.x1_edge", cs.psi1.edge)};
    cs.psi2 = Bump1D{c.get_num("cutoff.x2_lo", cs.psi2.lo), c.get_num("cutoff.x2_hi", cs.psi2.hi),
                     c.get_num("cutoff.x2_edge", cs.psi2.edge)};
    cs.validate();
    return cs;
}

Box2D box_from(const Config& c) {
    Box2D b;
    b.x1_lo = c.get_num("box.x1_lo", -0.5);
    b.x1_hi = c.get_num("box.x1_hi", 0.5);
    b.x2_lo = c.get_num("box.x2_lo", -0.5);
    b.x2_hi = c.get_num("box.x2_hi", 0.5);
    b.n1 = static_cast<int>(c.get_int("box.n1", 0));
    b.n2 = static_cast<int>(c.get_int("box.n2", 0));
    return b;
}

std::vector<double> eta_grid_from(const Config& c, const std::string& section, double dlo,
                                  double dhi, int dpts, const std::string& dkind) {
    double lo = c.get_num(section + ".eta_lo", dlo);
    double hi = c.get_num(section + ".eta_hi", dhi);
    int pts = static_cast<int>(c.get_int(section + ".points", dpts));
    std::string kind = c.get_str(section + ".grid", dkind);
    if (kind == "geometric") return eta_grid_geometric(lo, hi, pts);
    if (kind == "uniform") return eta_grid_uniform(lo, hi, pts);
    throw InvalidInput(section + ".grid must be 'uniform' or 'geometric'");
}

// ---- subcommand handlers ----------------------------------------------------

void run_branch(RunContext& ctx) {
    const Config& c = ctx.cfg;
    int nu = static_cast<int>(c.get_int("model.nu", 2));
    int ell = static_cast<int>(c.get_int("model.ell", 0));
    int nb = static_cast<int>(c.get_int("branch.n", ell + 2));
    BranchTracer tr(nu, ell, nb);
    EigenBranch br = tr.trace(eta_grid_from(c, "branch", -10.0, 10.0, 41, "uniform"), ctx.workers);

    CsvWriter w(ctx.artifact("branch.csv"), {"eta", "branch", "value", "error"}, c.hash(),
                "branch");
    for (std::size_t i = 0; i < br.eta_grid.size(); ++i)
        for (int b = 0; b < nb; ++b)
            w.row({br.eta_grid[i], double(b), br.values[b][i], br.errors[b][i]});
    ctx.summary.metrics["points"] = double(br.eta_grid.size());
    ctx.summary.metrics["branches"] = double(nb);
    std::printf("branch: %zu eta points x %d branches (nu=%d, l=%d)\n", br.eta_grid.size(), nb,
                nu, ell);
}

void run_fit_kappa(RunContext& ctx) {
    const Config& c = ctx.cfg;
    int nu = static_cast<int>(c.get_int("model.nu", 2));
    int ell = static_cast<int>(c.get_int("model.ell", 1));
    int branch = static_cast<int>(c.get_int("fit.branch", ell));
    BranchTracer tr(nu, ell, branch + 1);
    EigenBranch br = tr.trace(eta_grid_from(c, "fit", 1e2, 1e4, 17, "geometric"), ctx.workers);
    double lo = c.get_num("fit.eta_lo", 1e2), hi = c.get_num("fit.eta_hi", 1e4);
    PowerLawFit fit = fit_power_law(br, branch, lo, hi);

    double texp = -2.0 / nu;
    double tcoef = 0.5 * (nu - 1) * ell * (ell + 1) * std::pow(double(nu), -2.0 / nu);
    CsvWriter w(ctx.artifact("kappa_fit.csv"),
                {"exponent", "coefficient", "target_exponent", "target_coefficient", "eta_lo",
                 "eta_hi", "points", "max_rel_residual"},
                c.hash(), "fit-kappa");
    w.row({fit.exponent, fit.coefficient, texp, tcoef, fit.eta_lo, fit.eta_hi,
           double(fit.points), fit.max_relative_residual});
    CsvWriter t(ctx.artifact("branch.csv"), {"eta", "branch", "value", "error"}, c.hash(),
                "fit-kappa");
    for (std::size_t i = 0; i < br.eta_grid.size(); ++i)
        t.row({br.eta_grid[i], double(branch), br.values[branch][i], br.errors[branch][i]});
    ctx.summary.metrics["exponent"] = fit.exponent;
    ctx.summary.metrics["coefficient"] = fit.coefficient;
    ctx.summary.metrics["target_exponent"] = texp;
    ctx.summary.metrics["target_coefficient"] = tcoef;
    std::printf("fit-kappa (nu=%d, l=%d): value ~ %.6g * eta^%.6g  (target %.6g * eta^%.6g)\n",
                nu, ell, fit.coefficient, fit.exponent, tcoef, texp);
}

void run_fit_decay(RunContext& ctx) {
    const Config& c = ctx.cfg;
    int nu = static_cast<int>(c.get_int("model.nu", 2));
    BranchTracer tr(nu, 0, 1);
    EigenBranch br = tr.trace(eta_grid_from(c, "decay", 0.5, 31.0, 62, "uniform"), ctx.workers);
    DecayFit df = fit_exponential_decay(br, 0, c.get_num("decay.fit_lo", 4.0),
                                        c.get_num("decay.fit_hi", 31.0));

    CsvWriter w(ctx.artifact("decay_fit.csv"),
                {"exponent", "coefficient", "slope_ratio_min", "slope_ratio_max",
                 "derivative_points", "points"},
                c.hash(), "fit-decay");
    w.row({df.fit.exponent, df.fit.coefficient, df.slope_ratio_min, df.slope_ratio_max,
           double(df.derivative_points), double(df.fit.points)});
    ctx.summary.metrics["exponent"] = df.fit.exponent;
    ctx.summary.metrics["coefficient"] = df.fit.coefficient;
    std::printf("fit-decay (nu=%d, l=0): -log(value) ~ %.6g * eta^%.6g; slope/eta^(1/nu) in "
                "[%.4g, %.4g]\n",
                nu, df.fit.coefficient, df.fit.exponent, df.slope_ratio_min, df.slope_ratio_max);
}

void run_zeros(RunContext& ctx) {
    const Config& c = ctx.cfg;
    int nu = static_cast<int>(c.get_int("model.nu", 2));
    int ell = static_cast<int>(c.get_int("model.ell", 2));
    int nb = static_cast<int>(c.get_int("branch.n", ell + 2));
    BranchTracer tr(nu, ell, nb);
    EigenBranch br = tr.trace(eta_grid_from(c, "zeros", -10.0, 100.0, 45, "uniform"),
                              ctx.workers);
    std::vector<ZeroCrossing> zs = detect_zeros(tr, br);

    CsvWriter w(ctx.artifact("zeros.csv"),
                {"branch", "eta_bar", "order_r", "alpha_local", "rounding_gap", "ambiguous"},
                c.hash(), "zeros");
    for (const ZeroCrossing& z : zs)
        w.row({double(z.branch), z.eta_bar, double(z.order_r), z.alpha_local, z.rounding_gap,
               z.ambiguous ? 1.0 : 0.0});
    ctx.summary.metrics["crossings"] = double(zs.size());
    ctx.summary.metrics["min_separation"] = min_crossing_separation(zs);
    std::printf("zeros (nu=%d, l=%d): %zu crossings, min separation %.6g\n", nu, ell, zs.size(),
                min_crossing_separation(zs));
}

void run_perturb(RunContext& ctx) {
    const Config& c = ctx.cfg;
    int nu_lo = static_cast<int>(c.get_int("perturb.nu_lo", 2));
    int nu_hi = static_cast<int>(c.get_int("perturb.nu_hi", 6));
    int ell_lo = static_cast<int>(c.get_int("perturb.ell_lo", 0));
    int ell_hi = static_cast<int>(c.get_int("perturb.ell_hi", 3));
    if (nu_lo < 2 || nu_hi < nu_lo || ell_lo < 0 || ell_hi < ell_lo)
        throw InvalidInput("perturb: invalid nu/ell ranges");

    CsvWriter w(ctx.artifact("perturb.csv"),
                {"nu", "ell", "omega2_exact", "omega2", "kappa", "kappa1_exact", "kappa2_exact",
                 "kappa3_exact", "kappa4"},
                c.hash(), "perturb");
    int rows = 0;
    for (int nu = nu_lo; nu <= nu_hi; ++nu)
        for (int ell = ell_lo; ell <= ell_hi; ++ell) {
            PerturbationResult pr = perturb_summary(nu, ell);
            DerivativeCoeffs dc = derivative_coeffs(nu, ell);
            w.row_cells({std::to_string(nu), std::to_string(ell), pr.omega2.str(),
                         CsvWriter::num(pr.omega2.convert_to<double>()), CsvWriter::num(pr.kappa),
                         dc.kappa1.str(), dc.kappa2.str(), dc.kappa3.str(),
                         CsvWriter::num(dc.kappa4)});
            ++rows;
        }
    ctx.summary.metrics["rows"] = rows;
    std::printf("perturb: %d exact rows (nu %d..%d, l %d..%d)\n", rows, nu_lo, nu_hi, ell_lo,
                ell_hi);
}

void run_ids(RunContext& ctx) {
    const Config& c = ctx.cfg;
    ModelParams p = params_from(c);
    CutoffSpec cs = cutoff_from(c);
    IdsOptions io;
    io.tau = c.get_num("ids.tau", 0.0);
    io.rel_tol = c.get_num("ids.rel_tol", io.rel_tol);
    io.abs_tol = c.get_num("ids.abs_tol", io.abs_tol);
    io.n_branch_cap = static_cast<int>(c.get_int("ids.branch_cap", io.n_branch_cap));
    io.workers = ctx.workers;
    IdsResult res = fiber_ids(p, cs, io);

    CsvWriter w(ctx.artifact("ids.csv"),
                {"value", "quad_error", "tail_bound", "edge_budget", "n_branches", "eta_lo",
                 "eta_hi", "solver_points"},
                c.hash(), "ids");
    w.row({res.value, res.quad_error, res.tail_bound, res.edge_budget, double(res.n_branches),
           res.eta_lo, res.eta_hi, double(res.solver_points)});
    ctx.summary.metrics["value"] = res.value;
    ctx.summary.metrics["quad_error"] = res.quad_error;
    std::printf("ids: %.8g (quad %.3g, tail %.3g, edge %.3g; %d branches)\n", res.value,
                res.quad_error, res.tail_bound, res.edge_budget, res.n_branches);
}

void run_weyl(RunContext& ctx) {
    const Config& c = ctx.cfg;
    ModelParams p = params_from(c);
    CutoffSpec cs = cutoff_from(c);
    WeylOptions wo;
    wo.tau = c.get_num("weyl.tau", 0.0);
    wo.cut_radius = c.get_num("weyl.cut_radius", 0.0);
    wo.workers = ctx.workers;
    WeylResult res = weyl_ids(p, cs, wo);

    CsvWriter w(ctx.artifact("weyl.csv"),
                {"value", "error", "value_single_level", "cut_radius", "cut_mass_bound",
                 "gamma_bar1", "max_levels"},
                c.hash(), "weyl");
    w.row({res.value, res.error, res.value_single_level, res.cut_radius, res.cut_mass_bound,
           res.gamma_bar1, res.max_levels});
    CsvWriter f(ctx.artifact("weyl_field.csv"), {"x1", "field", "levels"}, c.hash(), "weyl");
    for (const WeylFieldRow& row : res.field) f.row({row.x1, row.field, row.levels});
    ctx.summary.metrics["value"] = res.value;
    ctx.summary.metrics["error"] = res.error;
    std::printf("weyl: %.8g (error %.3g; single-level reading %.8g)\n", res.value, res.error,
                res.value_single_level);
}

void run_corr(RunContext& ctx) {
    const Config& c = ctx.cfg;
    ModelParams p = params_from(c);
    CutoffSpec cs = cutoff_from(c);
    CorrectionOptions co;
    co.tau = c.get_num("corr.tau", 0.0);
    co.half_width = c.get_num("corr.half_width", 0.0);
    co.workers = ctx.workers;
    CorrectionResult res = correction_term(p, cs.psi2, co);

    CsvWriter w(ctx.artifact("corr.csv"), {"x2", "fiber", "weyl", "correction", "error"},
                c.hash(), "corr");
    for (const CorrectionRow& row : res.rows)
        w.row({row.x2, row.fiber, row.weyl, row.correction, row.error});
    ctx.summary.metrics["value"] = res.value;
    ctx.summary.metrics["error_budget"] = res.error_budget;
    ctx.summary.metrics["window_growth"] = res.window_growth;
    std::printf("corr: %.8g (budget %.3g, window growth %.3g, half-width %.3g)\n", res.value,
                res.error_budget, res.window_growth, res.half_width);
}

void run_sweep(RunContext& ctx) {
    const Config& c = ctx.cfg;
    std::vector<double> hs = c.get_list("sweep.h_list", {0.25, 0.125});
    std::vector<double> mus = c.get_list("sweep.mu_list", {});
    double coupling = c.get_num("sweep.coupling", 1.0);
    if (!mus.empty() && mus.size() != hs.size())
        throw InvalidInput("sweep.mu_list must match sweep.h_list in length");

    std::vector<ModelParams> pts;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        ModelParams p = params_from(c);
        p.h = hs[i];
        p.mu = mus.empty() ? coupling / std::pow(hs[i], double(p.nu)) : mus[i];
        pts.push_back(p);
    }
    SweepOptions so;
    so.tau = c.get_num("sweep.tau", 0.0);
    so.box = box_from(c);
    if (so.box.n1 <= 0) so.box.n1 = 48;
    if (so.box.n2 <= 0) so.box.n2 = 48;
    so.with_correction = c.get_bool("sweep.correction", true);
    so.workers = ctx.workers;
    std::vector<SweepRecord> recs = remainder_sweep(pts, so);

    CsvWriter w(ctx.artifact("sweep.csv"),
                {"nu", "ell", "mu", "h", "tau", "fiber", "weyl", "correction", "oracle_lo",
                 "oracle_hi", "remainder", "normalized", "quad_error", "supercritical", "n1",
                 "n2", "skipped", "skip_reason"},
                c.hash(), "sweep");
    int done = 0;
    for (const SweepRecord& r : recs) {
        w.row_cells({std::to_string(r.nu), std::to_string(r.ell), CsvWriter::num(r.mu),
                     CsvWriter::num(r.h), CsvWriter::num(r.tau), CsvWriter::num(r.fiber),
                     CsvWriter::num(r.weyl), CsvWriter::num(r.correction),
                     CsvWriter::num(r.oracle_lo), CsvWriter::num(r.oracle_hi),
                     CsvWriter::num(r.remainder), CsvWriter::num(r.normalized),
                     CsvWriter::num(r.quad_error), r.supercritical ? "1" : "0",
                     std::to_string(r.n1), std::to_string(r.n2), r.skipped ? "1" : "0",
                     r.skip_reason});
        if (!r.skipped) ++done;
        std::printf("sweep h=%.6g mu=%.6g: %s remainder %.6g normalized %.6g\n", r.h, r.mu,
                    r.skipped ? "SKIPPED" : "ok", r.remainder, r.normalized);
    }
    ctx.summary.metrics["points"] = double(recs.size());
    ctx.summary.metrics["completed"] = double(done);
}

void run_oracle2d(RunContext& ctx) {
    const Config& c = ctx.cfg;
    ModelParams p = params_from(c);
    Box2D box = box_from(c);
    if (c.get_bool("box.auto", true)) {
        Box2D probe = box;
        probe.n1 = std::max(probe.n1, 3);
        probe.n2 = std::max(probe.n2, 3);
        auto [r1, r2] = required_grid(p, probe);
        box.n1 = std::max(box.n1, r1);
        box.n2 = std::max(box.n2, r2);
    }
    CutoffSpec cs = CutoffSpec::window(box.x1_lo, box.x1_hi, box.x2_lo, box.x2_hi);
    Oracle2dOptions oo;
    oo.tau = c.get_num("oracle.tau", 0.0);
    OracleIdsResult res = oracle_ids(p, cs, box, oo);

    CsvWriter w(ctx.artifact("oracle2d.csv"),
                {"value", "count_gap", "dim", "dense_path", "n1", "n2"}, c.hash(), "oracle2d");
    w.row({res.value, res.count_gap, double(res.dim), res.dense_path ? 1.0 : 0.0,
           double(box.n1), double(box.n2)});
    ctx.summary.metrics["value"] = res.value;
    ctx.summary.metrics["count_gap"] = res.count_gap;
    std::printf("oracle2d: %.8g (gap %.3g) on %dx%d grid, dim %lld%s\n", res.value,
                res.count_gap, box.n1, box.n2, res.dim, res.dense_path ? " (dense)" : "");
}

int run_verify(RunContext& ctx) {
    AcceptanceOptions ao;
    ao.quick = ctx.quick;
    ao.workers = ctx.workers;
    ao.scratch_dir = ctx.out;
    AcceptanceReport rep = run_acceptance(ao);

    CsvWriter w(ctx.artifact("verify.csv"), {"criterion", "name", "ran", "passed", "detail"},
                ctx.cfg.hash(), "verify");
    int failed = 0;
    for (const CriterionResult& r : rep.results) {
        w.row_cells({std::to_string(r.id), r.name, r.ran ? "1" : "0",
                     (r.ran && r.passed) ? "1" : "0", r.detail});
        if (r.ran && !r.passed) ++failed;
        ctx.summary.metrics["criterion_" + std::to_string(r.id) + "_seconds"] =
            r.elapsed_seconds;
        std::printf("criterion %2d  %-18s %s  (%.1fs)\n    %s\n", r.id, r.name.c_str(),
                    !r.ran ? "SKIP" : (r.passed ? "PASS" : "FAIL"), r.elapsed_seconds,
                    r.detail.c_str());
    }
    int ran = 0;
    for (const CriterionResult& r : rep.results) ran += r.ran ? 1 : 0;
    std::printf("acceptance: %s (%d/%d ran, %d failed)%s\n",
                rep.all_passed() ? "PASS" : "FAIL", ran, int(rep.results.size()), failed,
                ctx.quick ? " [quick subset]" : "");
    return rep.all_passed() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Band-function asymptotics and spectral-count toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    Common com;
    const std::vector<std::pair<std::string, std::string>> subs = {
        {"branch", "trace eigenvalue branches of the unit-scale well family"},
        {"fit-kappa", "power-law fit of a decaying branch against its predicted coefficient"},
        {"fit-decay", "exponential-smallness fit of the bottom branch (even degeneration)"},
        {"zeros", "locate and classify branch zero crossings"},
        {"perturb", "exact second-order and shape-derivative coefficients"},
        {"ids", "fiber-integrated phase-space count under a cutoff"},
        {"weyl", "pointwise Landau-level count under a cutoff"},
        {"corr", "next-order correction term (fiber minus pointwise count)"},
        {"sweep", "fiber vs 2D-oracle remainder over a parameter list"},
        {"oracle2d", "direct 2D eigenvalue count on a box"},
        {"verify", "run the acceptance suite and report per-criterion results"},
    };
    for (const auto& [name, desc] : subs) {
        CLI::App* s = app.add_subcommand(name, desc);
        s->add_option("--config", com.config_path, "key=value config file (INI sections)");
        s->add_option("--out", com.out_dir, "output directory (default: out)");
        s->add_option("--workers", com.workers, "worker threads (default: run.workers or all)");
        s->add_flag("--quick", com.quick, "verify: run the quick subset only");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2; // bad flags are configuration errors
    }

    const std::string name = app.get_subcommands().front()->get_name();
    auto t0 = std::chrono::steady_clock::now();

    RunContext ctx;
    ctx.summary.subcommand = name;
    ctx.summary.quick = com.quick;
    int code = 0;
    try {
        if (!com.config_path.empty()) ctx.cfg = Config::from_file(com.config_path);
        ctx.cfg.apply_env();
        ctx.out = com.out_dir;
        fs::create_directories(ctx.out);
        ctx.workers = resolve_workers(com, ctx.cfg);
        ctx.quick = com.quick;
        ctx.summary.config_hash = ctx.cfg.hash();
        ctx.summary.workers = ctx.workers;

        if (name == "branch") run_branch(ctx);
        else if (name == "fit-kappa") run_fit_kappa(ctx);
        else if (name == "fit-decay") run_fit_decay(ctx);
        else if (name == "zeros") run_zeros(ctx);
        else if (name == "perturb") run_perturb(ctx);
        else if (name == "ids") run_ids(ctx);
        else if (name == "weyl") run_weyl(ctx);
        else if (name == "corr") run_corr(ctx);
        else if (name == "sweep") run_sweep(ctx);
        else if (name == "oracle2d") run_oracle2d(ctx);
        else if (name == "verify") code = run_verify(ctx);
    } catch (const InvalidInput& e) {
        std::fprintf(stderr, "%s: invalid input: %s\n", name.c_str(), e.what());
        ctx.summary.notes.push_back(e.what());
        code = 2;
    } catch (const NumericalFailure& e) {
        std::fprintf(stderr, "%s: numerical failure: %s\n", name.c_str(), e.what());
        ctx.summary.notes.push_back(e.what());
        code = 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s: error: %s\n", name.c_str(), e.what());
        ctx.summary.notes.push_back(e.what());
        code = 3;
    }

    ctx.summary.exit_code = code;
    ctx.summary.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!ctx.out.empty()) {
        try {
            write_summary((fs::path(ctx.out) / "summary.json").string(), ctx.summary);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "summary: %s\n", e.what());
            if (code == 0) code = 2;
        }
    }
    return code;
}
