#include "magband/fiber_ids.hpp"

#include "magband/errors.hpp"
#include "magband/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

namespace magband {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct InnerResult {
    double value = 0.0;
    double err = 0.0;
    double edge = 0.0; // eta-measure of active transitional-weight states
    double tail = 0.0;
};

class InnerIntegrator {
public:
    InnerIntegrator(const BandTable& table, double lo, double hi, const IdsOptions& opts)
        : table_(table), lo_(lo), hi_(hi), opts_(opts),
          wmin_(1e-7 * (hi - lo)) {
        if (!(lo_ < hi_)) throw InvalidInput("fiber_ids: degenerate eta window");
        scan_.resize(opts_.scan_points);
        for (int i = 0; i < opts_.scan_points; ++i)
            scan_[i] = lo_ + (hi_ - lo_) * i / (opts_.scan_points - 1);
    }

    void prewarm(int workers) const {
        parallel_for(scan_.size(), workers,
                     [&](std::size_t i) { (void)table_.at_eta(scan_[i]); });
    }

    double g(double eta, double tau_t) const {
        auto pt = table_.at_eta(eta);
        double s = 0.0;
        for (std::size_t n = 0; n < pt->lambda.size(); ++n)
            if (pt->lambda[n] < tau_t) s += pt->weight[n];
        return s;
    }

    InnerResult run(double tau_t) const {
        const int nb = table_.n_branches();
        const int m = static_cast<int>(scan_.size());

        auto lam = [&](double eta, int n) { return table_.at_eta(eta)->lambda[n] - tau_t; };

        // Bisect one sign change to a breakpoint and charge its mass times
        // the position uncertainty: bisection width plus solver error over
        // the local slope.
        std::vector<double> bps;
        double bp_err = 0.0;
        auto take_crossing = [&](double a, double b, double fa, int n) {
            double va = fa, a0 = a, b0 = b;
            while (b - a > 1e-10 * std::max(1.0, std::abs(a))) {
                double mid = 0.5 * (a + b);
                double fm = lam(mid, n);
                if (fm == 0.0) { a = b = mid; break; }
                if ((fm < 0) == (va < 0)) { a = mid; va = fm; }
                else b = mid;
            }
            double bp = 0.5 * (a + b);
            bps.push_back(bp);
            auto pt = table_.at_eta(bp);
            double slope = std::abs(lam(b0, n) - lam(a0, n)) / (b0 - a0);
            double dpos = (b - a) + (slope > 0 ? pt->err[n] / slope : 0.0);
            bp_err += pt->weight[n] * dpos;
        };

        // Mandatory breakpoints where a branch crosses tau_t.
        for (int n = 0; n < nb; ++n)
            for (int i = 0; i + 1 < m; ++i) {
                double fa = lam(scan_[i], n);
                double fb = lam(scan_[i + 1], n);
                if (fa * fb < 0.0) take_crossing(scan_[i], scan_[i + 1], fa, n);
            }

        // A band can dip through tau_t and come back between two samples,
        // leaving equal signs at every scan point; the panel then starts
        // with zero Simpson defect and the dip is never seen.  Refine each
        // sampled extremum whose parabola vertex could plausibly reach the
        // other side (4x vertex-drop margin plus solver error) and, where
        // the refined extremum does cross, split its bracket into two
        // monotone halves and take their crossings.
        for (int n = 0; n < nb; ++n)
            for (int i = 1; i + 1 < m; ++i) {
                double fl = lam(scan_[i - 1], n), fc = lam(scan_[i], n),
                       fr = lam(scan_[i + 1], n);
                double s;
                if (fc <= fl && fc <= fr && fl > 0 && fc > 0 && fr > 0) s = 1.0;
                else if (fc >= fl && fc >= fr && fl < 0 && fc < 0 && fr < 0) s = -1.0;
                else continue;
                // Solver noise makes flat stretches zigzag, so every other
                // sample looks like an extremum there; demand a curvature
                // signal clear of the noise floor before paying for a
                // refinement, then a vertex estimate that could plausibly
                // reach the other side (4x margin: the parabola through
                // the flanks understates a dip narrower than the spacing).
                double curv = s * (fl + fr - 2.0 * fc);
                double noise = table_.at_eta(scan_[i])->err[n];
                if (!(curv > 6.0 * noise)) continue;
                double drop = (fl - fr) * (fl - fr) / (8.0 * curv);
                if (s * fc - 4.0 * drop - 3.0 * noise > 0.0) continue;

                double a = scan_[i - 1], b = scan_[i + 1];
                const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
                double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
                double f1 = s * lam(x1, n), f2 = s * lam(x2, n);
                while (b - a > 1e-9 * (hi_ - lo_)) {
                    if (f1 <= f2) {
                        b = x2; x2 = x1; f2 = f1;
                        x1 = b - gr * (b - a); f1 = s * lam(x1, n);
                    } else {
                        a = x1; x1 = x2; f1 = f2;
                        x2 = a + gr * (b - a); f2 = s * lam(x2, n);
                    }
                }
                double xm = 0.5 * (a + b);
                double fm = lam(xm, n);
                if (!(s * fm < 0.0)) continue;
                take_crossing(scan_[i - 1], xm, lam(scan_[i - 1], n), n);
                take_crossing(xm, scan_[i + 1], fm, n);
            }
        std::sort(bps.begin(), bps.end());

        // Panels must not span scan cells: the weight envelope dies inside
        // the window, so a wide breakpoint panel holds the whole count mass
        // as a bump at one edge, every low-depth Simpson sample lands on
        // zeros, and the refinement stops on a zero defect.  Cutting at the
        // scan points puts every scan-visible feature inside its own panel
        // (the midpoint solves are shared across thresholds by the table
        // cache, so the extra cost is one pass).
        std::vector<double> cuts(scan_.begin(), scan_.end());
        cuts.insert(cuts.end(), bps.begin(), bps.end());
        std::sort(cuts.begin(), cuts.end());
        std::vector<double> edges{lo_};
        for (double c : cuts)
            if (c > edges.back() + 1e-14 && c < hi_ - 1e-14) edges.push_back(c);
        edges.push_back(hi_);

        // Rough pass fixes the absolute tolerance split across panels.
        double rough = 0.0;
        std::vector<double> rough_panel(edges.size() - 1);
        for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
            double a = edges[p], b = edges[p + 1], mid = 0.5 * (a + b);
            rough_panel[p] = (b - a) / 6.0 *
                             (g(a, tau_t) + 4.0 * g(mid, tau_t) + g(b, tau_t));
            rough += std::abs(rough_panel[p]);
        }
        double tol_total = std::max(opts_.abs_tol, opts_.rel_tol * rough);

        InnerResult out;
        int budget = opts_.subdiv_budget;
        for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
            double a = edges[p], b = edges[p + 1];
            double tol = tol_total * (b - a) / (hi_ - lo_);
            double err = 0.0;
            out.value += adapt_simpson(a, b, tau_t, tol, err, budget);
            out.err += err;
        }
        out.err += bp_err;

        // Transition-zone measure: active branches whose cutoff weight is
        // neither ~0 nor ~1 (the states a hard-window comparison can miss).
        double prev_frac = edge_fraction(scan_[0], tau_t);
        for (int i = 0; i + 1 < m; ++i) {
            double next = edge_fraction(scan_[i + 1], tau_t);
            out.edge += 0.5 * (prev_frac + next) * (scan_[i + 1] - scan_[i]);
            prev_frac = next;
        }

        // Tail: endpoint mass times an exponential-decay length estimate.
        double d = 0.02 * (hi_ - lo_);
        for (int side = 0; side < 2; ++side) {
            double end = side ? hi_ : lo_;
            double inner = side ? hi_ - d : lo_ + d;
            double ge = g(end, tau_t), gi = g(inner, tau_t);
            if (ge <= 1e-14) { out.tail += ge; continue; }
            double len = (gi > ge) ? d / std::log(gi / ge) : (hi_ - lo_);
            out.tail += ge * 2.0 * std::max(len, d);
        }
        return out;
    }

private:
    double edge_fraction(double eta, double tau_t) const {
        auto pt = table_.at_eta(eta);
        double c = 0.0;
        for (std::size_t n = 0; n < pt->lambda.size(); ++n)
            if (pt->lambda[n] < tau_t && pt->weight[n] > 0.02 && pt->weight[n] < 0.98)
                c += 1.0;
        return c;
    }

    double adapt_simpson(double a, double b, double tau_t, double tol,
                         double& err, int& budget) const {
        double fa = g(a, tau_t), fb = g(b, tau_t), fm = g(0.5 * (a + b), tau_t);
        double s = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        return adapt_rec(a, b, fa, fm, fb, s, tau_t, tol, 0, err, budget);
    }

    double adapt_rec(double a, double b, double fa, double fm, double fb, double s,
                     double tau_t, double tol, int depth, double& err, int& budget) const {
        double m = 0.5 * (a + b);
        double flm = g(0.5 * (a + m), tau_t), frm = g(0.5 * (m + b), tau_t);
        double sl = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        double sr = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        double diff = sl + sr - s;
        if (std::abs(diff) <= 15.0 * tol) {
            err += std::abs(diff) / 15.0;
            return sl + sr + diff / 15.0;
        }
        // A branch grazing tau flickers the count at solver-noise scale, so
        // the defect never settles no matter how deep the recursion goes.
        // Below the width floor the cell's whole mass is within the floor
        // times the jump: accept it and charge the full defect, with no
        // Richardson credit.
        if (depth >= 24 || b - a <= wmin_) {
            err += std::abs(diff);
            return sl + sr;
        }
        if (--budget < 0) {
            char buf[160];
            std::snprintf(buf, sizeof(buf),
                          "fiber_ids: subdivision budget exhausted on cell [%.12g, %.12g]", a, b);
            throw NumericalFailure(buf);
        }
        return adapt_rec(a, m, fa, flm, fm, sl, tau_t, 0.5 * tol, depth + 1, err, budget) +
               adapt_rec(m, b, fm, frm, fb, sr, tau_t, 0.5 * tol, depth + 1, err, budget);
    }

    const BandTable& table_;
    double lo_, hi_;
    IdsOptions opts_;
    double wmin_;
    std::vector<double> scan_;
};

struct WindowPlan {
    double eta_lo = 0.0, eta_hi = 0.0;
    int n_branches = 2;
    double tau_max = 0.0;
};

WindowPlan plan_window_core(const ModelParams& params, const Bump1D& psi1,
                            double tau_max, const IdsOptions& opts,
                            bool fix_branches, int fixed_nb) {
    ScalingMap sc = rescale_to_unit(params);
    WindowPlan wp;
    wp.tau_max = tau_max;

    double bhat = std::max(std::abs(psi1.lo), std::abs(psi1.hi)) / sc.x_factor;
    // Window exit: the cutoff weight of a state centered at the well x = x_w
    // dies within a few state widths sigma ~ x_w^((1-nu)/2) past the wall, so
    // pad the wall by 16 widths at the exit scale instead of a flat margin
    // (a flat pad is merely loose at nu = 2 but grows as its nu-th power for
    // steeper degenerations).  Damped fixed point; the run's tail estimate
    // still audits the choice.
    double xw = bhat + 16.0;
    for (int it = 0; it < 64; ++it) {
        double pad = 16.0 * std::pow(std::max(1.0, xw), 0.5 * (1.0 - params.nu));
        xw = 0.5 * (xw + std::max(bhat + 2.0, bhat + pad));
    }
    double eta_exit = std::pow(xw, params.nu) / params.nu;
    wp.eta_hi = eta_exit;

    const double margin = 0.1 * sc.energy_factor + 1e-12;
    SolveOptions cheap = opts.solve;
    cheap.n_min = std::min(cheap.n_min, 240);
    cheap.target_rel = 1e-2;

    if (params.nu % 2 == 1) {
        wp.eta_lo = -eta_exit;
    } else {
        // Even nu: the whole spectrum rises ~ eta^2 for eta < 0; find where
        // the bottom branch clears tau_max and stays clear.
        double e = sc.energy_factor;
        double need = 2.0 * (2.0 * std::max(wp.tau_max, 0.0) / e + 4.0 * (params.ell + 1));
        double lo = -(std::sqrt(need) + 2.0);
        BranchTracer t(params.nu, params.ell, 1, cheap);
        for (int k = 0; k < 8; ++k) {
            if (0.5 * e * t.solve(lo).values[0] > wp.tau_max + margin) break;
            lo *= 1.4;
        }
        wp.eta_lo = lo;
    }

    if (fix_branches) {
        wp.n_branches = fixed_nb;
        return wp;
    }

    // Smallest branch count whose top member stays above tau_max on the
    // window; everything above is inactive by eigenvalue ordering.
    int nb = std::max(params.ell + 2, 2);
    for (;;) {
        BranchTracer t(params.nu, params.ell, nb, cheap);
        double mn = std::numeric_limits<double>::infinity();
        for (int k = 0; k <= 32; ++k) {
            double eta = wp.eta_lo + (wp.eta_hi - wp.eta_lo) * k / 32.0;
            mn = std::min(mn, 0.5 * sc.energy_factor * t.solve(eta).values[nb - 1]);
        }
        if (mn > wp.tau_max + margin) break;
        if (++nb > opts.n_branch_cap)
            throw NumericalFailure("fiber_ids: active branch count exceeds n_branch_cap");
    }
    wp.n_branches = nb;
    return wp;
}

WindowPlan plan_window(const ModelParams& params, const CutoffSpec& psi,
                       const IdsOptions& opts, bool fix_branches, int fixed_nb) {
    double wmax = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 64; ++i) {
        double x2 = psi.psi2.lo + (psi.psi2.hi - psi.psi2.lo) * i / 64.0;
        wmax = std::max(wmax, params.W_at(x2));
    }
    return plan_window_core(params, psi.psi1, opts.tau + 0.5 * wmax, opts,
                            fix_branches, fixed_nb);
}

IdsResult run_ids(const BandTable& table, const ModelParams& params,
                  const CutoffSpec& psi, const IdsOptions& opts, const WindowPlan& wp) {
    InnerIntegrator inner(table, wp.eta_lo, wp.eta_hi, opts);
    inner.prewarm(opts.workers);

    std::vector<double> xs, ws;
    for (auto [a, b] : bump_panels(psi.psi2, opts.x2_panels)) gauss8_append(a, b, xs, ws);

    bool w_const = true;
    double w0 = params.W_at(xs[0]);
    for (double x : xs)
        if (std::abs(params.W_at(x) - w0) > 1e-13 * (1.0 + std::abs(w0))) {
            w_const = false;
            break;
        }

    const ScalingMap& sc = table.scaling();
    const double pref = sc.eta_factor / (2.0 * kPi * params.h);

    // Weight-resolution budget: recompute the heaviest scan point at doubled
    // grid resolution once and take the worst per-branch weight shift.
    double wdiff = 0.0;
    {
        double best_eta = wp.eta_lo, best_g = -1.0;
        for (int i = 0; i < opts.scan_points; ++i) {
            double eta = wp.eta_lo + (wp.eta_hi - wp.eta_lo) * i / (opts.scan_points - 1);
            double gv = inner.g(eta, opts.tau + 0.5 * w0);
            if (gv > best_g) { best_g = gv; best_eta = eta; }
        }
        if (best_g > 0.0) {
            SolveOptions fine = opts.solve;
            fine.n_min = std::min(2 * fine.n_min, fine.n_max / 2);
            BranchTracer t(params.nu, params.ell, table.n_branches(), fine);
            PointSolve ps = t.solve(best_eta, true);
            auto pt = table.at_eta(best_eta);
            for (int n = 0; n < table.n_branches(); ++n) {
                double w = 0.0;
                const auto& v = ps.vectors[n];
                for (int i = 0; i < ps.domain.n; ++i)
                    w += v[i] * v[i] *
                         psi.psi1(sc.x_factor * ps.to_physical(ps.domain.point(i)));
                wdiff = std::max(wdiff, std::abs(w - pt->weight[n]));
            }
        }
    }

    IdsResult out;
    out.n_branches = table.n_branches();
    out.eta_lo = wp.eta_lo;
    out.eta_hi = wp.eta_hi;

    if (w_const) {
        InnerResult ir = inner.run(opts.tau + 0.5 * w0);
        double ipsi2 = 0.0;
        for (std::size_t j = 0; j < xs.size(); ++j) ipsi2 += ws[j] * psi.psi2(xs[j]);
        out.value = pref * ir.value * ipsi2;
        out.quad_error = pref * (ir.err + wdiff * std::abs(ir.value)) * ipsi2;
        out.tail_bound = pref * ir.tail * ipsi2;
        out.edge_budget = pref * ir.edge * ipsi2;
    } else {
        std::vector<InnerResult> irs(xs.size());
        parallel_for(xs.size(), opts.workers, [&](std::size_t j) {
            irs[j] = inner.run(opts.tau + 0.5 * params.W_at(xs[j]));
        });
        std::vector<double> vals(xs.size()), errs(xs.size()), tails(xs.size()),
            edges(xs.size());
        for (std::size_t j = 0; j < xs.size(); ++j) {
            double wq = ws[j] * psi.psi2(xs[j]);
            vals[j] = wq * irs[j].value;
            errs[j] = std::abs(wq) * (irs[j].err + wdiff * std::abs(irs[j].value));
            tails[j] = std::abs(wq) * irs[j].tail;
            edges[j] = std::abs(wq) * irs[j].edge;
        }
        out.value = pref * pairwise_sum(vals);
        out.quad_error = pref * pairwise_sum(errs);
        out.tail_bound = pref * pairwise_sum(tails);
        out.edge_budget = pref * pairwise_sum(edges);
    }
    out.solver_points = static_cast<long long>(table.cache_size());
    return out;
}

} // namespace

IdsResult fiber_ids(const ModelParams& params, const CutoffSpec& psi,
                    const IdsOptions& opts) {
    params.validate();
    psi.validate();
    WindowPlan wp = plan_window(params, psi, opts, false, 0);
    BandTable table(params, wp.n_branches, psi.psi1, opts.solve);
    return run_ids(table, params, psi, opts, wp);
}

IdsResult fiber_ids_with_table(const BandTable& table, const ModelParams& params,
                               const CutoffSpec& psi, const IdsOptions& opts) {
    params.validate();
    psi.validate();
    WindowPlan wp = plan_window(params, psi, opts, true, table.n_branches());
    return run_ids(table, params, psi, opts, wp);
}

int fiber_active_branches(const ModelParams& params, const CutoffSpec& psi,
                          const IdsOptions& opts) {
    params.validate();
    psi.validate();
    return plan_window(params, psi, opts, false, 0).n_branches;
}

InnerIds fiber_ids_inner(const BandTable& table, const ModelParams& params,
                         double tau_w, const IdsOptions& opts, double tau_plan) {
    params.validate();
    double tp = std::isfinite(tau_plan) ? std::max(tau_plan, tau_w) : tau_w;
    WindowPlan wp =
        plan_window_core(params, table.psi1(), tp, opts, true, table.n_branches());
    InnerIntegrator inner(table, wp.eta_lo, wp.eta_hi, opts);
    inner.prewarm(opts.workers);
    InnerResult ir = inner.run(tau_w);

    const double pref = table.scaling().eta_factor / (2.0 * kPi * params.h);
    InnerIds out;
    out.value = pref * ir.value;
    out.quad_error = pref * ir.err;
    out.tail_bound = pref * ir.tail;
    out.edge_budget = pref * ir.edge;
    out.eta_lo = wp.eta_lo;
    out.eta_hi = wp.eta_hi;
    return out;
}

} // namespace magband
