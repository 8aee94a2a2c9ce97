#include "magband/correction.hpp"

#include "magband/bands.hpp"
#include "magband/errors.hpp"
#include "magband/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace magband {

namespace {

struct InnerPair {
    double fiber = 0.0, weyl = 0.0, err = 0.0;
};

InnerPair corr_at(const BandTable& table, const ModelParams& params,
                  const Bump1D& win, double tau_w, double tau_plan,
                  const CorrectionOptions& o, int workers) {
    IdsOptions io = o.ids;
    io.workers = workers;
    // One planning ceiling for every x2 node: the scan grids coincide, so
    // the shared band table serves all nodes from one set of solves.
    InnerIds f = fiber_ids_inner(table, params, tau_w, io, tau_plan);

    WeylOptions wo = o.weyl;
    wo.tau = 0.0;
    wo.cut_radius = 0.0;
    WeylInner w = weyl_ids_inner(params, win, tau_w, wo);

    InnerPair p;
    p.fiber = f.value;
    p.weyl = w.value;
    p.err = f.quad_error + f.tail_bound + w.error;
    return p;
}

} // namespace

CorrectionResult correction_term(const ModelParams& params, const Bump1D& psi2,
                                 const CorrectionOptions& opts) {
    params.validate();
    psi2.validate();

    CorrectionResult out;
    out.half_width = opts.half_width > 0.0 ? opts.half_width : 0.35;
    const Bump1D win{-out.half_width, out.half_width, 0.0};

    std::vector<double> xs, ws;
    for (auto [a, b] : bump_panels(psi2, opts.ids.x2_panels)) gauss8_append(a, b, xs, ws);

    bool w_const = true;
    const double w0 = params.W_at(xs[0]);
    double wmax = w0;
    for (double x : xs) {
        double wx = params.W_at(x);
        wmax = std::max(wmax, wx);
        if (std::abs(wx - w0) > 1e-13 * (1.0 + std::abs(w0))) w_const = false;
    }
    const double tau_plan = opts.tau + 0.5 * wmax;

    CutoffSpec cs;
    cs.psi1 = win;
    cs.psi2 = psi2;
    IdsOptions plan = opts.ids;
    plan.tau = opts.tau;
    plan.workers = opts.workers;
    const int nb = fiber_active_branches(params, cs, plan);
    BandTable table(params, nb, win, opts.ids.solve);

    std::vector<InnerPair> pairs(w_const ? 1 : xs.size());
    if (w_const) {
        pairs[0] =
            corr_at(table, params, win, opts.tau + 0.5 * w0, tau_plan, opts, opts.workers);
    } else {
        // Serve the shared scan grid once before fanning out, so the node
        // threads hit a warm table instead of racing to solve it.
        corr_at(table, params, win, tau_plan, tau_plan, opts, opts.workers);
        parallel_for(xs.size(), opts.workers, [&](std::size_t j) {
            pairs[j] = corr_at(table, params, win,
                               opts.tau + 0.5 * params.W_at(xs[j]), tau_plan, opts, 1);
        });
    }

    std::vector<double> vals(xs.size()), errs(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) {
        const InnerPair& p = pairs[w_const ? 0 : j];
        CorrectionRow row;
        row.x2 = xs[j];
        row.fiber = p.fiber;
        row.weyl = p.weyl;
        row.correction = p.fiber - p.weyl;
        row.error = p.err;
        out.rows.push_back(row);
        double wq = ws[j] * psi2(xs[j]);
        vals[j] = wq * row.correction;
        errs[j] = std::abs(wq) * row.error;
    }
    out.value = pairwise_sum(vals);
    out.error_budget = pairwise_sum(errs);

    // Window-independence check: redo the x2 midpoint with a 1.4x window.
    {
        const double a2 = 1.4 * out.half_width;
        const Bump1D win2{-a2, a2, 0.0};
        CutoffSpec cs2;
        cs2.psi1 = win2;
        cs2.psi2 = psi2;
        const int nb2 = fiber_active_branches(params, cs2, plan);
        BandTable table2(params, nb2, win2, opts.ids.solve);

        double x2_mid = 0.5 * (psi2.lo + psi2.hi);
        double tau_w = opts.tau + 0.5 * params.W_at(x2_mid);
        InnerPair wide = corr_at(table2, params, win2, tau_w, tau_w, opts, opts.workers);
        InnerPair base = w_const ? pairs[0]
                                 : corr_at(table, params, win, tau_w, tau_plan, opts,
                                           opts.workers);
        out.window_growth =
            std::abs((wide.fiber - wide.weyl) - (base.fiber - base.weyl));

        double ipsi2 = 0.0;
        for (std::size_t j = 0; j < xs.size(); ++j) ipsi2 += ws[j] * psi2(xs[j]);
        out.error_budget += out.window_growth * std::abs(ipsi2);
    }
    return out;
}

} // namespace magband
