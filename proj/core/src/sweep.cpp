#include "magband/sweep.hpp"

#include "magband/errors.hpp"

#include <algorithm>
#include <cmath>

namespace magband {

std::vector<SweepRecord> remainder_sweep(const std::vector<ModelParams>& points,
                                         const SweepOptions& opts) {
    std::vector<SweepRecord> records;
    records.reserve(points.size());

    for (const ModelParams& p : points) {
        SweepRecord rec;
        rec.nu = p.nu;
        rec.ell = p.ell;
        rec.mu = p.mu;
        rec.h = p.h;
        rec.tau = opts.tau;
        rec.supercritical = p.mu * std::pow(p.h, p.nu) >= 1.0;

        try {
            p.validate();

            Box2D box = opts.box;
            if (opts.auto_resolution) {
                auto [r1, r2] = required_grid(p, box);
                box.n1 = std::max(box.n1, r1);
                box.n2 = std::max(box.n2, r2);
            }
            box.validate(opts.oracle.cell_cap);
            rec.n1 = box.n1;
            rec.n2 = box.n2;

            const CutoffSpec psi =
                CutoffSpec::window(box.x1_lo, box.x1_hi, box.x2_lo, box.x2_hi);

            IdsOptions ids = opts.ids;
            ids.tau = opts.tau;
            ids.workers = opts.workers;
            IdsResult fib = fiber_ids(p, psi, ids);
            rec.fiber = fib.value;

            WeylOptions wo = opts.weyl;
            wo.tau = opts.tau;
            wo.workers = opts.workers;
            WeylResult wy = weyl_ids(p, psi, wo);
            rec.weyl = wy.value;

            if (opts.with_correction) {
                CorrectionOptions co = opts.corr;
                co.tau = opts.tau;
                co.workers = opts.workers;
                co.ids = opts.ids;
                co.weyl = opts.weyl;
                rec.correction = correction_term(p, psi.psi2, co).value;
            }

            Oracle2dOptions oo = opts.oracle;
            oo.tau = opts.tau;
            OracleIdsResult orc = oracle_ids(p, psi, box, oo);
            rec.oracle_lo = static_cast<double>(orc.count.lo);
            rec.oracle_hi = static_cast<double>(orc.count.hi);

            rec.remainder = std::abs(orc.value - fib.value);
            rec.normalized = rec.supercritical
                                 ? rec.remainder
                                 : rec.remainder * std::pow(p.mu, 1.0 / p.nu) * p.h;
            rec.quad_error = fib.quad_error + fib.tail_bound + fib.edge_budget +
                             0.5 * orc.count_gap;
        } catch (const std::exception& e) {
            rec.skipped = true;
            rec.skip_reason = e.what();
        }
        records.push_back(rec);
    }
    return records;
}

} // namespace magband
