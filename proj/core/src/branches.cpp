#include "magband/branches.hpp"

#include "magband/errors.hpp"
#include "magband/factorized.hpp"
#include "magband/parallel.hpp"
#include "magband/stats.hpp"
#include "magband/tridiag_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace magband {

namespace {

double asym_scale(int nu, double eta) {
    return std::pow(1.0 + std::abs(eta), double(nu - 1) / double(nu));
}

double sample_min(const std::function<double(double)>& f, double lo, double hi, int n) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i) {
        double v = f(lo + (hi - lo) * i / n);
        if (std::isfinite(v) && v < best) best = v;
    }
    return best;
}

struct FrameSolve {
    PointSolve ps;
    Grid1D domain{0.0, 1.0, 3}; // accepted solve domain (frame coordinates)
    bool energy_ok = true;      // false: recentered guard blocked the needed budget
};

FrameSolve solve_in_frame(int nu, int ell, double eta, int nb,
                          const SolveOptions& opts, const PilotFrame& frame,
                          bool with_vectors) {
    FrameSolve out;
    const double s = frame.recentered ? 1.0 : asym_scale(nu, eta);

    double scan_lo, scan_hi;
    if (frame.recentered) {
        double eps = std::pow(frame.x_offset, -0.5 * (nu + 1));
        scan_lo = std::max(-0.89 / eps, -60.0);
        scan_hi = 60.0;
    } else {
        double r = 2.0 + 1.6 * std::pow(nu * (std::abs(eta) + 2.0), 1.0 / nu);
        scan_lo = -r;
        scan_hi = r;
    }
    double vmin = sample_min(frame.veff, scan_lo, scan_hi, 800);

    double e_max = vmin + 2.0 * (nb + ell + 2) * s;
    const double e_cap = frame.recentered
                             ? 0.9 * frame.energy_guard
                             : std::numeric_limits<double>::infinity();
    if (e_max > e_cap) e_max = e_cap;
    const double margin = 0.7 * s;

    auto build = [&frame](const Grid1D& g) { return assemble_schrodinger(frame.veff, 1.0, g); };

    for (int attempt = 0; attempt < 8; ++attempt) {
        Grid1D domain = pilot_frame_domain(nu, ell, eta, frame, e_max, 3, opts.pad_lengths);
        double length = domain.x_max - domain.x_min;
        double kmax = std::sqrt(std::max(e_max - vmin, 1.0));
        int n = std::clamp(static_cast<int>(4.0 * length * kmax) + 1, opts.n_min, opts.n_max);

        bool contained = false;
        EigenResult res;
        while (true) {
            Grid1D coarse{domain.x_min, domain.x_max, n};
            Grid1D fine{domain.x_min, domain.x_max, 2 * n + 1};
            res = refine_richardson(build, nb, coarse, fine, opts.rtol);
            if (res.values[nb - 1] > e_max - margin) break; // need a larger energy box

            contained = true;
            bool accurate = true;
            for (int j = 0; j < nb; ++j) {
                double tol = std::max(opts.target_rel * std::abs(res.values[j]),
                                      1e-12 * std::max(1.0, s));
                if (res.error_estimates[j] > tol) { accurate = false; break; }
            }
            if (accurate || 2 * n + 1 > opts.n_max) break;
            n = std::min(2 * n, opts.n_max);
        }

        if (contained) {
            out.ps.values = res.values;
            out.ps.errors = res.error_estimates;
            out.ps.recentered = frame.recentered;
            out.ps.grid_n = 2 * n + 1;
            out.domain = Grid1D{domain.x_min, domain.x_max, n};
            if (with_vectors) {
                // Vectors at coarse-grid accuracy suffice for quadratic
                // functionals like cutoff weights.
                Grid1D coarse{domain.x_min, domain.x_max, n};
                TridiagOperator op = build(coarse);
                EigenResult cres = eigen_lowest_k(op, nb, opts.rtol);
                out.ps.domain = coarse;
                out.ps.x_offset = frame.x_offset;
                out.ps.x_scale = frame.x_scale;
                out.ps.reflected = frame.reflected;
                out.ps.vectors.reserve(nb);
                for (int j = 0; j < nb; ++j) {
                    std::vector<std::vector<double>> prior;
                    for (int q = 0; q < j; ++q)
                        if (std::abs(cres.values[q] - cres.values[j]) <
                            1e-3 * std::max(1.0, std::abs(cres.values[j])))
                            prior.push_back(out.ps.vectors[q]);
                    out.ps.vectors.push_back(eigenvector(op, cres.values[j], opts.rtol, prior));
                }
            }
            if (frame.energy_scale != 1.0) {
                for (double& v : out.ps.values) v *= frame.energy_scale;
                for (double& e : out.ps.errors) e *= frame.energy_scale;
            }
            return out;
        }

        double next = vmin + 1.7 * (e_max - vmin) + s;
        if (next > e_cap) {
            out.energy_ok = false; // caller falls back to the literal frame
            return out;
        }
        e_max = next;
    }
    throw NumericalFailure("branch solve: energy box failed to contain the requested branches");
}

} // namespace

BranchTracer::BranchTracer(int nu, int ell, int n_branches, SolveOptions opts)
    : nu_(nu), ell_(ell), nb_(n_branches), opts_(opts) {
    if (nu < 2) throw InvalidInput("BranchTracer: nu must be >= 2");
    if (ell < 0) throw InvalidInput("BranchTracer: ell must be >= 0");
    if (n_branches < 1) throw InvalidInput("BranchTracer: need at least one branch");
    if (!(opts_.rtol > 0) || !(opts_.target_rel > 0) || opts_.n_min < 8 ||
        opts_.n_max < 2 * opts_.n_min)
        throw InvalidInput("BranchTracer: invalid solve options");
}

PointSolve BranchTracer::solve(double eta, bool with_vectors) const {
    if (!std::isfinite(eta)) throw InvalidInput("BranchTracer::solve: eta not finite");

    // The factorized bottom route works on the untransformed generator, and
    // l = 0 traces never need extreme well distances, so stay literal there.
    double gswitch = (ell_ == 0) ? std::numeric_limits<double>::infinity()
                                 : opts_.gamma_switch;
    PilotFrame frame = pilot_frame(nu_, ell_, eta, gswitch);
    if (frame.recentered) {
        // Well branches sit near frame energies 2(n - l); the solve needs the
        // top requested branch plus the containment margin under the guard.
        double e_need = 2.0 * (nb_ - 1 - ell_) + 1.5;
        if (e_need > 0.9 * frame.energy_guard)
            frame = pilot_frame(nu_, ell_, eta, std::numeric_limits<double>::infinity());
    }

    FrameSolve fs = solve_in_frame(nu_, ell_, eta, nb_, opts_, frame, with_vectors);
    if (!fs.energy_ok) {
        frame = pilot_frame(nu_, ell_, eta, std::numeric_limits<double>::infinity());
        fs = solve_in_frame(nu_, ell_, eta, nb_, opts_, frame, with_vectors);
        if (!fs.energy_ok)
            throw NumericalFailure("BranchTracer::solve: literal frame rejected its own energy box");
    }
    PointSolve ps = std::move(fs.ps);

    if (ell_ == 0) {
        // Bottom branch from the factorization: exact at l = 0 and accurate
        // in relative terms when the value is exponentially small.  The
        // frame is literal here, so its domain is physical coordinates and
        // the generator is the untransformed eta - x^nu/nu (|eta| when the
        // odd-nu solve was reflected).
        int nu = nu_;
        double eta_g = frame.reflected ? std::abs(eta) : eta;
        auto g_used = [nu, eta_g](double x) {
            double p = 1.0;
            for (int i = 0; i < nu; ++i) p *= x;
            return eta_g - p / nu;
        };
        // The factorized bottom is sigma_min^2 with sigma ~ exp(-(max rise
        // of A)) where A = int_0^x g, and a Dirichlet edge inflates it to
        // exp(-(A_max - A(edge))) whenever the kernel direction has not yet
        // decayed past the full rise there.  The Schrodinger domain is
        // padded only for lambda <= e_max states, so the factorization gets
        // its own domain from the cumulative action, and its own grid sized
        // to the discrete-action accuracy: each cell multiplies the growth
        // factor by exp(O((g dx)^3)), so log(lambda) carries
        // ~dx^2/12 int g_+^3 and dx must keep the extrapolation pair within
        // a fraction of a log unit.  When that needs more than the cap the
        // run stays at the cap and the error guard arbitrates: a bottom far
        // below double range still comes out as an honest zero.  Only the
        // value and its error are replaced; the eigenvector keeps the frame
        // solve's grid, where the O(1) spectral gap makes it well resolved.
        const int m = 4000;
        double w = 4.0 + 3.4 * std::pow(nu_ * (std::abs(eta_g) + 2.0), 1.0 / nu_);
        double dxp = 2.0 * w / m;
        std::vector<double> act(m + 1, 0.0);
        for (int i = 0; i < m; ++i)
            act[i + 1] = act[i] + g_used(-w + (i + 0.5) * dxp) * dxp;
        // Max rise of the action over ordered pairs, not the global max:
        // for even nu the cumulative A starts at its supremum, so the rise
        // must be scanned against the running minimum.
        int ipmin = 0, imax = 0, icur = 0;
        double s_rise = 0.0;
        for (int i = 1; i <= m; ++i) {
            if (act[i] < act[icur]) icur = i;
            if (act[i] - act[icur] > s_rise) {
                s_rise = act[i] - act[icur];
                imax = i;
                ipmin = icur;
            }
        }

        Grid1D dom = fs.domain;
        if (s_rise >= 10.0) {
            double drop = std::min(s_rise, 370.0) + 30.0;
            int ir = imax;
            while (ir < m && act[imax] - act[ir] < drop) ++ir;
            // The rise side can hold far more action than the Dirichlet
            // edge needs (odd nu: A climbs all the way from the left edge),
            // so trim it to the same capped drop; spending grid on exp(+A)
            // growth past that no longer moves the bottom.
            int il = ipmin;
            while (il < imax && act[imax] - act[il + 1] >= drop) ++il;
            double gamma = std::pow(nu_ * std::max(std::abs(eta_g), 1.0), 1.0 / nu_);
            double pad = 2.0 + std::min(1.0, std::pow(gamma, -0.5 * (nu_ - 1)));
            dom = Grid1D{-w + il * dxp - pad, -w + ir * dxp + pad, 0};
        }

        double span = dom.x_max - dom.x_min;
        double gamma = std::pow(nu_ * std::max(std::abs(eta_g), 1.0), 1.0 / nu_);
        double width = std::min(1.0, std::pow(gamma, -0.5 * (nu_ - 1)));
        double s3 = 0.0;
        {
            const int ms = 800;
            double dxs = span / ms;
            for (int i = 0; i < ms; ++i) {
                double gv = g_used(dom.x_min + (i + 0.5) * dxs);
                if (gv > 0.0) s3 += gv * gv * gv * dxs;
            }
        }
        double dx_t = std::min({0.02, width / 25.0, std::sqrt(4.4 / std::max(s3, 1.0))});
        double n_need = std::ceil(span / dx_t);
        const int n_cap = 24000;
        int n_run = (n_need > n_cap) ? n_cap : std::max(1201, static_cast<int>(n_need));
        Grid1D coarse{dom.x_min, dom.x_max, n_run};
        try {
            RefinedValue rv = ground_factorized_refined(g_used, 1.0, coarse);
            bool ordered = nb_ == 1 || rv.value < ps.values[1];
            bool resolved = rv.error <= std::max(0.2 * rv.value, ps.errors[0]);
            if (rv.value >= 0.0 && ordered && resolved) {
                ps.values[0] = rv.value;
                ps.errors[0] = rv.error;
                ps.factorized_bottom = true;
            }
        } catch (const NumericalFailure&) {
            // 1/sigma beyond double range.  The Golub-Kahan Sturm count on
            // the factor stays exact arbitrarily far below the matrix
            // scale, so certify the bottom under the representability
            // floor and report a clean zero (odd nu carries an exact zero
            // mode; very deep even-nu bottoms round to zero in double).
            if (ground_factorized_count_below(g_used, 1.0, coarse, 1e-150) >= 1 &&
                (nb_ == 1 || ps.values[1] > 0.0)) {
                ps.values[0] = 0.0;
                ps.errors[0] = 1e-300;
                ps.factorized_bottom = true;
            }
        }
    }
    return ps;
}

EigenBranch BranchTracer::trace(const std::vector<double>& eta_grid, int workers) const {
    if (eta_grid.empty()) throw InvalidInput("trace: empty eta grid");
    for (std::size_t i = 0; i + 1 < eta_grid.size(); ++i)
        if (!(eta_grid[i] < eta_grid[i + 1]))
            throw InvalidInput("trace: eta grid must be strictly increasing");

    std::vector<PointSolve> pts(eta_grid.size());
    parallel_for(eta_grid.size(), workers, [&](std::size_t i) { pts[i] = solve(eta_grid[i]); });

    EigenBranch out;
    out.nu = nu_;
    out.ell = ell_;
    out.eta_grid = eta_grid;
    out.values.assign(nb_, std::vector<double>(eta_grid.size()));
    out.errors.assign(nb_, std::vector<double>(eta_grid.size()));
    for (std::size_t i = 0; i < eta_grid.size(); ++i)
        for (int b = 0; b < nb_; ++b) {
            out.values[b][i] = pts[i].values[b];
            out.errors[b][i] = pts[i].errors[b];
        }
    return out;
}

std::vector<double> eta_grid_uniform(double lo, double hi, int n) {
    if (!(lo < hi) || n < 2) throw InvalidInput("eta_grid_uniform: need lo < hi and n >= 2");
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
    return g;
}

std::vector<double> eta_grid_geometric(double lo, double hi, int n) {
    if (!(0 < lo && lo < hi) || n < 2)
        throw InvalidInput("eta_grid_geometric: need 0 < lo < hi and n >= 2");
    std::vector<double> g(n);
    double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i) g[i] = std::exp(llo + (lhi - llo) * i / (n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::vector<SpacingRow> spacing_stats(const EigenBranch& branch) {
    if (branch.n_branches() < 2) throw InvalidInput("spacing_stats: need >= 2 branches");
    std::vector<SpacingRow> rows;
    rows.reserve(branch.eta_grid.size() * (branch.n_branches() - 1));
    for (std::size_t i = 0; i < branch.eta_grid.size(); ++i) {
        double sc = asym_scale(branch.nu, branch.eta_grid[i]);
        for (int b = 0; b + 1 < branch.n_branches(); ++b) {
            SpacingRow r;
            r.eta = branch.eta_grid[i];
            r.n = b;
            r.gap = branch.values[b + 1][i] - branch.values[b][i];
            r.normalized = r.gap / sc;
            rows.push_back(r);
        }
    }
    return rows;
}

PowerLawFit fit_power_law(const EigenBranch& branch, int n, double eta_lo, double eta_hi) {
    if (n < 0 || n >= branch.n_branches()) throw InvalidInput("fit_power_law: branch index");
    if (!(0 < eta_lo && eta_lo < eta_hi)) throw InvalidInput("fit_power_law: window must be positive");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < branch.eta_grid.size(); ++i) {
        double eta = branch.eta_grid[i];
        if (eta < eta_lo || eta > eta_hi) continue;
        double v = branch.values[n][i];
        if (!(v > 0.0))
            throw InvalidInput("fit_power_law: nonpositive branch value inside the window");
        xs.push_back(std::log(eta));
        ys.push_back(std::log(v));
    }
    if (xs.size() < 3) throw InvalidInput("fit_power_law: fewer than 3 points in window");
    LineFit lf = fit_line(xs, ys);
    PowerLawFit fit;
    fit.exponent = lf.slope;
    fit.coefficient = std::exp(lf.intercept);
    fit.eta_lo = eta_lo;
    fit.eta_hi = eta_hi;
    fit.points = static_cast<int>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double rel = std::abs(std::expm1(lf.intercept + lf.slope * xs[i] - ys[i]));
        fit.max_relative_residual = std::max(fit.max_relative_residual, rel);
    }
    return fit;
}

DecayFit fit_exponential_decay(const EigenBranch& branch, int n, double eta_lo, double eta_hi) {
    if (n < 0 || n >= branch.n_branches()) throw InvalidInput("fit_exponential_decay: branch index");
    if (!(0 < eta_lo && eta_lo < eta_hi))
        throw InvalidInput("fit_exponential_decay: window must be positive");

    std::vector<double> xs, ys;            // log eta vs log(-log value)
    std::vector<double> etas_used, logv;   // for the derivative check
    for (std::size_t i = 0; i < branch.eta_grid.size(); ++i) {
        double eta = branch.eta_grid[i];
        if (eta < eta_lo || eta > eta_hi) continue;
        double v = branch.values[n][i];
        // Representable: positive, small, and resolved in relative terms.
        // The factorized bottom keeps relative accuracy down to ~1e-290,
        // so the window is gated by the per-point error, not a fixed floor.
        if (!(v > 1e-300 && v < 0.5)) continue;
        if (!(branch.errors[n][i] <= 0.2 * v)) continue;
        xs.push_back(std::log(eta));
        ys.push_back(std::log(-std::log(v)));
        etas_used.push_back(eta);
        logv.push_back(std::log(v));
    }
    if (xs.size() < 3)
        throw InvalidInput("fit_exponential_decay: no representable decay window");

    LineFit lf = fit_line(xs, ys);
    DecayFit out;
    out.fit.exponent = lf.slope;
    out.fit.coefficient = std::exp(lf.intercept);
    out.fit.eta_lo = eta_lo;
    out.fit.eta_hi = eta_hi;
    out.fit.points = static_cast<int>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double rel = std::abs(std::expm1(lf.intercept + lf.slope * xs[i] - ys[i]));
        out.fit.max_relative_residual = std::max(out.fit.max_relative_residual, rel);
    }

    out.slope_ratio_min = std::numeric_limits<double>::infinity();
    out.slope_ratio_max = -out.slope_ratio_min;
    for (std::size_t i = 1; i + 1 < etas_used.size(); ++i) {
        double d = (logv[i + 1] - logv[i - 1]) / (etas_used[i + 1] - etas_used[i - 1]);
        double ratio = (-d) / std::pow(etas_used[i], 1.0 / branch.nu);
        out.slope_ratio_min = std::min(out.slope_ratio_min, ratio);
        out.slope_ratio_max = std::max(out.slope_ratio_max, ratio);
        ++out.derivative_points;
    }
    if (out.derivative_points == 0)
        throw InvalidInput("fit_exponential_decay: too few points for the derivative check");
    return out;
}

std::vector<ZeroCrossing> detect_zeros(const BranchTracer& tracer, const EigenBranch& branch) {
    std::vector<ZeroCrossing> out;
    const std::size_t m = branch.eta_grid.size();
    double sc_max = asym_scale(branch.nu, std::max(std::abs(branch.eta_grid.front()),
                                                   std::abs(branch.eta_grid.back())));
    for (int b = 0; b < branch.n_branches(); ++b) {
        double maxabs = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            maxabs = std::max(maxabs, std::abs(branch.values[b][i]));
        if (maxabs <= 1e-8 * (1.0 + sc_max)) continue; // identically-zero branch

        for (std::size_t i = 0; i + 1 < m; ++i) {
            double va = branch.values[b][i], vb = branch.values[b][i + 1];
            if (!(va * vb < 0.0)) continue;

            double lo = branch.eta_grid[i], hi = branch.eta_grid[i + 1];
            double flo = va;
            for (int it = 0; it < 48 && hi - lo > 1e-9 * std::max(1.0, std::abs(lo)); ++it) {
                double mid = 0.5 * (lo + hi);
                double fm = tracer.solve(mid).values[b];
                if (fm == 0.0) { lo = hi = mid; break; }
                if ((fm < 0.0) == (flo < 0.0)) { lo = mid; flo = fm; }
                else hi = mid;
            }

            ZeroCrossing zc;
            zc.eta_bar = 0.5 * (lo + hi);
            zc.branch = b;

            // Local order from a log-log slope just off the crossing.
            double d0 = 0.5 * (branch.eta_grid[i + 1] - branch.eta_grid[i]);
            std::vector<double> lx, ly, lam, del;
            for (int k = 0; k < 8; ++k) {
                double delta = d0 * std::pow(0.5, k);
                double eta_s = zc.eta_bar + delta;
                if (eta_s > branch.eta_grid.back()) continue;
                double val = tracer.solve(eta_s).values[b];
                if (std::abs(val) < 1e-10 * (1.0 + sc_max)) continue;
                lx.push_back(std::log(delta));
                ly.push_back(std::log(std::abs(val)));
                lam.push_back(val);
                del.push_back(delta);
            }
            if (lx.size() >= 3) {
                LineFit lf = fit_line(lx, ly);
                double r_raw = lf.slope;
                zc.order_r = std::max(1, static_cast<int>(std::lround(r_raw)));
                zc.rounding_gap = std::abs(r_raw - zc.order_r);
                zc.ambiguous = zc.rounding_gap > 0.2;
                double alpha = 0.0;
                for (std::size_t k = 0; k < lam.size(); ++k)
                    alpha += lam[k] / std::pow(del[k], zc.order_r);
                zc.alpha_local = alpha / lam.size();
            } else {
                zc.ambiguous = true;
                zc.rounding_gap = 1.0;
            }
            out.push_back(zc);
        }
    }
    return out;
}

double min_crossing_separation(const std::vector<ZeroCrossing>& crossings) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < crossings.size(); ++i)
        for (std::size_t j = i + 1; j < crossings.size(); ++j)
            if (crossings[i].branch != crossings[j].branch)
                best = std::min(best, std::abs(crossings[i].eta_bar - crossings[j].eta_bar));
    return best;
}

std::vector<std::size_t> continuity_violations(const EigenBranch& branch, int n) {
    if (n < 0 || n >= branch.n_branches()) throw InvalidInput("continuity_violations: branch index");
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i + 1 < branch.eta_grid.size(); ++i) {
        double eta = std::max(std::abs(branch.eta_grid[i]), std::abs(branch.eta_grid[i + 1]));
        double lam = std::max(branch.values[n][i], branch.values[n][i + 1]);
        // |d lambda/d eta| <= 2 max|eta - x^nu/nu| on the allowed region,
        // where (eta - x^nu/nu)^2 <= lambda + (2l+1) x^(nu-1) there.
        double mag = 2.0 * (2 * branch.ell + 1) *
                     std::pow(branch.nu * (1.0 + eta), double(branch.nu - 1) / branch.nu);
        double lip = 2.0 * std::sqrt(std::max(lam, 0.0) + mag + 2.0);
        double dlam = std::abs(branch.values[n][i + 1] - branch.values[n][i]);
        double slack = 4.0 * (branch.errors[n][i] + branch.errors[n][i + 1]);
        if (dlam > lip * (branch.eta_grid[i + 1] - branch.eta_grid[i]) * 1.05 + slack)
            bad.push_back(i);
    }
    return bad;
}

ZeroModeCheck zero_mode_residual(int nu, double eta, const Grid1D& grid) {
    if (nu % 2 == 0) throw InvalidInput("zero_mode_residual: nu must be odd");
    grid.validate();
    const int n = grid.n;
    const double dx = grid.spacing();

    auto expo = [&](double x) {
        double p = 1.0;
        for (int i = 0; i <= nu; ++i) p *= x;
        return eta * x - p / (double(nu) * (nu + 1));
    };
    double mx = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) mx = std::max(mx, expo(grid.point(i)));

    std::vector<double> v(n);
    double norm = 0.0;
    for (int i = 0; i < n; ++i) {
        v[i] = std::exp(expo(grid.point(i)) - mx);
        norm += v[i] * v[i];
    }
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;

    TridiagOperator op = build_pilot(nu, 0, eta, grid);
    ZeroModeCheck out;
    out.grid = grid;
    out.residual = residual_norm(op, 0.0, v);

    // v'''' = (V'' + 2 V' g + V^2) v with g = eta - x^nu/nu, V = g^2 + g'.
    double sum4 = 0.0;
    for (int i = 0; i < n; ++i) {
        double x = grid.point(i);
        double p1 = 1.0; for (int k = 0; k < nu - 1; ++k) p1 *= x;      // x^(nu-1)
        double p2 = (nu >= 2) ? ((nu == 2) ? 1.0 : std::pow(x, nu - 2)) : 0.0;
        double p3 = (nu == 3) ? 1.0 : ((nu > 3) ? std::pow(x, nu - 3) : 0.0);
        double g = eta - p1 * x / nu;
        double gp = -p1;
        double gpp = -(nu - 1.0) * p2;
        double gppp = -(nu - 1.0) * (nu - 2.0) * p3;
        double V = g * g + gp;
        double Vp = 2 * g * gp + gpp;
        double Vpp = 2 * gp * gp + 2 * g * gpp + gppp;
        double v4 = (Vpp + 2 * Vp * g + V * V) * v[i];
        sum4 += v4 * v4;
    }
    double va = std::exp(expo(grid.x_min) - mx) / norm;
    double vb = std::exp(expo(grid.x_max) - mx) / norm;
    out.bound = dx * dx / 12.0 * std::sqrt(sum4) + (std::abs(va) + std::abs(vb)) / (dx * dx);
    return out;
}

} // namespace magband
