#include "magband/weyl_ids.hpp"

#include "magband/errors.hpp"
#include "magband/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace magband {

namespace {

constexpr double kPi = 3.14159265358979323846;

double ipow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

struct FieldModel {
    const ModelParams* p = nullptr;
    bool unit_phi = true; // phi identically 1: field has the closed form mu x^(nu-1)

    double b(double x1) const {
        if (unit_phi) return p->mu * ipow(x1, p->nu - 1);
        double step = 1e-6 * (1.0 + std::abs(x1));
        double dphi = (p->phi_at(x1 + step) - p->phi_at(x1 - step)) / (2.0 * step);
        return p->mu * (dphi * ipow(x1, p->nu) / p->nu + p->phi_at(x1) * ipow(x1, p->nu - 1));
    }

    // Full magnetic-moment energy shift at x1.
    double shift(double x1) const {
        return 0.5 * (2.0 * p->ell + 1.0) * p->mu * p->h * p->sigma_at(x1) *
               p->phi_at(x1) * ipow(x1, p->nu - 1);
    }

    double density(double x1) const { return std::abs(b(x1)) / (2.0 * kPi * p->h); }

    // E_n = (n + 1/2) h |b| - shift - W/2 < tau  <=>  n < A.
    double A(double x1, double tau_w) const {
        double hb = p->h * std::abs(b(x1));
        double num = tau_w + shift(x1);
        if (hb <= 0.0)
            return num > 0.0 ? std::numeric_limits<double>::infinity()
                             : -std::numeric_limits<double>::infinity();
        return num / hb - 0.5;
    }

    // density * (A + 1/2): the stair midline, smooth through x1 = 0.
    double midline(double x1, double tau_w) const {
        return (tau_w + shift(x1)) / (2.0 * kPi * p->h * p->h);
    }
};

double level_count(double a) {
    if (!(a > 0.0)) return 0.0;
    double fl = std::floor(a);
    return (a - fl > 1e-12) ? fl + 1.0 : fl;
}

double gauss8_value(double a, double b, const std::function<double(double)>& f) {
    std::vector<double> xs, ws;
    gauss8_append(a, b, xs, ws);
    double s = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) s += ws[i] * f(xs[i]);
    return s;
}

struct InnerOut {
    double val = 0.0, err = 0.0, cut_mass = 0.0, max_levels = 0.0;
};

// One side of the x1 axis in s = |x1| coordinates, s in [s_in, s_out].
void side_integral(const FieldModel& fm, const Bump1D& psi1, double sgn,
                   double s_in, double s_out, double tau_w, const WeylOptions& o,
                   InnerOut& out) {
    if (!(s_in < s_out)) return;
    auto x_of = [&](double s) { return sgn * s; };
    auto dens_psi = [&](double s) { return psi1(x_of(s)) * fm.density(x_of(s)); };

    // Scan with geometric refinement toward the degenerate end.
    std::vector<double> s_scan;
    const double eps0 = std::max(s_in, s_out * 1e-14);
    for (int i = 0; i <= 384; ++i) {
        double s = s_in + (s_out - s_in) * i / 384.0;
        s_scan.push_back(std::max(s, eps0));
    }
    for (int k = 0; k < 128; ++k)
        s_scan.push_back(eps0 * std::pow(s_out / eps0, k / 127.0));
    std::sort(s_scan.begin(), s_scan.end());
    s_scan.erase(std::unique(s_scan.begin(), s_scan.end()), s_scan.end());

    std::vector<double> a_scan(s_scan.size());
    for (std::size_t i = 0; i < s_scan.size(); ++i) {
        a_scan[i] = fm.A(x_of(s_scan[i]), tau_w);
        out.max_levels = std::max(out.max_levels, level_count(a_scan[i]));
    }

    const double cap = static_cast<double>(o.max_levels_exact);
    double exact_lo = s_in;

    // Outermost crossing of A = cap separates the midline zone from the
    // exactly panelled stair zone.
    std::ptrdiff_t k_over = -1;
    for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(a_scan.size()) - 1; i >= 0; --i)
        if (a_scan[i] > cap) { k_over = i; break; }
    if (k_over >= 0) {
        double lo = s_scan[k_over];
        double hi = (k_over + 1 < static_cast<std::ptrdiff_t>(s_scan.size()))
                        ? s_scan[k_over + 1]
                        : s_out;
        for (int it = 0; it < 80 && hi - lo > 1e-14 * (1.0 + hi); ++it) {
            double mid = 0.5 * (lo + hi);
            (fm.A(x_of(mid), tau_w) > cap ? lo : hi) = mid;
        }
        double r_cap = 0.5 * (lo + hi);

        // Midline zone [s_in, r_cap]: integrate density*(A+1/2) and budget
        // the half-level stair width.
        std::vector<double> edges{s_in};
        for (double knot : {std::abs(psi1.lo), std::abs(psi1.lo + psi1.edge),
                            std::abs(psi1.hi - psi1.edge), std::abs(psi1.hi)})
            if (knot > s_in && knot < r_cap) edges.push_back(knot);
        edges.push_back(r_cap);
        std::sort(edges.begin(), edges.end());
        for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
            double a = edges[e], b = edges[e + 1];
            int sub = 8;
            for (int q = 0; q < sub; ++q) {
                double qa = a + (b - a) * q / sub, qb = a + (b - a) * (q + 1) / sub;
                out.val += gauss8_value(qa, qb, [&](double s) {
                    return psi1(x_of(s)) * fm.midline(x_of(s), tau_w);
                });
                out.err += 0.5 * gauss8_value(qa, qb, dens_psi);
            }
        }
        exact_lo = r_cap;
    }

    if (!(exact_lo < s_out)) return;

    // Stair zone: integer crossings of A become exact panel edges.
    std::vector<double> edges{exact_lo, s_out};
    for (double knot : {std::abs(psi1.lo), std::abs(psi1.lo + psi1.edge),
                        std::abs(psi1.hi - psi1.edge), std::abs(psi1.hi)})
        if (knot > exact_lo && knot < s_out) edges.push_back(knot);
    for (std::size_t i = 0; i + 1 < s_scan.size(); ++i) {
        if (s_scan[i + 1] <= exact_lo || s_scan[i] >= s_out) continue;
        double fa = a_scan[i], fb = a_scan[i + 1];
        double k_lo = std::ceil(std::min(fa, fb));
        double k_hi = std::floor(std::max(fa, fb));
        for (double k = std::max(0.0, k_lo); k <= std::min(cap, k_hi); k += 1.0) {
            double lo = s_scan[i], hi = s_scan[i + 1], va = fa - k;
            if (va == 0.0) { edges.push_back(lo); continue; }
            if ((fa - k) * (fb - k) > 0.0) continue;
            while (hi - lo > 1e-12 * (1.0 + hi)) {
                double mid = 0.5 * (lo + hi);
                double fm_v = fm.A(x_of(mid), tau_w) - k;
                if (fm_v == 0.0) { lo = hi = mid; break; }
                if ((fm_v < 0.0) == (va < 0.0)) { lo = mid; va = fm_v; }
                else hi = mid;
            }
            double bp = 0.5 * (lo + hi);
            if (bp > exact_lo && bp < s_out) {
                edges.push_back(bp);
                out.err += (hi - lo + 1e-12 * (1.0 + bp)) * dens_psi(bp);
            }
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        double a = edges[e], b = edges[e + 1];
        if (!(b - a > 0.0)) continue;
        double n_here = level_count(fm.A(x_of(0.5 * (a + b)), tau_w));
        if (n_here == 0.0) continue;
        double g1 = gauss8_value(a, b, dens_psi);
        double g2 = gauss8_value(a, 0.5 * (a + b), dens_psi) +
                    gauss8_value(0.5 * (a + b), b, dens_psi);
        out.val += n_here * g2;
        out.err += n_here * std::abs(g2 - g1);
    }
}

InnerOut weyl_inner(const FieldModel& fm, const Bump1D& psi1, double tau_w,
                    const WeylOptions& o) {
    InnerOut out;
    const double cut = std::max(0.0, o.cut_radius);

    if (psi1.hi > cut)
        side_integral(fm, psi1, +1.0, std::max(cut, std::max(0.0, psi1.lo)), psi1.hi,
                      tau_w, o, out);
    if (psi1.lo < -cut)
        side_integral(fm, psi1, -1.0, std::max(cut, std::max(0.0, -psi1.hi)), -psi1.lo,
                      tau_w, o, out);

    if (cut > 0.0) {
        // Mass bound inside the excised disc: density * N <= midline + density/2.
        for (double sgn : {+1.0, -1.0}) {
            double s_hi = std::min(cut, sgn > 0 ? std::max(0.0, psi1.hi)
                                                : std::max(0.0, -psi1.lo));
            if (!(s_hi > 0.0)) continue;
            for (int q = 0; q < 16; ++q) {
                double qa = s_hi * q / 16.0, qb = s_hi * (q + 1) / 16.0;
                out.cut_mass += gauss8_value(qa, qb, [&](double s) {
                    double x = sgn * s;
                    double m = std::max(fm.midline(x, tau_w), 0.0) + 0.5 * fm.density(x);
                    return psi1(x) * m;
                });
            }
        }
    }
    return out;
}

} // namespace

WeylResult weyl_ids(const ModelParams& params, const CutoffSpec& psi,
                    const WeylOptions& opts) {
    params.validate();
    psi.validate();

    FieldModel fm;
    fm.p = &params;
    for (double x : {-0.47, -0.11, 0.0, 0.23, 0.41})
        if (std::abs(params.phi_at(x) - 1.0) > 1e-12) { fm.unit_phi = false; break; }

    WeylResult out;
    out.cut_radius = std::max(0.0, opts.cut_radius);
    out.gamma_bar1 = std::pow(params.mu * params.h, -1.0 / (params.nu - 1));

    std::vector<double> xs, ws;
    for (auto [a, b] : bump_panels(psi.psi2, opts.x2_panels)) gauss8_append(a, b, xs, ws);

    std::vector<InnerOut> inner(xs.size());
    parallel_for(xs.size(), opts.workers, [&](std::size_t j) {
        inner[j] = weyl_inner(fm, psi.psi1, opts.tau + 0.5 * params.W_at(xs[j]), opts);
    });

    std::vector<double> vals(xs.size()), errs(xs.size()), cuts(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) {
        double wq = ws[j] * psi.psi2(xs[j]);
        vals[j] = wq * inner[j].val;
        errs[j] = std::abs(wq) * inner[j].err;
        cuts[j] = std::abs(wq) * inner[j].cut_mass;
        out.max_levels = std::max(out.max_levels, inner[j].max_levels);
    }
    out.value = pairwise_sum(vals);
    out.error = pairwise_sum(errs);
    out.cut_mass_bound = pairwise_sum(cuts);

    // Alternative normalization, reported but never asserted: requires a
    // constant W sign on supp psi2.
    {
        double wmin = std::numeric_limits<double>::infinity(), wmax = -wmin;
        for (int i = 0; i <= 64; ++i) {
            double x2 = psi.psi2.lo + (psi.psi2.hi - psi.psi2.lo) * i / 64.0;
            wmin = std::min(wmin, params.W_at(x2));
            wmax = std::max(wmax, params.W_at(x2));
        }
        if (wmin > 0.0 || wmax < 0.0) {
            double lpm = std::max(0.0, params.ell + (wmin > 0.0 ? 0.0 : -1.0));
            double i1 = 0.0;
            std::vector<double> edges{psi.psi1.lo, psi.psi1.hi};
            if (psi.psi1.lo < 0.0 && psi.psi1.hi > 0.0) edges.insert(edges.begin() + 1, 0.0);
            for (std::size_t e = 0; e + 1 < edges.size(); ++e)
                for (int q = 0; q < 16; ++q) {
                    double qa = edges[e] + (edges[e + 1] - edges[e]) * q / 16.0;
                    double qb = edges[e] + (edges[e + 1] - edges[e]) * (q + 1) / 16.0;
                    i1 += gauss8_value(qa, qb, [&](double x) {
                        return psi.psi1(x) * std::abs(fm.b(x)) / params.mu;
                    });
                }
            double i2 = 0.0;
            for (std::size_t j = 0; j < xs.size(); ++j) i2 += ws[j] * psi.psi2(xs[j]);
            out.value_single_level = params.mu / (4.0 * kPi * params.h) * lpm * i1 * i2;
        } else {
            out.value_single_level = std::numeric_limits<double>::quiet_NaN();
        }
    }

    // Diagnostic level-count field along x1 at the middle of supp psi2.
    double x2_mid = 0.5 * (psi.psi2.lo + psi.psi2.hi);
    double tw_mid = opts.tau + 0.5 * params.W_at(x2_mid);
    for (int i = 0; i <= 40; ++i) {
        WeylFieldRow row;
        row.x1 = psi.psi1.lo + (psi.psi1.hi - psi.psi1.lo) * i / 40.0;
        row.field = fm.b(row.x1);
        row.levels = level_count(fm.A(row.x1, tw_mid));
        out.field.push_back(row);
    }
    return out;
}

WeylInner weyl_ids_inner(const ModelParams& params, const Bump1D& psi1,
                         double tau_w, const WeylOptions& opts) {
    params.validate();
    psi1.validate();

    FieldModel fm;
    fm.p = &params;
    for (double x : {-0.47, -0.11, 0.0, 0.23, 0.41})
        if (std::abs(params.phi_at(x) - 1.0) > 1e-12) { fm.unit_phi = false; break; }

    InnerOut io = weyl_inner(fm, psi1, tau_w, opts);
    WeylInner out;
    out.value = io.val;
    out.error = io.err;
    out.cut_mass_bound = io.cut_mass;
    out.max_levels = io.max_levels;
    return out;
}

} // namespace magband
