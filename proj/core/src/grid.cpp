#include "magband/grid.hpp"

#include "magband/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace magband {

std::vector<double> Grid1D::points() const {
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = point(i);
    return xs;
}

void Grid1D::validate() const {
    if (!(x_min < x_max)) throw InvalidInput("Grid1D: x_min must be < x_max");
    if (n < 3) throw InvalidInput("Grid1D: need at least 3 interior points");
    if (!std::isfinite(x_min) || !std::isfinite(x_max))
        throw InvalidInput("Grid1D: endpoints must be finite");
}

namespace {

// Local harmonic length (V''/2)^(-1/4) from a centered second difference.
double harmonic_length(const std::function<double(double)>& veff, double x0, double scale) {
    double d = std::max(1e-4 * scale, 1e-6);
    double v2 = (veff(x0 + d) - 2.0 * veff(x0) + veff(x0 - d)) / (d * d);
    if (!(v2 > 0)) return scale; // flat or concave sample: fall back to coarse scale
    return std::pow(2.0 / v2, 0.25);
}

// Refine a bracketing sample triple by golden-section search.
double refine_min(const std::function<double(double)>& f, double a, double b) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    for (int it = 0; it < 80 && (b - a) > 1e-12 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
        if (f(c) < f(d)) {
            b = d;
        } else {
            a = c;
        }
        c = b - gr * (b - a);
        d = a + gr * (b - a);
    }
    return 0.5 * (a + b);
}

// Outward march from x0 (direction dir = +-1) until veff stays above e for
// `hold` consecutive steps; bisect the last upward crossing.
double march_boundary(const std::function<double(double)>& veff, double x0, int dir,
                      double e, double step) {
    const int hold = 12;
    double x = x0;
    double last_below = x0;
    int above = veff(x0) > e ? 1 : 0;
    for (int it = 0; it < 200000; ++it) {
        x += dir * step;
        if (veff(x) > e) {
            if (++above >= hold) break;
        } else {
            above = 0;
            last_below = x;
        }
    }
    if (above < hold)
        throw NumericalFailure("auto_domain: potential does not confine in the scanned range");
    // bisect between last_below and the confirmed-above point
    double lo = last_below, hi = x;
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        if (veff(mid) > e) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

} // namespace

Grid1D auto_domain(const std::function<double(double)>& veff,
                   const std::vector<double>& centers,
                   double e_max,
                   int n,
                   double pad_lengths) {
    if (centers.empty()) throw InvalidInput("auto_domain: need at least one center candidate");
    if (n < 3) throw InvalidInput("auto_domain: need n >= 3");

    // Pick the deepest candidate, refined locally.
    double best_x = centers.front();
    double best_v = std::numeric_limits<double>::infinity();
    double span = 0.0;
    for (double c : centers) span = std::max(span, std::abs(c));
    double coarse = std::max(0.5, 0.05 * span);
    for (double c : centers) {
        double x = refine_min(veff, c - 2.0 * coarse, c + 2.0 * coarse);
        double v = veff(x);
        if (v < best_v) {
            best_v = v;
            best_x = x;
        }
    }
    if (!(e_max > best_v))
        throw InvalidInput("auto_domain: e_max must exceed the well bottom");

    double ell = harmonic_length(veff, best_x, std::max(1.0, coarse));
    ell = std::clamp(ell, 1e-6, 10.0 * (1.0 + span));
    double step = 0.5 * ell;

    // Hull of the allowed region across all candidates at level e_max.
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double c : centers) {
        double seed = (veff(c) <= e_max) ? c : best_x;
        lo = std::min(lo, march_boundary(veff, seed, -1, e_max, step));
        hi = std::max(hi, march_boundary(veff, seed, +1, e_max, step));
    }

    Grid1D g;
    g.x_min = lo - pad_lengths * ell;
    g.x_max = hi + pad_lengths * ell;
    g.n = n;
    g.validate();
    return g;
}

} // namespace magband
