#include "magband/tridiag_eigen.hpp"

#include "magband/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace magband {

namespace {

// Count of negative pivots of (A - tau) via the Sturm ratio recurrence.
// A zero pivot is nudged negative, so lambda == tau counts as below tau;
// the clamp at 1e150 keeps e^2/q finite without changing later pivots.
int negcount(const std::vector<double>& diag, const std::vector<double>& off, double tau) {
    const double kClamp = 1e150;
    const double kPivMin = 1e-300;
    int count = 0;
    double q = 1.0;
    const std::size_t n = diag.size();
    for (std::size_t i = 0; i < n; ++i) {
        double e2 = (i == 0) ? 0.0 : off[i - 1] * off[i - 1];
        q = (diag[i] - tau) - e2 / q;
        if (std::abs(q) < kPivMin) q = -kPivMin;
        if (std::abs(q) > kClamp) q = std::copysign(kClamp, q);
        if (q < 0.0) ++count;
    }
    return count;
}

void gershgorin(const TridiagOperator& op, double& lo, double& hi) {
    const std::size_t n = op.diag.size();
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(op.offdiag[i - 1]);
        if (i + 1 < n) r += std::abs(op.offdiag[i]);
        lo = std::min(lo, op.diag[i] - r);
        hi = std::max(hi, op.diag[i] + r);
    }
    // Open the bracket slightly so boundary eigenvalues are strictly inside.
    double pad = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
    lo -= pad;
    hi += pad;
}

double stop_width(double mid, double rtol) {
    return std::max(rtol, 1e-13) * std::max(1.0, std::abs(mid));
}

// Tridiagonal LU with partial pivoting (fill-in limited to a second
// superdiagonal), then one solve.  Tiny pivots are perturbed so the factor
// stays usable when lambda is numerically an eigenvalue.
struct TriLU {
    std::vector<double> dl, d, du, du2;
    std::vector<int> piv; // 1 if rows i, i+1 were swapped at step i

    TriLU(const TridiagOperator& op, double shift) {
        const std::size_t n = op.diag.size();
        d.resize(n);
        dl.assign(n > 1 ? n - 1 : 0, 0.0);
        du.assign(n > 1 ? n - 1 : 0, 0.0);
        du2.assign(n > 2 ? n - 2 : 0, 0.0);
        piv.assign(n > 1 ? n - 1 : 0, 0);
        for (std::size_t i = 0; i < n; ++i) d[i] = op.diag[i] - shift;
        for (std::size_t i = 0; i + 1 < n; ++i) { dl[i] = op.offdiag[i]; du[i] = op.offdiag[i]; }

        const double tiny = 1e-30 + 1e-20 * op.norm_inf();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (std::abs(d[i]) >= std::abs(dl[i])) {
                if (std::abs(d[i]) < tiny) d[i] = std::copysign(tiny, d[i] == 0.0 ? 1.0 : d[i]);
                double m = dl[i] / d[i];
                dl[i] = m;
                d[i + 1] -= m * du[i];
                // du2 stays zero on no-swap steps
            } else {
                piv[i] = 1;
                double m = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = m;
                double tmp = d[i + 1];
                d[i + 1] = du[i] - m * tmp;
                du[i] = tmp;
                if (i + 2 < n) {
                    du2[i] = du[i + 1];
                    du[i + 1] = -m * du[i + 1];
                }
            }
        }
        if (!d.empty() && std::abs(d[n - 1]) < tiny)
            d[n - 1] = std::copysign(tiny, d[n - 1] == 0.0 ? 1.0 : d[n - 1]);
    }

    void solve(std::vector<double>& b) const {
        const std::size_t n = d.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (piv[i]) std::swap(b[i], b[i + 1]);
            b[i + 1] -= dl[i] * b[i];
        }
        for (std::size_t ii = n; ii-- > 0;) {
            double s = b[ii];
            if (ii + 1 < n) s -= du[ii] * b[ii + 1];
            if (ii + 2 < n) s -= du2[ii] * b[ii + 2];
            b[ii] = s / d[ii];
        }
    }
};

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

} // namespace

int inertia_below(const TridiagOperator& op, double tau) {
    op.validate();
    return negcount(op.diag, op.offdiag, tau);
}

EigenResult eigen_lowest_k(const TridiagOperator& op, int k, double rtol) {
    op.validate();
    const int n = static_cast<int>(op.diag.size());
    if (k < 1 || k > n)
        throw InvalidInput("eigen_lowest_k: k must be in [1, dim]");
    if (!(rtol > 0.0) || !std::isfinite(rtol))
        throw InvalidInput("eigen_lowest_k: rtol must be positive and finite");

    double glo, ghi;
    gershgorin(op, glo, ghi);

    EigenResult res;
    res.grid_used = op.grid;
    res.values.reserve(k);
    res.error_estimates.reserve(k);

    for (int j = 0; j < k; ++j) {
        // Invariant: count(lo) <= j < count(hi), so the (j+1)-th eigenvalue
        // lies in (lo, hi].  Earlier results tighten the lower end.
        double lo = (j == 0) ? glo : res.values[j - 1] - res.error_estimates[j - 1];
        double hi = ghi;
        if (negcount(op.diag, op.offdiag, lo) > j) lo = glo;
        while (hi - lo > stop_width(0.5 * (lo + hi), rtol)) {
            double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break; // bracket at machine resolution
            if (negcount(op.diag, op.offdiag, mid) > j)
                hi = mid;
            else
                lo = mid;
        }
        res.values.push_back(0.5 * (lo + hi));
        res.error_estimates.push_back(0.5 * (hi - lo));
    }

    for (int j = 0; j + 1 < k; ++j) {
        double gap = res.values[j + 1] - res.values[j];
        double tol = res.error_estimates[j] + res.error_estimates[j + 1];
        if (gap <= tol) res.tie_flag = true;
        if (gap <= 0.0) {
            // Forced strict increase at the reported precision.
            res.values[j + 1] = std::nextafter(res.values[j], std::numeric_limits<double>::infinity());
            res.tie_flag = true;
        }
    }
    return res;
}

double residual_norm(const TridiagOperator& op, double lambda, const std::vector<double>& v) {
    const std::size_t n = op.diag.size();
    if (v.size() != n) throw InvalidInput("residual_norm: vector length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = (op.diag[i] - lambda) * v[i];
        if (i > 0) r += op.offdiag[i - 1] * v[i - 1];
        if (i + 1 < n) r += op.offdiag[i] * v[i + 1];
        s += r * r;
    }
    return std::sqrt(s);
}

std::vector<double> eigenvector(const TridiagOperator& op, double lambda, double rtol,
                                const std::vector<std::vector<double>>& prior) {
    op.validate();
    const std::size_t n = op.diag.size();
    const double anorm = op.norm_inf();
    const double target = 100.0 * std::max(rtol, 1e-15) * std::max(1.0, anorm);

    TriLU lu(op, lambda);

    // Deterministic start vector with sign variation (fixed LCG).
    std::vector<double> v(n);
    std::uint64_t state = 0x9e3779b97f4a7c15ull ^ (0x61c88647u * static_cast<std::uint64_t>(n));
    for (std::size_t i = 0; i < n; ++i) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        v[i] = (static_cast<double>(state >> 11) / 9007199254740992.0) - 0.5;
    }

    double best_res = std::numeric_limits<double>::infinity();
    std::vector<double> best = v;
    for (int it = 0; it < 5; ++it) {
        lu.solve(v);
        for (const auto& p : prior) {
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += p[i] * v[i];
            for (std::size_t i = 0; i < n; ++i) v[i] -= dot * p[i];
        }
        double nv = norm2(v);
        if (!(nv > 0.0) || !std::isfinite(nv))
            throw NumericalFailure("eigenvector: inverse iteration collapsed");
        for (double& x : v) x /= nv;
        double r = residual_norm(op, lambda, v);
        if (r < best_res) { best_res = r; best = v; }
        if (r <= target) break;
    }
    if (best_res > target)
        throw NumericalFailure("eigenvector: residual did not reach tolerance in 5 iterations");
    // Fix the overall sign: first entry of largest magnitude is positive.
    std::size_t imax = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(best[i]) > std::abs(best[imax])) imax = i;
    if (best[imax] < 0.0)
        for (double& x : best) x = -x;
    return best;
}

EigenResult refine_richardson(const std::function<TridiagOperator(const Grid1D&)>& build,
                              int k, const Grid1D& coarse, const Grid1D& fine, double rtol) {
    coarse.validate();
    fine.validate();
    if (fine.n != 2 * coarse.n + 1 || coarse.x_min != fine.x_min || coarse.x_max != fine.x_max)
        throw InvalidInput("refine_richardson: fine grid must halve the coarse spacing");

    EigenResult c = eigen_lowest_k(build(coarse), k, rtol);
    EigenResult f = eigen_lowest_k(build(fine), k, rtol);

    EigenResult out;
    out.grid_used = fine;
    out.tie_flag = c.tie_flag || f.tie_flag;
    out.values.resize(k);
    out.error_estimates.resize(k);
    for (int j = 0; j < k; ++j) {
        double diff = f.values[j] - c.values[j];
        out.values[j] = f.values[j] + diff / 3.0;
        out.error_estimates[j] = std::abs(diff) / 3.0 + f.error_estimates[j];
    }
    for (int j = 0; j + 1 < k; ++j)
        if (out.values[j + 1] <= out.values[j]) {
            out.values[j + 1] = std::nextafter(out.values[j], std::numeric_limits<double>::infinity());
            out.tie_flag = true;
        }
    return out;
}

} // namespace magband
