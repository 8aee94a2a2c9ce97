#include "magband/factorized.hpp"

#include "magband/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace magband {

namespace {

// Lower bidiagonal B ((n+1) x n): cell i between nodes i and i+1 carries
// (u_i - u_{i+1})*hbar/dx + g(mid_i) (u_i + u_{i+1})/2 with u_0 = u_{n+1} = 0.
// Column j (node j+1): diag d[j] from cell j, sub s[j] from cell j+1.
struct Bidiag {
    std::vector<double> d, s; // both length n
};

Bidiag build_bidiag(const std::function<double(double)>& g, double hbar, const Grid1D& grid) {
    const int n = grid.n;
    const double dx = grid.spacing();
    Bidiag b;
    b.d.resize(n);
    b.s.resize(n);
    for (int j = 0; j < n; ++j) {
        double mid_above = grid.x_min + (j + 0.5) * dx;      // cell j midpoint
        double mid_below = grid.x_min + (j + 1.5) * dx;      // cell j+1 midpoint
        double ga = g(mid_above), gb = g(mid_below);
        if (!std::isfinite(ga) || !std::isfinite(gb))
            throw NumericalFailure("ground_factorized: g not finite on the grid");
        b.d[j] = 0.5 * ga - hbar / dx;
        b.s[j] = 0.5 * gb + hbar / dx;
    }
    return b;
}

// Givens QR of the lower bidiagonal: R upper bidiagonal with diag r, super t.
void qr_bidiag(const Bidiag& b, std::vector<double>& r, std::vector<double>& t) {
    const std::size_t n = b.d.size();
    r.resize(n);
    t.assign(n > 1 ? n - 1 : 0, 0.0);
    double work = b.d[0];
    for (std::size_t j = 0; j < n; ++j) {
        double rho = std::hypot(work, b.s[j]);
        r[j] = rho;
        if (j + 1 < n) {
            double c = (rho > 0.0) ? work / rho : 1.0;
            double s = (rho > 0.0) ? b.s[j] / rho : 0.0;
            t[j] = s * b.d[j + 1];
            work = c * b.d[j + 1];
        }
    }
}

} // namespace

FactorizedGround ground_factorized(const std::function<double(double)>& g,
                                   double hbar, const Grid1D& grid) {
    grid.validate();
    if (!(hbar > 0.0)) throw InvalidInput("ground_factorized: hbar must be positive");
    const std::size_t n = static_cast<std::size_t>(grid.n);

    Bidiag b = build_bidiag(g, hbar, grid);
    std::vector<double> r, t;
    qr_bidiag(b, r, t);

    const double tiny = 1e-300;
    for (double& x : r)
        if (std::abs(x) < tiny) x = tiny;

    // Inverse iteration on R^T R with per-stage normalization.  At the
    // converged direction v is the right singular vector, so the forward
    // solve has norm 1/sigma and the back solve (from the normalized
    // intermediate) again has norm 1/sigma: lambda = 1/(|y| |z|).  Both
    // norms are sums of squares, free of cancellation, and the solves are
    // entrywise backward stable, which perturbs bidiagonal singular values
    // only in relative terms; lambda therefore keeps relative accuracy even
    // at ~1e-290.  A Rayleigh quotient ||R v||^2 would instead bottom out
    // at cancellation noise near eps^2 ||R||^2.  Norms accumulate in long
    // double so intermediate squares up to ~1e600 stay finite.
    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> y(n), z(n);
    double lambda = std::numeric_limits<double>::quiet_NaN();
    int used = 0;
    for (int it = 0; it < 50; ++it) {
        ++used;
        // R^T y = v  (lower bidiagonal forward solve)
        y[0] = v[0] / r[0];
        for (std::size_t i = 1; i < n; ++i) y[i] = (v[i] - t[i - 1] * y[i - 1]) / r[i];
        long double ny2 = 0.0L;
        for (double x : y) ny2 += static_cast<long double>(x) * x;
        long double ny = sqrtl(ny2);
        if (!(ny > 0.0L) || !std::isfinite(static_cast<double>(ny / (ny + 1.0L))))
            throw NumericalFailure("ground_factorized: inverse iteration overflowed");
        for (double& x : y) x = static_cast<double>(x / ny);
        // R z = y  (upper bidiagonal back solve)
        z[n - 1] = y[n - 1] / r[n - 1];
        for (std::size_t ii = n - 1; ii-- > 0;) z[ii] = (y[ii] - t[ii] * z[ii + 1]) / r[ii];

        long double nz2 = 0.0L;
        for (double x : z) nz2 += static_cast<long double>(x) * x;
        long double nz = sqrtl(nz2);
        if (!(nz > 0.0L) || !std::isfinite(static_cast<double>(nz / (nz + 1.0L))))
            throw NumericalFailure("ground_factorized: inverse iteration overflowed");
        lambda = static_cast<double>(expl(-(logl(ny) + logl(nz))));
        double drift = 0.0, flip = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double vi = static_cast<double>(z[i] / nz);
            drift += (vi - v[i]) * (vi - v[i]);
            flip += (vi + v[i]) * (vi + v[i]);
            v[i] = vi;
        }
        if (std::min(drift, flip) <= 1e-24) break;
    }
    if (!std::isfinite(lambda) || lambda < 0.0)
        throw NumericalFailure("ground_factorized: inverse iteration produced no value");

    // Sign convention: largest-magnitude entry positive.
    std::size_t imax = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
    if (v[imax] < 0.0)
        for (double& x : v) x = -x;

    FactorizedGround out;
    out.lambda = lambda;
    out.vec = std::move(v);
    out.iterations = used;
    return out;
}

RefinedValue ground_factorized_refined(const std::function<double(double)>& g,
                                       double hbar, const Grid1D& coarse) {
    Grid1D fine{coarse.x_min, coarse.x_max, 2 * coarse.n + 1};
    double lc = ground_factorized(g, hbar, coarse).lambda;
    double lf = ground_factorized(g, hbar, fine).lambda;
    RefinedValue out;
    if (lc > 0.0 && lf > 0.0) {
        // The discretization error of the factorized bottom is relative:
        // each cell multiplies the growth factor by exp(O((g dx)^3)), so
        // log(lambda) converges at second order and the extrapolation
        // belongs in log space.  Value-space Richardson would be wrong
        // whenever the log error is not small.
        double dln = std::log(lf) - std::log(lc);
        out.value = lf * std::exp(dln / 3.0);
        out.error = out.value * std::expm1(std::abs(dln) / 3.0);
        if (std::isfinite(out.value) && std::isfinite(out.error)) return out;
    }
    // Underflowed or degenerate bottom: keep the fine value with the pair
    // difference as the error.
    out.value = lf;
    out.error = std::abs(lf - lc);
    return out;
}

int ground_factorized_count_below(const std::function<double(double)>& g,
                                  double hbar, const Grid1D& grid, double thresh) {
    grid.validate();
    if (!(hbar > 0.0)) throw InvalidInput("ground_factorized_count_below: hbar must be positive");
    if (!(thresh > 0.0)) throw InvalidInput("ground_factorized_count_below: thresh must be positive");

    Bidiag b = build_bidiag(g, hbar, grid);
    const std::size_t n = b.d.size();

    // Golub-Kahan staircase: offdiagonals d0, s0, d1, s1, ... of a zero-
    // diagonal tridiagonal of dimension 2n+1 whose spectrum is {+-sigma_i}
    // plus one zero.  Eigenvalues below +thresh therefore number
    // n + 1 + #{sigma_i < thresh}.
    std::vector<double> c(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
        c[2 * j] = b.d[j];
        c[2 * j + 1] = b.s[j];
    }
    int below = 1; // leading pivot is -thresh < 0
    double q = -thresh;
    for (std::size_t k = 0; k < 2 * n; ++k) {
        double denom = (q == 0.0) ? -1e-300 : q;
        q = -thresh - c[k] * c[k] / denom;
        if (std::isnan(q)) q = -thresh; // 0/0: exactly decoupled block
        if (q < 0.0) ++below;
    }
    int cnt = below - static_cast<int>(n) - 1;
    return cnt < 0 ? 0 : cnt;
}

} // namespace magband
