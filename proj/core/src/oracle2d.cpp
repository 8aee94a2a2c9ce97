#include "magband/oracle2d.hpp"

#include "magband/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace magband {

namespace {

constexpr double kPi = 3.14159265358979323846;

double ipow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

double vecpot(const ModelParams& p, double x1) {
    return p.mu * p.phi_at(x1) * ipow(x1, p.nu) / p.nu;
}

double field(const ModelParams& p, double x1) {
    double step = 1e-6 * (1.0 + std::abs(x1));
    return (vecpot(p, x1 + step) - vecpot(p, x1 - step)) / (2.0 * step);
}

// Finest spacings tolerated by the 8-points-per-wavelength guard.
std::pair<double, double> needed_spacings(const ModelParams& p, const Box2D& box,
                                          double a_span) {
    double b_max = 0.0, w_max = 0.0;
    const int m1 = std::max(box.n1, 64), m2 = std::max(box.n2, 64);
    for (int i = 0; i <= m1; ++i) {
        double x1 = box.x1_lo + (box.x1_hi - box.x1_lo) * i / m1;
        b_max = std::max(b_max, std::abs(field(p, x1)));
    }
    for (int j = 0; j <= m2; ++j) {
        double x2 = box.x2_lo + (box.x2_hi - box.x2_lo) * j / m2;
        w_max = std::max(w_max, std::abs(p.W_at(x2)));
    }

    double e_rng = std::max(1.0, 0.5 * w_max + 1.0);
    double k_kin = std::sqrt(2.0 * e_rng) / p.h;

    // x1: resolve both the magnetic length and the kinetic wavelength.
    double k1 = k_kin;
    if (b_max > 0.0) k1 = std::max(k1, std::sqrt(b_max / p.h));
    // x2: the gauge-reduced vector potential sets the oscillation rate.
    double k2 = k_kin + 0.5 * a_span / p.h;
    return {2.0 * kPi / (8.0 * k1), 2.0 * kPi / (8.0 * k2)};
}

double apot_span(const ModelParams& p, const Box2D& box) {
    double a_min = std::numeric_limits<double>::infinity(), a_max = -a_min;
    const int m = std::max(box.n1, 64);
    for (int i = 0; i <= m; ++i) {
        double a = vecpot(p, box.x1_lo + (box.x1_hi - box.x1_lo) * i / m);
        a_min = std::min(a_min, a);
        a_max = std::max(a_max, a);
    }
    return a_max - a_min;
}

void check_resolution(const ModelParams& p, const Box2D& box, double a_span) {
    auto [dx1_need, dx2_need] = needed_spacings(p, box, a_span);
    if (box.dx1() > dx1_need || box.dx2() > dx2_need) {
        char buf[200];
        std::snprintf(buf, sizeof(buf),
                      "build_2d: grid under-resolved; need n1 >= %lld, n2 >= %lld "
                      "(8 points per shortest local wavelength)",
                      static_cast<long long>((box.x1_hi - box.x1_lo) / dx1_need) + 1,
                      static_cast<long long>((box.x2_hi - box.x2_lo) / dx2_need) + 1);
        throw InvalidInput(buf);
    }
}

} // namespace

std::pair<int, int> required_grid(const ModelParams& params, const Box2D& box) {
    auto [dx1_need, dx2_need] = needed_spacings(params, box, apot_span(params, box));
    int n1 = static_cast<int>(std::ceil((box.x1_hi - box.x1_lo) / dx1_need)) + 1;
    int n2 = static_cast<int>(std::ceil((box.x2_hi - box.x2_lo) / dx2_need)) + 1;
    return {std::max(n1, 3), std::max(n2, 3)};
}

void Box2D::validate(long long cell_cap) const {
    if (!(x1_lo < x1_hi) || !(x2_lo < x2_hi))
        throw InvalidInput("Box2D: ranges must be nonempty");
    if (n1 < 3 || n2 < 3) throw InvalidInput("Box2D: need at least 3x3 interior points");
    if (cells() > cell_cap)
        throw InvalidInput("Box2D: n1*n2 exceeds the configured cell cap");
}

BandedHermitian<std::complex<double>> build_2d(const ModelParams& params,
                                               const Box2D& box,
                                               const Oracle2dOptions& opts) {
    params.validate();
    box.validate(opts.cell_cap);

    const long long dim64 = box.cells();
    const long long bytes = (static_cast<long long>(box.n1) + 1) * dim64 *
                            static_cast<long long>(sizeof(std::complex<double>));
    if (2 * bytes > opts.memory_cap_bytes)
        throw InvalidInput("build_2d: band storage plus one factorization copy "
                           "exceeds memory_cap_bytes");

    double a_min = std::numeric_limits<double>::infinity(), a_max = -a_min;
    for (int i = 0; i < box.n1; ++i) {
        double a = vecpot(params, box.x1(i));
        a_min = std::min(a_min, a);
        a_max = std::max(a_max, a);
    }
    const double a_shift = opts.gauge_center ? 0.5 * (a_min + a_max) : 0.0;
    if (opts.check_resolution) check_resolution(params, box, apot_span(params, box));

    const double h = params.h;
    const double d1 = box.dx1(), d2 = box.dx2();
    const double k1 = h * h / (d1 * d1), k2 = h * h / (d2 * d2);

    BandedHermitian<std::complex<double>> A;
    A.allocate(static_cast<int>(dim64), box.n1);
    for (int j = 0; j < box.n2; ++j) {
        const double w = params.W_at(box.x2(j));
        for (int i = 0; i < box.n1; ++i) {
            const int r = j * box.n1 + i;
            const double x1 = box.x1(i);
            const double a = vecpot(params, x1) - a_shift;
            const double moment = (2.0 * params.ell + 1.0) * params.mu * h *
                                  params.sigma_at(x1) * params.phi_at(x1) *
                                  ipow(x1, params.nu - 1);
            A.at(r, r) = k1 + k2 + 0.5 * (a * a - moment - w);
            if (i + 1 < box.n1) A.at(r + 1, r) = -0.5 * k1;
            if (j + 1 < box.n2)
                A.at(r + box.n1, r) =
                    std::complex<double>(-0.5 * k2, -0.5 * h * a / d2);
        }
    }
    return A;
}

CountInterval count_below_2d(const BandedHermitian<std::complex<double>>& A,
                             double tau, double delta) {
    if (delta <= 0.0) {
        double scale = 0.0;
        for (const auto& z : A.cols) scale = std::max(scale, std::abs(z));
        delta = 1e-12 * std::max(1.0, scale + std::abs(tau));
    }
    BandedInertia at = banded_inertia_below(A, tau);
    BandedInertia lo = banded_inertia_below(A, tau - delta);
    BandedInertia hi = banded_inertia_below(A, tau + delta);

    CountInterval out;
    out.at_tau = at.negative;
    out.perturbed = at.perturbed;
    out.lo = lo.negative - lo.perturbed;
    out.hi = hi.negative + hi.perturbed;
    if (out.lo > out.hi) std::swap(out.lo, out.hi);
    return out;
}

OracleIdsResult oracle_ids(const ModelParams& params, const CutoffSpec& psi,
                           const Box2D& box, const Oracle2dOptions& opts) {
    psi.validate();
    OracleIdsResult out;
    out.dim = box.cells();

    bool psi_unit = true;
    for (int i = 0; i < box.n1 && psi_unit; ++i)
        if (psi.psi1(box.x1(i)) != 1.0) psi_unit = false;
    for (int j = 0; j < box.n2 && psi_unit; ++j)
        if (psi.psi2(box.x2(j)) != 1.0) psi_unit = false;

    auto A = build_2d(params, box, opts);

    if (psi_unit) {
        out.count = count_below_2d(A, opts.tau, opts.delta);
        out.value = 0.5 * static_cast<double>(out.count.lo + out.count.hi);
        out.count_gap = static_cast<double>(out.count.hi - out.count.lo);
        return out;
    }

    if (out.dim > opts.dense_cap)
        throw InvalidInput("oracle_ids: psi-weighted path needs dim <= dense_cap; "
                           "use a psi == 1 window box for count-only mode");

    const int n = static_cast<int>(out.dim);
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
    for (int c = 0; c < n; ++c) {
        int rmax = std::min(n - 1, c + A.bw);
        for (int r = c; r <= rmax; ++r) {
            M(r, c) = A.at(r, c);
            M(c, r) = std::conj(A.at(r, c));
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M);
    if (es.info() != Eigen::Success)
        throw NumericalFailure("oracle_ids: dense eigensolve failed");

    out.dense_path = true;
    out.count = count_below_2d(A, opts.tau, opts.delta);
    const auto& vals = es.eigenvalues();
    const auto& vecs = es.eigenvectors();
    for (int k = 0; k < n; ++k) {
        if (!(vals(k) < opts.tau)) break;
        double wsum = 0.0;
        for (int j = 0; j < box.n2; ++j) {
            double p2 = psi.psi2(box.x2(j));
            if (p2 == 0.0) continue;
            for (int i = 0; i < box.n1; ++i) {
                double p1 = psi.psi1(box.x1(i));
                if (p1 == 0.0) continue;
                wsum += std::norm(vecs(j * box.n1 + i, k)) * p1 * p2;
            }
        }
        out.value += wsum;
    }
    return out;
}

} // namespace magband
