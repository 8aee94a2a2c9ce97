#include "magband/model.hpp"

#include "magband/errors.hpp"

#include <algorithm>
#include <cmath>

namespace magband {

namespace {

// x^k for integer k >= 0, exact sign handling for negative x.
double ipow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

// (1+u)^m - 1 without cancellation for small u; requires 1+u > 0.
double powm1(double u, int m) {
    return std::expm1(static_cast<double>(m) * std::log1p(u));
}

void check_nu_ell(int nu, int ell) {
    if (nu < 2) throw InvalidInput("operator family: nu must be >= 2");
    if (ell < 0) throw InvalidInput("operator family: ell must be >= 0");
}

void boundary_guard(const std::function<double(double)>& veff, const Grid1D& grid) {
    if (veff(grid.x_min) < 0.0 || veff(grid.x_max) < 0.0)
        throw InvalidInput("grid endpoints lie inside the classically allowed region at energy 0");
}

} // namespace

void ModelParams::validate() const {
    check_nu_ell(nu, ell);
    if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidInput("ModelParams: mu must be positive");
    if (!(h > 0.0) || h > 1.0) throw InvalidInput("ModelParams: h must lie in (0, 1]");
}

double ModelParams::coupling_product() const {
    return mu * std::pow(h, nu);
}

double TridiagOperator::norm_inf() const {
    double m = 0.0;
    for (int i = 0; i < n(); ++i) {
        double row = std::abs(diag[i]);
        if (i > 0) row += std::abs(offdiag[i - 1]);
        if (i + 1 < n()) row += std::abs(offdiag[i]);
        m = std::max(m, row);
    }
    return m;
}

void TridiagOperator::validate() const {
    grid.validate();
    if (static_cast<int>(diag.size()) != grid.n || offdiag.size() + 1 != diag.size())
        throw InvalidInput("TridiagOperator: size mismatch with grid");
    for (double v : diag)
        if (!std::isfinite(v)) throw InvalidInput("TridiagOperator: non-finite diagonal entry");
    for (double v : offdiag)
        if (!std::isfinite(v)) throw InvalidInput("TridiagOperator: non-finite off-diagonal entry");
}

double pilot_veff(int nu, int ell, double eta, double x) {
    double w = eta - ipow(x, nu) / nu;
    return w * w - (2 * ell + 1) * ipow(x, nu - 1);
}

double general_veff(int nu, int ell, double eta,
                    const std::array<double, 3>& alpha,
                    const std::array<double, 3>& beta, double x) {
    double w = eta - ipow(x, nu) / nu;
    double c2 = 1.0 + alpha[1] * x + beta[1] * beta[1] * x * x;
    double c3 = 1.0 + alpha[2] * x;
    return c2 * w * w - (2 * ell + 1) * c3 * ipow(x, nu - 1);
}

double fiber_veff(const ModelParams& p, double x2, double xi2, double x1) {
    double s = p.sigma_at(x1);
    double f = p.phi_at(x1);
    double w = xi2 - p.mu * f * ipow(x1, p.nu) / p.nu;
    return 0.5 * (s * s * w * w
                  - (2 * p.ell + 1) * p.mu * p.h * s * f * ipow(x1, p.nu - 1)
                  - p.W_at(x2));
}

TridiagOperator assemble_schrodinger(const std::function<double(double)>& veff,
                                     double kinetic, const Grid1D& grid) {
    grid.validate();
    const double d = grid.spacing();
    TridiagOperator op;
    op.grid = grid;
    op.diag.resize(grid.n);
    op.offdiag.resize(grid.n - 1);
    for (int i = 0; i < grid.n; ++i)
        op.diag[i] = 2.0 * kinetic / (d * d) + veff(grid.point(i));
    std::fill(op.offdiag.begin(), op.offdiag.end(), -kinetic / (d * d));
    op.validate();
    return op;
}

TridiagOperator build_pilot(int nu, int ell, double eta, const Grid1D& grid) {
    check_nu_ell(nu, ell);
    auto veff = [=](double x) { return pilot_veff(nu, ell, eta, x); };
    boundary_guard(veff, grid);
    TridiagOperator op = assemble_schrodinger(veff, 1.0, grid);
    op.meta = {eta, nu, ell, "pilot", 1.0, 0.0, 0.0, 1.0};
    return op;
}

TridiagOperator build_general(int nu, int ell, double eta,
                              const std::array<double, 3>& alpha,
                              const std::array<double, 3>& beta,
                              const Grid1D& grid) {
    check_nu_ell(nu, ell);
    grid.validate();
    const double d = grid.spacing();
    auto pcoef = [&](double x) { return 1.0 + alpha[0] * x + beta[0] * beta[0] * x * x; };

    TridiagOperator op;
    op.grid = grid;
    op.diag.resize(grid.n);
    op.offdiag.resize(grid.n - 1);
    // Divergence-form stencil: coefficients at cell midpoints keep symmetry.
    std::vector<double> pm(grid.n + 1);
    for (int i = 0; i <= grid.n; ++i) {
        double xm = grid.x_min + (i + 0.5) * d;
        pm[i] = pcoef(xm);
        if (!(pm[i] > 0.0))
            throw InvalidInput("build_general: leading coefficient loses ellipticity on the grid");
    }
    for (int i = 0; i < grid.n; ++i) {
        op.diag[i] = (pm[i] + pm[i + 1]) / (d * d)
                   + general_veff(nu, ell, eta, alpha, beta, grid.point(i));
        if (i + 1 < grid.n) op.offdiag[i] = -pm[i + 1] / (d * d);
    }
    op.meta = {eta, nu, ell, "general", 1.0, 0.0, 0.0, 1.0};
    op.validate();
    return op;
}

TridiagOperator build_fiber(const ModelParams& params, double x2, double xi2, const Grid1D& grid) {
    params.validate();
    auto veff = [&params, x2, xi2](double x1) { return fiber_veff(params, x2, xi2, x1); };
    boundary_guard(veff, grid);
    TridiagOperator op = assemble_schrodinger(veff, 0.5 * params.h * params.h, grid);
    op.meta = {xi2, params.nu, params.ell, "fiber", 1.0, 0.0, 0.0, 1.0};
    return op;
}

ScalingMap rescale_to_unit(const ModelParams& params) {
    params.validate();
    const double nu1 = params.nu + 1.0;
    ScalingMap m;
    m.x_factor = std::pow(params.h / params.mu, 1.0 / nu1);
    m.eta_factor = std::pow(params.mu * std::pow(params.h, params.nu), 1.0 / nu1);
    m.energy_factor = m.eta_factor * m.eta_factor;
    return m;
}

PilotFrame pilot_frame(int nu, int ell, double eta, double gamma_switch) {
    check_nu_ell(nu, ell);
    PilotFrame f;
    double eta_work = eta;
    if (nu % 2 == 1 && eta < 0.0) {
        // lambda_n(-eta) = lambda_n(eta) under x -> -x for odd nu.
        f.reflected = true;
        eta_work = -eta;
    }
    const double gamma = eta_work > 0.0 ? std::pow(nu * eta_work, 1.0 / nu) : 0.0;

    if (eta_work <= 0.0 || gamma < gamma_switch) {
        f.veff = [nu, ell, eta_work](double x) { return pilot_veff(nu, ell, eta_work, x); };
        return f;
    }

    // Recentered well frame: physical x = gamma + gamma^((1-nu)/2) z,
    // physical eigenvalue = gamma^(nu-1) * frame eigenvalue.
    const double eps = std::pow(gamma, -(nu + 1.0) / 2.0);
    f.recentered = true;
    f.x_offset = gamma;
    f.x_scale = std::pow(gamma, (1.0 - nu) / 2.0);
    f.energy_scale = std::pow(gamma, nu - 1.0);
    f.veff = [nu, ell, eps](double z) {
        double u = eps * z;
        // The frame only represents the well at +gamma; everything past the
        // coordinate singularity is treated as an infinite barrier.
        if (u <= -0.9) return std::numeric_limits<double>::infinity();
        double q = powm1(u, nu) / (nu * eps);
        double solenoid = std::pow(1.0 + u, nu - 1.0);
        return q * q - (2 * ell + 1) * solenoid;
    };
    if (nu % 2 == 0) {
        // A mirror well at physical -gamma sits at frame energy ~ (2l+1).
        f.energy_guard = 0.75 * (2 * ell + 1);
    } else {
        double barrier = powm1(-0.9, nu) / (nu * eps);
        f.energy_guard = 0.5 * barrier * barrier;
    }
    return f;
}

Grid1D pilot_frame_domain(int nu, int ell, double eta, const PilotFrame& frame,
                          double e_max_frame, int n, double pad_lengths) {
    if (e_max_frame > frame.energy_guard)
        throw NumericalFailure("pilot_frame_domain: requested energy exceeds the frame guard");
    std::vector<double> centers;
    if (frame.recentered) {
        centers = {0.0};
    } else {
        double eta_work = (nu % 2 == 1) ? std::abs(eta) : eta;
        centers = {0.0, 1.0, -1.0, 2.0, -2.0};
        if (eta_work > 0.0) {
            double gamma = std::pow(nu * eta_work, 1.0 / nu);
            centers.push_back(gamma);
            if (nu % 2 == 0) centers.push_back(-gamma);
        }
    }
    return auto_domain(frame.veff, centers, e_max_frame, n, pad_lengths);
}

} // namespace magband
