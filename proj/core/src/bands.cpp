#include "magband/bands.hpp"

#include "magband/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace magband {

namespace {

void require_normal_form(const ModelParams& p) {
    for (double x : {-0.41, -0.13, 0.0, 0.27, 0.44}) {
        if (std::abs(p.sigma_at(x) - 1.0) > 1e-12 || std::abs(p.phi_at(x) - 1.0) > 1e-12)
            throw InvalidInput("BandTable: band caching requires the normal form "
                               "(sigma and phi identically 1)");
        if (p.alpha[0] != 0 || p.alpha[1] != 0 || p.alpha[2] != 0 ||
            p.beta[0] != 0 || p.beta[1] != 0 || p.beta[2] != 0)
            throw InvalidInput("BandTable: band caching requires vanishing alpha/beta");
    }
}

} // namespace

BandTable::BandTable(const ModelParams& params, int n_branches, Bump1D psi1_phys,
                     SolveOptions opts)
    : tracer_(params.nu, params.ell, n_branches, opts),
      scale_(rescale_to_unit(params)),
      psi1_(psi1_phys),
      half_energy_factor_(0.5 * scale_.energy_factor) {
    params.validate();
    psi1_.validate();
    require_normal_form(params);
}

std::shared_ptr<const BandTable::Point> BandTable::at_eta(double eta) const {
    const std::uint64_t key = std::bit_cast<std::uint64_t>(eta);
    {
        std::lock_guard<std::mutex> lk(mtx_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }

    // Compute outside the lock; concurrent duplicates produce identical
    // values (the solver is deterministic), so last-write-wins is safe.
    PointSolve ps = tracer_.solve(eta, /*with_vectors=*/true);
    auto pt = std::make_shared<Point>();
    const int nb = tracer_.n_branches();
    pt->lambda.resize(nb);
    pt->weight.resize(nb);
    pt->err.resize(nb);
    for (int n = 0; n < nb; ++n) {
        pt->lambda[n] = half_energy_factor_ * ps.values[n];
        pt->err[n] = half_energy_factor_ * ps.errors[n];
        double w = 0.0;
        const auto& v = ps.vectors[n];
        for (int i = 0; i < ps.domain.n; ++i) {
            double x_phys = scale_.x_factor * ps.to_physical(ps.domain.point(i));
            w += v[i] * v[i] * psi1_(x_phys);
        }
        pt->weight[n] = std::clamp(w, 0.0, 1.0);
    }

    std::lock_guard<std::mutex> lk(mtx_);
    auto [it, inserted] = cache_.emplace(key, pt);
    if (!inserted) return it->second;
    return pt;
}

std::size_t BandTable::cache_size() const {
    std::lock_guard<std::mutex> lk(mtx_);
    return cache_.size();
}

double band_function(const ModelParams& params, double x2, double xi2, int n,
                     SolveOptions opts) {
    if (n < 0) throw InvalidInput("band_function: branch index must be >= 0");
    BandTable table(params, n + 1, Bump1D{-1.0, 1.0, 0.0}, opts);
    auto pt = table.at_xi2(xi2);
    return pt->lambda[n] - 0.5 * params.W_at(x2);
}

NondegeneracyReport check_nondegeneracy(const ModelParams& params,
                                        const std::vector<double>& x2_mesh,
                                        const std::vector<double>& xi2_mesh,
                                        int n_branches, SolveOptions opts) {
    if (x2_mesh.size() < 3 || xi2_mesh.size() < 3)
        throw InvalidInput("check_nondegeneracy: meshes need >= 3 points");
    BandTable table(params, n_branches, Bump1D{-1.0, 1.0, 0.0}, opts);

    NondegeneracyReport rep;
    rep.epsilon0 = std::numeric_limits<double>::infinity();

    std::vector<std::shared_ptr<const BandTable::Point>> pts(xi2_mesh.size());
    for (std::size_t j = 0; j < xi2_mesh.size(); ++j) pts[j] = table.at_xi2(xi2_mesh[j]);

    for (std::size_t j = 1; j + 1 < xi2_mesh.size(); ++j) {
        double dxi = xi2_mesh[j + 1] - xi2_mesh[j - 1];
        for (std::size_t i = 1; i + 1 < x2_mesh.size(); ++i) {
            double dw = (params.W_at(x2_mesh[i + 1]) - params.W_at(x2_mesh[i - 1])) /
                        (x2_mesh[i + 1] - x2_mesh[i - 1]);
            for (int n = 0; n < n_branches; ++n) {
                double lam = pts[j]->lambda[n] - 0.5 * params.W_at(x2_mesh[i]);
                double dlam_dxi = (pts[j + 1]->lambda[n] - pts[j - 1]->lambda[n]) / dxi;
                double dlam_dx2 = -0.5 * dw;
                double val = std::abs(lam) +
                             (std::abs(xi2_mesh[j]) + 1.0) * std::abs(dlam_dxi) +
                             std::abs(dlam_dx2);
                if (val < rep.epsilon0) {
                    rep.epsilon0 = val;
                    rep.at_x2 = x2_mesh[i];
                    rep.at_xi2 = xi2_mesh[j];
                    rep.at_branch = n;
                }
            }
        }
    }
    return rep;
}

} // namespace magband
