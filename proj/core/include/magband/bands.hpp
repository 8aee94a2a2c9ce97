#pragma once

#include "magband/branches.hpp"
#include "magband/cutoff.hpp"
#include "magband/model.hpp"

#include <cstdint>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

namespace magband {

// Cached evaluations of the fiber band data.  The fiber operator in the
// normal form (sigma = phi = 1) is, after rescale_to_unit, exactly half the
// energy factor times the unit-scale operator at eta = xi2/eta_factor, so
// one table serves every (x2, xi2): the x2 dependence is only the additive
// -W(x2)/2 shift applied by callers.
//
// weight[n] = sum_i v_n(x_i)^2 psi1(x1_phys(x_i)) for the unit eigenvector
// v_n; it lies in [0, 1] and carries the x1-cutoff mass of branch n.
class BandTable {
public:
    BandTable(const ModelParams& params, int n_branches, Bump1D psi1_phys,
              SolveOptions opts = {});

    struct Point {
        std::vector<double> lambda; // fiber branch values at this xi2 (no W shift)
        std::vector<double> weight;
        std::vector<double> err;
    };

    std::shared_ptr<const Point> at_eta(double eta) const; // unit-scale eta
    std::shared_ptr<const Point> at_xi2(double xi2) const {
        return at_eta(xi2 / scale_.eta_factor);
    }

    const ScalingMap& scaling() const { return scale_; }
    const Bump1D& psi1() const { return psi1_; }
    int n_branches() const { return tracer_.n_branches(); }
    int nu() const { return tracer_.nu(); }
    int ell() const { return tracer_.ell(); }
    std::size_t cache_size() const;

private:
    BranchTracer tracer_;
    ScalingMap scale_;
    Bump1D psi1_;
    double half_energy_factor_;

    mutable std::mutex mtx_;
    mutable std::unordered_map<std::uint64_t, std::shared_ptr<const Point>> cache_;
};

// Lambda_n(x2, xi2) = lambda_n(xi2) - W(x2)/2 through a one-shot table.
double band_function(const ModelParams& params, double x2, double xi2, int n,
                     SolveOptions opts = {});

struct NondegeneracyReport {
    double epsilon0 = 0.0; // min over the mesh of |L| + (|xi2|+1)|dL/dxi2| + |dL/dx2|
    double at_x2 = 0.0, at_xi2 = 0.0;
    int at_branch = 0;
};

// Central-difference scan of the band nondegeneracy functional over a mesh.
NondegeneracyReport check_nondegeneracy(const ModelParams& params,
                                        const std::vector<double>& x2_mesh,
                                        const std::vector<double>& xi2_mesh,
                                        int n_branches, SolveOptions opts = {});

} // namespace magband
