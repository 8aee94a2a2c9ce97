#pragma once

#include "magband/errors.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace magband {

// Hermitian banded matrix, lower bands stored column-major: element (i, j)
// with 0 <= i - j <= bw lives at cols[(bw+1)*j + (i-j)].  Diagonal entries
// must be real (enforced for complex T by taking the real part in the
// factorization).
template <typename T>
struct BandedHermitian {
    int dim = 0;
    int bw = 0; // number of sub-diagonals stored
    std::vector<T> cols;

    void allocate(int dim_, int bw_) {
        if (dim_ < 1 || bw_ < 0) throw InvalidInput("BandedHermitian: bad shape");
        dim = dim_;
        bw = bw_;
        cols.assign(static_cast<std::size_t>(bw + 1) * dim, T(0));
    }
    T& at(int i, int j) { return cols[static_cast<std::size_t>(bw + 1) * j + (i - j)]; }
    const T& at(int i, int j) const { return cols[static_cast<std::size_t>(bw + 1) * j + (i - j)]; }
};

struct BandedInertia {
    long long negative = 0;  // pivots < 0: eigenvalue count below the shift
    long long perturbed = 0; // pivots replaced because |d| fell under the threshold
};

namespace detail {
inline double conj_(double x) { return x; }
inline std::complex<double> conj_(const std::complex<double>& x) { return std::conj(x); }
inline double real_(double x) { return x; }
inline double real_(const std::complex<double>& x) { return x.real(); }
inline double abs2_(double x) { return x * x; }
inline double abs2_(const std::complex<double>& x) { return std::norm(x); }
} // namespace detail

// Inertia of (A - tau I) by in-place banded LDL^H without pivoting.  Tiny
// pivots are replaced by -eps*scale and counted in `perturbed`; each such
// replacement makes the negative count ambiguous by at most one, so the
// honest reading is the interval [negative - perturbed, negative + perturbed].
template <typename T>
BandedInertia banded_inertia_below(const BandedHermitian<T>& A, double tau,
                                   double eps = 1e-14) {
    const int n = A.dim, bw = A.bw;
    if (n == 0) throw InvalidInput("banded_inertia_below: empty matrix");

    std::vector<T> w = A.cols;                 // working factor storage
    std::vector<double> d(n, 0.0);             // real pivots
    auto wat = [&](int i, int j) -> T& {
        return w[static_cast<std::size_t>(bw + 1) * j + (i - j)];
    };

    double scale = 0.0;
    for (const T& x : A.cols) scale = std::max(scale, std::sqrt(detail::abs2_(x)));
    scale = std::max(scale, std::abs(tau)) + 1.0;
    const double floor_piv = eps * scale;

    BandedInertia out;
    for (int j = 0; j < n; ++j) {
        double dj = detail::real_(wat(j, j)) - tau;
        int k_lo = std::max(0, j - bw);
        for (int k = k_lo; k < j; ++k) dj -= detail::abs2_(wat(j, k)) * d[k];

        if (std::abs(dj) < floor_piv) {
            dj = -floor_piv;
            ++out.perturbed;
        }
        d[j] = dj;
        if (dj < 0.0) ++out.negative;

        int i_hi = std::min(n - 1, j + bw);
        for (int i = j + 1; i <= i_hi; ++i) {
            T s = wat(i, j);
            int kk_lo = std::max({0, i - bw, j - bw});
            for (int k = kk_lo; k < j; ++k)
                s -= wat(i, k) * detail::conj_(wat(j, k)) * d[k];
            wat(i, j) = s / dj;
        }
    }
    return out;
}

} // namespace magband
