#include "magband/stats.hpp"

#include "magband/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace magband {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw InvalidInput("fit_line: need two or more paired samples");
    const std::size_t n = x.size();
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw InvalidInput("fit_line: x values are all equal");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    for (std::size_t i = 0; i < n; ++i)
        f.max_abs_residual = std::max(f.max_abs_residual,
                                      std::abs(y[i] - (f.intercept + f.slope * x[i])));
    return f;
}

namespace {

// Concordant-minus-discordant count of ys against index order; ties count 0.
long long kendall_s(const std::vector<double>& ys) {
    long long s = 0;
    for (std::size_t i = 0; i < ys.size(); ++i)
        for (std::size_t j = i + 1; j < ys.size(); ++j) {
            if (ys[j] > ys[i]) ++s;
            else if (ys[j] < ys[i]) --s;
        }
    return s;
}

} // namespace

double kendall_tau(const std::vector<double>& ys) {
    const std::size_t n = ys.size();
    if (n < 2) return 0.0;
    double denom = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    return static_cast<double>(kendall_s(ys)) / denom;
}

double kendall_pvalue_increasing(const std::vector<double>& ys) {
    const std::size_t n = ys.size();
    if (n < 2) return 1.0;
    long long s_obs = kendall_s(ys);

    if (n <= 8) {
        // Exact: enumerate permutations of the observed values and tally S.
        std::vector<double> v = ys;
        std::sort(v.begin(), v.end());
        long long total = 0, at_least = 0;
        do {
            ++total;
            if (kendall_s(v) >= s_obs) ++at_least;
        } while (std::next_permutation(v.begin(), v.end()));
        return static_cast<double>(at_least) / static_cast<double>(total);
    }

    // Normal approximation with continuity correction.
    double var = n * (n - 1.0) * (2.0 * n + 5.0) / 18.0;
    double z = (static_cast<double>(s_obs) - 1.0) / std::sqrt(var);
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

bool increasing_trend(const std::vector<double>& ys, double alpha) {
    return kendall_pvalue_increasing(ys) <= alpha;
}

} // namespace magband
