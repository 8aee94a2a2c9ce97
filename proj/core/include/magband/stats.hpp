#pragma once

#include <vector>

namespace magband {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_abs_residual = 0.0; // in y units
};

// Ordinary least squares y ~ intercept + slope*x; needs >= 2 distinct x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Kendall rank correlation of ys against their index order (trend statistic).
double kendall_tau(const std::vector<double>& ys);

// One-sided exact p-value for an increasing trend: probability, under random
// order, that the concordant-minus-discordant statistic is >= the observed
// one.  Exact by permutation enumeration for n <= 8, normal tail beyond.
double kendall_pvalue_increasing(const std::vector<double>& ys);

// True iff the increasing-trend hypothesis is accepted at level alpha.
bool increasing_trend(const std::vector<double>& ys, double alpha = 0.05);

} // namespace magband
