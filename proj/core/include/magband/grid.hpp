#pragma once

#include <functional>
#include <vector>

namespace magband {

// Uniform 1D grid with Dirichlet ends: x_min and x_max are boundary nodes
// where functions vanish; the n interior nodes carry the unknowns.
struct Grid1D {
    double x_min = 0.0;
    double x_max = 0.0;
    int n = 0;

    double spacing() const { return (x_max - x_min) / (n + 1); }
    double point(int i) const { return x_min + (i + 1) * spacing(); }
    std::vector<double> points() const;

    void validate() const; // throws InvalidInput on x_min >= x_max or n < 3
};

// Automatic domain for a confining potential: bracket the classically
// allowed region {veff <= e_max} starting from the given well candidates,
// then pad by pad_lengths local harmonic lengths.  The candidates need not
// be exact minima; they seed the scan.
Grid1D auto_domain(const std::function<double(double)>& veff,
                   const std::vector<double>& centers,
                   double e_max,
                   int n,
                   double pad_lengths = 5.0);

} // namespace magband
