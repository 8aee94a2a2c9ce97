#include "magband/cutoff.hpp"

#include "magband/errors.hpp"

#include <algorithm>
#include <cmath>

namespace magband {

namespace {

// Quintic smoothstep: C^2 at both ends, monotone on [0,1].
double smooth01(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

} // namespace

double Bump1D::operator()(double x) const {
    if (x <= lo || x >= hi) return 0.0;
    if (edge == 0.0) return 1.0;
    if (x < lo + edge) return smooth01((x - lo) / edge);
    if (x > hi - edge) return smooth01((hi - x) / edge);
    return 1.0;
}

void Bump1D::validate() const {
    if (!(lo < hi)) throw InvalidInput("Bump1D: lo must be < hi");
    if (!(edge >= 0.0) || 2.0 * edge > hi - lo)
        throw InvalidInput("Bump1D: edge width must satisfy 0 <= 2*edge <= hi-lo");
}

void CutoffSpec::validate() const {
    psi1.validate();
    psi2.validate();
}

CutoffSpec CutoffSpec::standard() {
    CutoffSpec c;
    c.psi1 = Bump1D{-0.48, 0.48, 0.15};
    c.psi2 = Bump1D{-0.48, 0.48, 0.15};
    return c;
}

CutoffSpec CutoffSpec::window(double x1_lo, double x1_hi, double x2_lo, double x2_hi) {
    CutoffSpec c;
    c.psi1 = Bump1D{x1_lo, x1_hi, 0.0};
    c.psi2 = Bump1D{x2_lo, x2_hi, 0.0};
    c.validate();
    return c;
}

std::vector<std::pair<double, double>> bump_panels(const Bump1D& bump, int min_panels) {
    std::vector<double> edges{bump.lo};
    if (bump.edge > 0.0) {
        edges.push_back(bump.lo + bump.edge);
        edges.push_back(bump.hi - bump.edge);
    }
    edges.push_back(bump.hi);
    std::vector<std::pair<double, double>> panels;
    const double total = bump.hi - bump.lo;
    for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
        double len = edges[s + 1] - edges[s];
        if (len <= 0.0) continue;
        int k = std::max(1, static_cast<int>(std::lround(min_panels * len / total)));
        for (int i = 0; i < k; ++i)
            panels.emplace_back(edges[s] + len * i / k, edges[s] + len * (i + 1) / k);
    }
    return panels;
}

namespace {

constexpr double kGx8[8] = {-0.9602898564975363, -0.7966664774136267,
                            -0.5255324099163290, -0.1834346424956498,
                            0.1834346424956498,  0.5255324099163290,
                            0.7966664774136267,  0.9602898564975363};
constexpr double kGw8[8] = {0.1012285362903763, 0.2223810344533745,
                            0.3137066458778873, 0.3626837833783620,
                            0.3626837833783620, 0.3137066458778873,
                            0.2223810344533745, 0.1012285362903763};

} // namespace

void gauss8_append(double a, double b, std::vector<double>& xs, std::vector<double>& ws) {
    double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    for (int k = 0; k < 8; ++k) {
        xs.push_back(c + hw * kGx8[k]);
        ws.push_back(hw * kGw8[k]);
    }
}

} // namespace magband
