#include "doctest.h"

#include "magband/parallel.hpp"
#include "magband/stats.hpp"

#include <atomic>
#include <cmath>
#include <vector>

using namespace magband;

TEST_CASE("line fit recovers slope, intercept, and residual scale") {
    std::vector<double> x{1, 2, 3, 4, 5};
    std::vector<double> y;
    for (double xi : x) y.push_back(2.5 * xi - 1.0);
    LineFit f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(f.max_abs_residual < 1e-12);

    y[2] += 0.3; // one outlier shows up in the residual, not silently
    LineFit g = fit_line(x, y);
    CHECK(g.max_abs_residual > 0.1);
}

TEST_CASE("rank correlation separates trends from noise") {
    CHECK(kendall_tau({1, 2, 3, 4, 5}) == doctest::Approx(1.0));
    CHECK(kendall_tau({5, 4, 3, 2, 1}) == doctest::Approx(-1.0));
    CHECK(kendall_tau({2, 5, 1, 4, 3}) == doctest::Approx(0.0));

    // A strictly increasing sequence of length 5 defeats the 5 percent level;
    // three points cannot (p = 1/6 under random order).
    CHECK(increasing_trend({0.1, 0.2, 0.3, 0.4, 0.5}));
    CHECK_FALSE(increasing_trend({0.1, 0.2, 0.3}));
    CHECK_FALSE(increasing_trend({0.5, 0.4, 0.3, 0.2, 0.1}));

    CHECK(kendall_pvalue_increasing({1, 2, 3}) == doctest::Approx(1.0 / 6.0));
    CHECK(kendall_pvalue_increasing({1, 2, 3, 4, 5}) <
          kendall_pvalue_increasing({1, 2, 3}));
}

TEST_CASE("parallel map covers every index exactly once") {
    std::vector<std::atomic<int>> hits(257);
    parallel_for(257, 4, [&](std::size_t i) { hits[i].fetch_add(1); });
    for (const auto& h : hits) CHECK(h.load() == 1);
    parallel_for(5, 1, [&](std::size_t i) { hits[i].fetch_add(1); });
    for (std::size_t i = 0; i < 5; ++i) CHECK(hits[i].load() == 2);
}

TEST_CASE("parallel map rethrows the lowest-index failure") {
    try {
        parallel_for(64, 4, [&](std::size_t i) {
            if (i == 10 || i == 40) throw std::runtime_error(std::to_string(i));
        });
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()) == "10");
    }
}

TEST_CASE("pairwise sum is exact on representable data and order stable") {
    std::vector<double> xs(1000, 0.125);
    CHECK(pairwise_sum(xs) == 125.0);
    CHECK(pairwise_sum({}) == 0.0);
    CHECK(pairwise_sum({3.5}) == 3.5);
}
