#include "magband/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace magband {

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    unsigned hw = std::thread::hardware_concurrency();
    std::size_t w = workers > 0 ? static_cast<std::size_t>(workers) : (hw ? hw : 1u);
    w = std::min(w, n);

    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::mutex err_mtx;
    std::exception_ptr first_err;
    std::size_t first_err_index = n;

    auto body = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mtx);
                if (i < first_err_index) {
                    first_err_index = i;
                    first_err = std::current_exception();
                }
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(w);
    for (std::size_t t = 0; t < w; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (first_err) std::rethrow_exception(first_err);
}

double pairwise_sum(const std::vector<double>& xs) {
    // Recursive halving with a small sequential base keeps the order fixed.
    struct Rec {
        static double run(const double* p, std::size_t n) {
            if (n <= 8) {
                double s = 0.0;
                for (std::size_t i = 0; i < n; ++i) s += p[i];
                return s;
            }
            std::size_t half = n / 2;
            return run(p, half) + run(p + half, n - half);
        }
    };
    return xs.empty() ? 0.0 : Rec::run(xs.data(), xs.size());
}

} // namespace magband
