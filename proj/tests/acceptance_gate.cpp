// Verification gate: runs every suite criterion and prints one line per
// result.  Exit status 0 means every criterion that ran also passed.
#include "magband/acceptance.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <thread>

int main(int argc, char** argv) {
    magband::AcceptanceOptions opts;
    opts.workers = static_cast<int>(std::thread::hardware_concurrency());
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) opts.quick = true;
    }
    if (const char* env = std::getenv("MAGBAND_ACCEPT_QUICK"); env && env[0] == '1')
        opts.quick = true;

    magband::AcceptanceReport report = magband::run_acceptance(opts);
    int ran = 0, passed = 0;
    for (const auto& r : report.results) {
        const char* status = !r.ran ? "SKIP" : (r.passed ? "PASS" : "FAIL");
        std::printf("criterion %2d %-36s %s (%.1fs) %s\n", r.id, r.name.c_str(), status,
                    r.elapsed_seconds, r.detail.c_str());
        if (r.ran) {
            ++ran;
            if (r.passed) ++passed;
        }
    }
    std::printf("%d of %d ran criteria passed\n", passed, ran);
    return report.all_passed() ? 0 : 1;
}
