// Benchmark: OpenMP streaming kernels against the serial reference
// implementations, with a max-relative-deviation check between the two.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <omp.h>

#include "spdc/reference.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double secs(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double max_rel_dev(const std::vector<double>& a, const std::vector<double>& b) {
    double ref = 0;
    for (double v : a) ref = std::max(ref, std::abs(v));
    double dev = 0;
    for (size_t i = 0; i < a.size(); ++i) dev = std::max(dev, std::abs(a[i] - b[i]));
    return ref > 0 ? dev / ref : 0.0;
}

double max_rel_dev_c(const std::vector<spdc::Complex>& a, const std::vector<spdc::Complex>& b) {
    double ref = 0;
    for (const auto& v : a) ref = std::max(ref, std::abs(v));
    double dev = 0;
    for (size_t i = 0; i < a.size(); ++i) dev = std::max(dev, std::abs(a[i] - b[i]));
    return ref > 0 ? dev / ref : 0.0;
}

} // namespace

int main(int argc, char** argv) {
    int n = 64;
    int threads = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::string(argv[i]) == "--n" && i + 1 < argc) n = std::atoi(argv[++i]);
        if (std::string(argv[i]) == "--threads" && i + 1 < argc) threads = std::atoi(argv[++i]);
    }
    if (threads > 0) omp_set_num_threads(threads);

    spdc::CrystalSpec crystal;
    spdc::PumpMode pump;
    spdc::GridSpec grid{n, 1.25};

    std::printf("kernel benchmark: n=%d threads=%d\n", n, omp_get_max_threads());
    std::printf("%-26s %10s %10s %8s %12s\n", "kernel", "serial[s]", "omp[s]", "speedup", "max rel dev");

    {
        auto t0 = Clock::now();
        const auto ref = spdc::reference::build_1d_amplitude(grid, pump, crystal);
        const double ts = secs(t0);
        t0 = Clock::now();
        const auto fast = spdc::build_1d_amplitude(grid, pump, crystal);
        const double tp = secs(t0);
        std::printf("%-26s %10.3f %10.3f %8.2f %12.3e\n", "build_1d_amplitude", ts, tp,
                    ts / tp, max_rel_dev_c(ref.m, fast.m));
    }
    {
        auto t0 = Clock::now();
        const auto ref = spdc::reference::singles_map_2d(spdc::Arm::Signal, {}, {}, grid, pump, crystal);
        const double ts = secs(t0);
        t0 = Clock::now();
        const auto fast = spdc::singles_map_2d(spdc::Arm::Signal, {}, {}, grid, pump, crystal);
        const double tp = secs(t0);
        std::printf("%-26s %10.3f %10.3f %8.2f %12.3e\n", "singles_map_2d", ts, tp,
                    ts / tp, max_rel_dev(ref, fast));
    }
    {
        const auto amp = spdc::build_1d_amplitude(grid, pump, crystal);
        auto t0 = Clock::now();
        std::vector<spdc::Complex> ref, fast;
        for (int rep = 0; rep < 50; ++rep)
            ref = spdc::reference::conditional_signal_amplitude_1d(rep * 4.0, amp, {});
        const double ts = secs(t0);
        t0 = Clock::now();
        for (int rep = 0; rep < 50; ++rep)
            fast = spdc::conditional_signal_amplitude_1d(rep * 4.0, amp, {});
        const double tp = secs(t0);
        std::printf("%-26s %10.3f %10.3f %8.2f %12.3e\n", "conditional_1d (x50)", ts, tp,
                    ts / tp, max_rel_dev_c(ref, fast));
    }
    return 0;
}
