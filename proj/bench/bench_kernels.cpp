#include <chrono>
#include <cstdio>
#include <vector>

#include "qthermo/kernels.hpp"

using namespace qthermo;
using kernels::Execution;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

void report(const char* name, double serial_s, double parallel_s,
            bool identical) {
    std::printf("%-24s serial %8.3f ms   parallel %8.3f ms   speedup %5.2fx   "
                "bitwise-equal %s\n",
                name, serial_s * 1e3, parallel_s * 1e3, serial_s / parallel_s,
                identical ? "yes" : "NO");
}

void bench_scan_d2() {
    const long long n = 40'000'000;
    auto t0 = std::chrono::steady_clock::now();
    const auto serial = kernels::scan_entropy_band_d2(
        0.0, 1.0, 0.5, 0.0, 1.0, n, 1e-12, Execution::Serial);
    const double ts = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    const auto parallel = kernels::scan_entropy_band_d2(
        0.0, 1.0, 0.5, 0.0, 1.0, n, 1e-12, Execution::Parallel);
    const double tp = seconds_since(t0);
    report("scan_entropy_band_d2", ts, tp,
           serial.energy == parallel.energy && serial.index == parallel.index);
}

void bench_scan_d3() {
    const long long n = 6'000;
    auto t0 = std::chrono::steady_clock::now();
    const auto serial = kernels::scan_entropy_band_d3(
        0.0, 0.35, 1.0, 0.8, 0.0, 1.0 / static_cast<double>(n), n, 0.0,
        1.0 / static_cast<double>(n), n, 1e-12, Execution::Serial);
    const double ts = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    const auto parallel = kernels::scan_entropy_band_d3(
        0.0, 0.35, 1.0, 0.8, 0.0, 1.0 / static_cast<double>(n), n, 0.0,
        1.0 / static_cast<double>(n), n, 1e-12, Execution::Parallel);
    const double tp = seconds_since(t0);
    report("scan_entropy_band_d3", ts, tp,
           serial.energy == parallel.energy && serial.index == parallel.index);
}

void bench_curve() {
    RealVector evals(6);
    evals << 0.0, 0.2, 0.5, 0.9, 1.4, 2.0;
    std::vector<double> betas;
    for (int i = 0; i < 400'000; ++i) {
        betas.push_back(-40.0 + 80.0 * static_cast<double>(i) / 399'999.0);
    }
    auto t0 = std::chrono::steady_clock::now();
    const auto serial =
        kernels::sample_thermal_curve(evals, betas, Execution::Serial);
    const double ts = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    const auto parallel =
        kernels::sample_thermal_curve(evals, betas, Execution::Parallel);
    const double tp = seconds_since(t0);
    bool identical = serial.size() == parallel.size();
    for (size_t i = 0; identical && i < serial.size(); ++i) {
        identical = serial[i].energy == parallel[i].energy &&
                    serial[i].entropy == parallel[i].entropy &&
                    serial[i].energy_above_min == parallel[i].energy_above_min &&
                    serial[i].energy_below_max == parallel[i].energy_below_max;
    }
    report("sample_thermal_curve", ts, tp, identical);
}

}  // namespace

int main() {
    bench_scan_d2();
    bench_scan_d3();
    bench_curve();
    return 0;
}
