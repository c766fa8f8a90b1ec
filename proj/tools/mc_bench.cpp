// Benchmark of the Monte Carlo engine: OpenMP worker loop against the
// serial reference. Both must produce bit-identical counts; the table
// reports wall times and the speedup.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "telesim/mc.hpp"

using namespace telesim;

namespace {

double time_of(const std::function<McEstimate()>& fn, McEstimate& out) {
    const auto t0 = std::chrono::steady_clock::now();
    out = fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    std::uint64_t samples = 500000;
    int workers = 4;
    if (argc > 1) samples = std::strtoull(argv[1], nullptr, 10);
    if (argc > 2) workers = std::atoi(argv[2]);

    struct Case {
        const char* name;
        double n;
        std::optional<int> q;
    };
    const std::vector<Case> cases = {
        {"group1", 0.5, std::nullopt},
        {"group3", 0.6, std::nullopt},
        {"par_double_bell", 0.7, std::nullopt},
        {"net_standard", 0.7, 12},
    };

    const InputQubit input(0.6, 0.8);
    McConfig cfg;
    cfg.samples = samples;
    cfg.seed = 1234;
    cfg.workers = workers;

    std::printf("samples=%llu workers=%d\n", static_cast<unsigned long long>(samples),
                workers);
    std::printf("%-18s %12s %12s %9s %10s\n", "protocol", "serial [s]", "openmp [s]",
                "speedup", "p_hat");
    bool all_match = true;
    for (const auto& c : cases) {
        McEstimate serial, parallel;
        const double ts = time_of(
            [&] { return mc_run_serial(c.name, input, ChannelParam(c.n), c.q, cfg); }, serial);
        const double tp =
            time_of([&] { return mc_run(c.name, input, ChannelParam(c.n), c.q, cfg); },
                    parallel);
        const bool match = serial.successes == parallel.successes;
        all_match = all_match && match;
        std::printf("%-18s %12.3f %12.3f %8.2fx %10.6f%s\n", c.name, ts, tp, ts / tp,
                    parallel.p_hat, match ? "" : "  COUNT MISMATCH");
    }
    if (!all_match) {
        std::printf("serial and OpenMP counts disagree\n");
        return 1;
    }
    std::printf("serial and OpenMP counts are bit-identical\n");
    return 0;
}
