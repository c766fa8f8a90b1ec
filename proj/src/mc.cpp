#include "telesim/mc.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace telesim {

namespace {

std::uint64_t worker_quota(const McConfig& cfg, int w) {
    const std::uint64_t base = cfg.samples / static_cast<std::uint64_t>(cfg.workers);
    const std::uint64_t rem = cfg.samples % static_cast<std::uint64_t>(cfg.workers);
    return base + (static_cast<std::uint64_t>(w) < rem ? 1 : 0);
}

void check_config(const McConfig& cfg) {
    if (cfg.samples < 1) throw std::invalid_argument("samples must be positive");
    if (cfg.workers < 1) throw std::invalid_argument("workers must be positive");
}

std::uint64_t run_worker(const std::function<bool(SplitMix64&)>& sample, const McConfig& cfg,
                         int w) {
    SplitMix64 rng = worker_stream(cfg.seed, static_cast<std::uint64_t>(w));
    const std::uint64_t quota = worker_quota(cfg, w);
    std::uint64_t count = 0;
    for (std::uint64_t i = 0; i < quota; ++i)
        if (sample(rng)) ++count;
    return count;
}

McEstimate combine(const std::vector<std::uint64_t>& counts, std::uint64_t samples) {
    McEstimate est;
    est.samples = samples;
    for (std::uint64_t c : counts) est.successes += c;
    est.p_hat = static_cast<double>(est.successes) / static_cast<double>(samples);
    est.std_err = std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(samples));
    return est;
}

}  // namespace

McEstimate mc_run(const std::string& protocol_name, const InputQubit& input, ChannelParam n,
                  std::optional<int> q, const McConfig& cfg) {
    check_config(cfg);
    const auto sample = make_trajectory_sampler(protocol_name, input, n, q);
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(cfg.workers), 0);
    // Worker w is a logical stream, not a thread: its count depends only on
    // (seed, w, quota), so the reduction is bit-identical however OpenMP
    // schedules the iterations.
#pragma omp parallel for schedule(dynamic)
    for (int w = 0; w < cfg.workers; ++w)
        counts[static_cast<std::size_t>(w)] = run_worker(sample, cfg, w);
    return combine(counts, cfg.samples);
}

McEstimate mc_run_serial(const std::string& protocol_name, const InputQubit& input,
                         ChannelParam n, std::optional<int> q, const McConfig& cfg) {
    check_config(cfg);
    const auto sample = make_trajectory_sampler(protocol_name, input, n, q);
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(cfg.workers), 0);
    for (int w = 0; w < cfg.workers; ++w)
        counts[static_cast<std::size_t>(w)] = run_worker(sample, cfg, w);
    return combine(counts, cfg.samples);
}

}  // namespace telesim
