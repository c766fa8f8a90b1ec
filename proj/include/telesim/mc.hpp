#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "telesim/protocols.hpp"
#include "telesim/rng.hpp"

namespace telesim {

struct McConfig {
    std::uint64_t samples = 1;
    std::uint64_t seed = 0;
    int workers = 1;
};

struct McEstimate {
    std::uint64_t successes = 0;
    std::uint64_t samples = 0;
    double p_hat = 0.0;
    double std_err = 0.0;
};

// Samples `cfg.samples` trajectories of the named protocol, drawing every
// measurement from its exact conditional distribution. Deterministic given
// (seed, workers, samples): worker w consumes a fixed allotment from its
// own stream and totals are combined in worker order. The parallel and
// serial versions compute the identical estimate; the serial one is the
// reference kept for testing and benchmarking.
McEstimate mc_run(const std::string& protocol_name, const InputQubit& input, ChannelParam n,
                  std::optional<int> q, const McConfig& cfg);
McEstimate mc_run_serial(const std::string& protocol_name, const InputQubit& input,
                         ChannelParam n, std::optional<int> q, const McConfig& cfg);

}  // namespace telesim
