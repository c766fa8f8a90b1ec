#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "telesim/analytics.hpp"
#include "telesim/rng.hpp"
#include "telesim/teleport.hpp"
#include "telesim/tolerances.hpp"

namespace telesim {

struct ProtocolParams {
    double n = 0.0;
    std::optional<int> q;
    std::string m_policy;  // e.g. "m=1", "m=n", "halving"
};

struct EntanglementUse {
    int bell = 0;
    int ghz4 = 0;
};

// Aggregate of one protocol run by exact branch enumeration.
struct ProtocolReport {
    std::string protocol_name;
    ProtocolParams params;
    double direct_success = 0.0;     // success without any ancilla correction
    double corrected_success = 0.0;  // all successful branches
    std::vector<OutcomeBranch> branches;
    EntanglementUse entanglement_consumed;
    std::vector<double> per_step;  // chains: success probability at step j (1-based)
};

// Measurement schedule of a serial chain: q teleportations with per-step
// basis and channel parameters, optionally followed by an ancilla
// correction of the surviving failure branches.
struct ChainSchedule {
    int q = 1;
    std::vector<BasisParam> m_seq;
    std::vector<ChannelParam> n_seq;
    bool final_ancilla = false;

    ChainSchedule(int q_, std::vector<BasisParam> m, std::vector<ChannelParam> nseq,
                  bool ancilla);
};

// The three named chain configurations: constant channels with standard
// Bell measurements, constant channels with matched measurements, and the
// entanglement-halving rule n_j = n^(2^(j-2)) for j >= 2.
ChainSchedule chain1_schedule(ChannelParam n, int q, bool final_ancilla = false);
ChainSchedule chain2_schedule(ChannelParam n, int q, bool final_ancilla = false);
ChainSchedule chain3_schedule(ChannelParam n, int q, bool final_ancilla);

enum class NetworkMode { matched, standard };
enum class ParallelVariant { ghz3, double_bell, ghz4 };
enum class GhzChannelVariant { ghz4_measure_m1, ghz4_measure_mn, double_bell_m1 };
enum class GhzReadout { ghz4, double_bell };

ProtocolReport run_group1(const InputQubit& input, ChannelParam n,
                          const Tolerances& tol = default_tol);
ProtocolReport run_group2(const InputQubit& input, ChannelParam n,
                          const Tolerances& tol = default_tol);
ProtocolReport run_group3(const InputQubit& input, ChannelParam n,
                          const Tolerances& tol = default_tol);
ProtocolReport run_chain(const InputQubit& input, const ChainSchedule& schedule,
                         const EnumLimits& limits = default_limits,
                         const Tolerances& tol = default_tol);
ProtocolReport run_network(const InputQubit& input, ChannelParam n, int q, NetworkMode mode,
                           const EnumLimits& limits = default_limits,
                           const Tolerances& tol = default_tol);
ProtocolReport run_parallel(const InputQubit& input, ChannelParam n, ParallelVariant variant,
                            const Tolerances& tol = default_tol);
ProtocolReport run_ghz_channel(const InputQubit& input, ChannelParam n,
                               GhzChannelVariant variant, const Tolerances& tol = default_tol);

// Escape hatches for measurement parameters the first-class variants do not
// use (e.g. m = n^2 readouts). Same machinery, no headline guarantees.
ProtocolReport run_parallel_custom(const InputQubit& input, ChannelParam n,
                                   ParallelVariant variant, BasisParam m,
                                   const Tolerances& tol = default_tol);
ProtocolReport run_ghz_channel_custom(const InputQubit& input, ChannelParam n,
                                      GhzReadout readout, BasisParam m,
                                      const Tolerances& tol = default_tol);

// Prepared trajectory sampler: protocol resources (bases, channel states,
// correction tables) are built once and shared read-only, so the returned
// callable is safe to invoke from concurrent workers with their own
// streams. Each call draws one trajectory, sampling every measurement from
// its exact conditional distribution, and returns overall success.
std::function<bool(SplitMix64&)> make_trajectory_sampler(const std::string& protocol_name,
                                                         const InputQubit& input,
                                                         ChannelParam n, std::optional<int> q);

// One-shot convenience wrapper around make_trajectory_sampler.
bool sample_trajectory(const std::string& protocol_name, const InputQubit& input,
                       ChannelParam n, std::optional<int> q, SplitMix64& rng);

// Registry entry tying a protocol name to its runners and closed forms.
struct ProtocolDef {
    std::string name;
    bool needs_q = false;
    std::optional<FormulaId> direct_formula;
    std::optional<FormulaId> total_formula;
    std::function<ProtocolReport(const InputQubit&, ChannelParam, std::optional<int>,
                                 const EnumLimits&)>
        run;
};

const std::vector<ProtocolDef>& protocol_registry();
const ProtocolDef* find_protocol(const std::string& name);
std::vector<std::string> protocol_names();

}  // namespace telesim
