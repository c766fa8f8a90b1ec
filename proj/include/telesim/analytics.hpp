#pragma once

#include <optional>
#include <string>
#include <vector>

#include "telesim/teleport.hpp"

namespace telesim {

// Device-imperfection efficiency factors: eps_b for a standard Bell
// measurement, eps_u for the ancilla unitary correction, eps_m for a
// generalized Bell measurement.
struct NoiseParams {
    double eps_b = 1.0;
    double eps_u = 1.0;
    double eps_m = 1.0;

    NoiseParams() = default;
    NoiseParams(double b, double u, double m);
};

// Registry of the closed-form success probabilities.
enum class FormulaId {
    p_suc1,               // 2n^2/(1+n^2)
    p_suc2,               // 2n^2/(1+n^2)^2
    p_suc3,               // 2n^2/(1+n^2)^2
    chain_step,           // per-step success of the entanglement-halving chain, q >= 2
    chain_total,          // cumulative chain success after q steps
    chain_tilde_step,     // success of the final ancilla correction after q steps
    chain_tilde_total,    // chain + final ancilla total (q-independent)
    net_matched_direct,   // balanced-count success of the matched network
    net_matched_total,    // matched network + ancilla corrections
    net_standard_direct,  // balanced-count success of the standard network
    net_standard_total,   // standard network + ancilla corrections
    distill_per08,        // distillation success over the same network
    bound_one_copy,       // conversion bound for a single channel
    bound_two_copy,       // two-copy distillation bound
};

const std::vector<FormulaId>& all_formula_ids();
std::string formula_name(FormulaId id);
std::optional<FormulaId> formula_from_name(const std::string& name);
bool formula_needs_q(FormulaId id);

// Evaluates the named closed form. `q` must be supplied exactly when the
// formula needs it. Large powers n^(2^q) go through repeated squaring in
// extended precision; binomial sums accumulate in log space.
double eval_formula(FormulaId id, ChannelParam n, std::optional<int> q = {});

// The efficiency-degraded success probabilities of the three base
// strategies: eps_b*eps_u*P1, eps_m*P2, eps_b^2*P3.
double noisy_success(int group, ChannelParam n, const NoiseParams& noise);

struct CrossoverCell {
    double r;
    double n;
    double ratio;          // r(1+n^2)
    bool group1_wins;      // ratio > 1
};

// The threshold surface r(1+n^2) over the given grids; r may exceed 1.
std::vector<CrossoverCell> crossover_surface(const std::vector<double>& r_grid,
                                             const std::vector<double>& n_grid);

struct DistillComparison {
    double lhs;   // network total via the direct-protocol formula
    double rhs;   // distillation-protocol partial sum
    double diff;  // |lhs - rhs|
};

// Compares the standard-network total after q teleportations with the
// equivalent distillation success probability at the same truncation.
DistillComparison distill_equivalence(ChannelParam n, int q);

}  // namespace telesim
