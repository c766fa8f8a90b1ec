#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "telesim/bases.hpp"
#include "telesim/statevec.hpp"

namespace telesim {

// Channel entanglement parameter n in [0,1]; n=0 means no entanglement.
struct ChannelParam {
    double n;
    explicit ChannelParam(double value);
};

// One leaf of a protocol's outcome tree.
struct OutcomeBranch {
    std::vector<std::string> labels;
    double probability = 0.0;
    std::optional<StateVector> post_state;  // surviving register; empty for dead branches
    std::vector<std::string> corrections_applied;
    bool success = false;
};

// (|00> + n|11>)/sqrt(1+n^2).
StateVector channel_state(ChannelParam n);

// Ancilla-correction unitaries. u_correction cleans states of the form
// alpha|0> + n beta|1>; v_correction cleans n alpha|0> + beta|1>.
Matrix u_correction(double n);
Matrix v_correction(double n);

// Which damped form a single-qubit state has, as known from the classical
// measurement record: A is alpha|0> + n beta|1>, B is n alpha|0> + beta|1>.
enum class AncillaPattern { A, B };

// One teleportation step: Bell measurement outcome with the standard Pauli
// correction already applied to the receiving qubit. `multiplier_zero` and
// `multiplier_one` are the coefficients the step puts in front of the input
// state's alpha and beta (the classical record of the branch).
struct TeleportOutcome {
    std::string label;
    double probability = 0.0;  // conditional on the step's input state
    std::optional<StateVector> post_state;
    std::vector<std::string> corrections;
    double multiplier_zero = 0.0;
    double multiplier_one = 0.0;
};

// Teleports an arbitrary single-qubit state through (|00>+n|11>)-type
// channel with a Bell-m measurement. Returns the four outcomes in basis
// order, Pauli corrections applied.
std::array<TeleportOutcome, 4> teleport_step(const StateVector& input, BasisParam m,
                                             ChannelParam n,
                                             const Tolerances& tol = default_tol);

// Bob's Pauli sequence for Bell outcome 0..3 (Phi+, Phi-, Psi+, Psi-),
// applied left to right.
const std::vector<std::string>& bell_correction_sequence(int outcome);
StateVector apply_bell_correction(const StateVector& state, int outcome,
                                  const Tolerances& tol = default_tol);

// Coefficient multipliers one corrected step puts in front of (alpha, beta).
std::pair<double, double> bell_multipliers(int outcome, double m, double n);

// Closed-form branch probabilities of a single step (the oracle side of the
// dual-path check): index 0..3 in basis order.
std::array<double, 4> teleport_step_probabilities(double alpha_sq, double beta_sq, double m,
                                                  double n);

// The generalized Bell measurement step of the basic protocol.
std::vector<OutcomeBranch> single_teleport(const InputQubit& input, BasisParam m,
                                           ChannelParam n, const Tolerances& tol = default_tol);

// Attaches a |0> ancilla to a damped single-qubit state, applies U_n or V_n
// per the pattern, and measures the ancilla. Returns the two conditional
// branches: "aux0" (clean state recovered) and "aux1" (failure). When
// `expected` is given the state is checked against the pattern within
// tol.unitary; a mismatch raises "uncorrectable state shape".
std::vector<OutcomeBranch> ancilla_correct(const StateVector& state, AncillaPattern pattern,
                                           ChannelParam n_eff,
                                           const std::optional<InputQubit>& expected = {},
                                           const Tolerances& tol = default_tol);

// Two consecutive teleportations with independent basis and channel
// parameters; exactly 16 branches ordered by (first outcome, second
// outcome) in Bell-basis order.
std::vector<OutcomeBranch> two_step_table(const InputQubit& input, BasisParam m_a,
                                          ChannelParam n_a, BasisParam m_b, ChannelParam n_b,
                                          const Tolerances& tol = default_tol);

// Closed-form probability of a two-step branch (row-order oracle):
// row = 4*first + second.
double two_step_probability(int row, double alpha_sq, double beta_sq, double m_a, double n_a,
                            double m_b, double n_b);

}  // namespace telesim
