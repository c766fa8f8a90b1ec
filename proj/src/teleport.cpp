#include "telesim/teleport.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace telesim {

// Bob's correction per measurement label: Phi+ -> none, Phi- -> Z,
// Psi+ -> X, Psi- -> X then Z.
const std::vector<std::string>& bell_correction_sequence(int outcome) {
    static const std::vector<std::string> seqs[4] = {{}, {"Z"}, {"X"}, {"X", "Z"}};
    return seqs[outcome];
}

StateVector apply_bell_correction(const StateVector& state, int outcome, const Tolerances& tol) {
    StateVector out = state;
    for (const auto& op : bell_correction_sequence(outcome))
        out = apply_unitary(out, op == "X" ? pauli_x() : pauli_z(), {0}, tol);
    return out;
}

// Per-outcome (alpha, beta) coefficient multipliers of one corrected step:
// Phi+ -> (1, mn), Phi- -> (m, n), Psi+ -> (n, m), Psi- -> (mn, 1).
std::pair<double, double> bell_multipliers(int outcome, double m, double n) {
    switch (outcome) {
        case 0: return {1.0, m * n};
        case 1: return {m, n};
        case 2: return {n, m};
        case 3: return {m * n, 1.0};
        default: throw std::invalid_argument("outcome out of range");
    }
}

namespace {

const BasisSet& aux_readout_basis() {
    static const BasisSet basis = computational_basis(1);
    return basis;
}

}  // namespace

ChannelParam::ChannelParam(double value) : n(value) {
    if (!(value >= 0.0 && value <= 1.0)) throw std::invalid_argument("n out of range");
}

StateVector channel_state(ChannelParam n) {
    const double norm = 1.0 / std::sqrt(1.0 + n.n * n.n);
    return StateVector(2, {norm, 0.0, 0.0, n.n * norm});
}

Matrix u_correction(double n) {
    const double s = std::sqrt(1.0 - n * n);
    Matrix u(4);
    u.at(0, 0) = n;
    u.at(0, 1) = s;
    u.at(1, 3) = 1.0;
    u.at(2, 2) = 1.0;
    u.at(3, 0) = s;
    u.at(3, 1) = -n;
    return u;
}

Matrix v_correction(double n) {
    const double s = std::sqrt(1.0 - n * n);
    Matrix v(4);
    v.at(0, 0) = 1.0;
    v.at(1, 3) = 1.0;
    v.at(2, 1) = s;
    v.at(2, 2) = n;
    v.at(3, 1) = -n;
    v.at(3, 2) = s;
    return v;
}

std::array<double, 4> teleport_step_probabilities(double alpha_sq, double beta_sq, double m,
                                                  double n) {
    const double denom = (1.0 + m * m) * (1.0 + n * n);
    const auto eta1 = [&](double a2, double b2) { return (a2 + m * m * n * n * b2) / denom; };
    const auto eta2 = [&](double a2, double b2) { return (m * m * a2 + n * n * b2) / denom; };
    return {eta1(alpha_sq, beta_sq), eta2(alpha_sq, beta_sq), eta2(beta_sq, alpha_sq),
            eta1(beta_sq, alpha_sq)};
}

std::array<TeleportOutcome, 4> teleport_step(const StateVector& input, BasisParam m,
                                             ChannelParam n, const Tolerances& tol) {
    if (input.num_qubits() != 1) throw std::invalid_argument("teleport input must be one qubit");
    const StateVector joint = tensor(input, channel_state(n));
    const auto outcomes = project(joint, bell_basis(m), {0, 1}, tol);

    std::array<TeleportOutcome, 4> result;
    for (int d = 0; d < 4; ++d) {
        TeleportOutcome& o = result[static_cast<std::size_t>(d)];
        o.label = outcomes[static_cast<std::size_t>(d)].label;
        o.probability = outcomes[static_cast<std::size_t>(d)].probability;
        o.corrections = bell_correction_sequence(d);
        std::tie(o.multiplier_zero, o.multiplier_one) = bell_multipliers(d, m.m, n.n);
        if (outcomes[static_cast<std::size_t>(d)].post_state)
            o.post_state =
                apply_bell_correction(*outcomes[static_cast<std::size_t>(d)].post_state, d, tol);
    }

#ifndef NDEBUG
    // Dual-path check: projection probabilities against the closed forms.
    {
        const double a2 = std::norm(input.amplitude(0));
        const double b2 = std::norm(input.amplitude(1));
        const auto exact = teleport_step_probabilities(a2, b2, m.m, n.n);
        for (int d = 0; d < 4; ++d)
            assert(std::abs(result[static_cast<std::size_t>(d)].probability -
                            exact[static_cast<std::size_t>(d)]) < 1e-10);
    }
#endif
    return result;
}

std::vector<OutcomeBranch> single_teleport(const InputQubit& input, BasisParam m,
                                           ChannelParam n, const Tolerances& tol) {
    const StateVector target = input.state();
    const auto outcomes = teleport_step(target, m, n, tol);
    std::vector<OutcomeBranch> branches;
    branches.reserve(4);
    for (const auto& o : outcomes) {
        OutcomeBranch b;
        b.labels = {o.label};
        b.probability = o.probability;
        b.post_state = o.post_state;
        b.corrections_applied = o.corrections;
        b.success = o.post_state && std::abs(o.multiplier_zero - o.multiplier_one) <=
                                        tol.eq * std::max(o.multiplier_zero, o.multiplier_one);
        if (b.success) assert(fidelity(*b.post_state, target) > 1.0 - tol.eq);
        branches.push_back(std::move(b));
    }
    return branches;
}

std::vector<OutcomeBranch> ancilla_correct(const StateVector& state, AncillaPattern pattern,
                                           ChannelParam n_eff,
                                           const std::optional<InputQubit>& expected,
                                           const Tolerances& tol) {
    if (state.num_qubits() != 1)
        throw std::invalid_argument("ancilla correction expects a one-qubit state");
    if (expected) {
        // The state must be proportional to the damped form of the expected
        // qubit; compare via the cross product of the two amplitude pairs.
        const Amplitude e0 = pattern == AncillaPattern::A ? expected->alpha
                                                          : n_eff.n * expected->alpha;
        const Amplitude e1 = pattern == AncillaPattern::A ? n_eff.n * expected->beta
                                                          : expected->beta;
        const double scale = std::sqrt(std::norm(e0) + std::norm(e1));
        if (scale <= tol.null_branch)
            throw std::invalid_argument("uncorrectable state shape");
        const double cross =
            std::abs(state.amplitude(0) * e1 - state.amplitude(1) * e0) / scale;
        if (cross > tol.unitary) throw std::invalid_argument("uncorrectable state shape");
    }

    const StateVector aux(1, {1.0, 0.0});
    const Matrix gate = pattern == AncillaPattern::A ? u_correction(n_eff.n)
                                                     : v_correction(n_eff.n);
    const StateVector joint = apply_unitary(tensor(state, aux), gate, {0, 1}, tol);
    const auto outcomes = project(joint, aux_readout_basis(), {1}, tol);

    const std::string gate_name = pattern == AncillaPattern::A ? "U_n" : "V_n";
    std::vector<OutcomeBranch> branches(2);
    for (int d = 0; d < 2; ++d) {
        OutcomeBranch& b = branches[static_cast<std::size_t>(d)];
        b.labels = {d == 0 ? "aux0" : "aux1"};
        b.probability = outcomes[static_cast<std::size_t>(d)].probability;
        b.post_state = outcomes[static_cast<std::size_t>(d)].post_state;
        b.corrections_applied = {gate_name, "measure_aux"};
        b.success = (d == 0) && b.post_state.has_value();
        if (b.success && expected)
            assert(fidelity(*b.post_state, expected->state()) > 1.0 - tol.eq);
    }
    return branches;
}

double two_step_probability(int row, double alpha_sq, double beta_sq, double m_a, double n_a,
                            double m_b, double n_b) {
    const int first = row / 4, second = row % 4;
    const auto [xa, ya] = bell_multipliers(first, m_a, n_a);
    const auto [xb, yb] = bell_multipliers(second, m_b, n_b);
    const double x = xa * xb, y = ya * yb;
    const double pab_sq = 1.0 / ((1.0 + m_a * m_a) * (1.0 + n_a * n_a) * (1.0 + m_b * m_b) *
                                 (1.0 + n_b * n_b));
    return pab_sq * (x * x * alpha_sq + y * y * beta_sq);
}

std::vector<OutcomeBranch> two_step_table(const InputQubit& input, BasisParam m_a,
                                          ChannelParam n_a, BasisParam m_b, ChannelParam n_b,
                                          const Tolerances& tol) {
    const StateVector target = input.state();
    const auto first = teleport_step(target, m_a, n_a, tol);

    std::vector<OutcomeBranch> branches;
    branches.reserve(16);
    const auto bell_labels = bell_basis(m_b).elements();
    for (int i = 0; i < 4; ++i) {
        const auto& fo = first[static_cast<std::size_t>(i)];
        if (!fo.post_state) {
            // Dead first-step branch: keep the four table rows with zero
            // probability so the row order stays fixed.
            for (int j = 0; j < 4; ++j) {
                OutcomeBranch b;
                b.labels = {fo.label, bell_labels[static_cast<std::size_t>(j)].label};
                b.probability = 0.0;
                b.corrections_applied = fo.corrections;
                branches.push_back(std::move(b));
            }
            continue;
        }
        const auto second = teleport_step(*fo.post_state, m_b, n_b, tol);
        for (int j = 0; j < 4; ++j) {
            const auto& so = second[static_cast<std::size_t>(j)];
            OutcomeBranch b;
            b.labels = {fo.label, so.label};
            b.probability = fo.probability * so.probability;
            b.post_state = so.post_state;
            b.corrections_applied = fo.corrections;
            b.corrections_applied.insert(b.corrections_applied.end(), so.corrections.begin(),
                                         so.corrections.end());
            const double x = fo.multiplier_zero * so.multiplier_zero;
            const double y = fo.multiplier_one * so.multiplier_one;
            b.success = b.post_state && std::abs(x - y) <= tol.eq * std::max(x, y);
            if (b.success) assert(fidelity(*b.post_state, target) > 1.0 - tol.eq);
#ifndef NDEBUG
            assert(std::abs(b.probability -
                            two_step_probability(4 * i + j, std::norm(input.alpha),
                                                 std::norm(input.beta), m_a.m, n_a.n, m_b.m,
                                                 n_b.n)) < 1e-10);
#endif
            branches.push_back(std::move(b));
        }
    }
    return branches;
}

}  // namespace telesim
