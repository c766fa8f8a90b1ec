#include "telesim/verify.hpp"

#include <cmath>

#include "telesim/analytics.hpp"
#include "telesim/bases.hpp"
#include "telesim/mc.hpp"
#include "telesim/protocols.hpp"
#include "telesim/teleport.hpp"

namespace telesim {

namespace {

const InputQubit& probe_input() {
    static const InputQubit in(Amplitude{0.6, 0.0}, Amplitude{0.8, 0.0});
    return in;
}

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        out.push_back(lo + (hi - lo) * static_cast<double>(i) / (count - 1));
    return out;
}

// Max entrywise deviation of sum_k |e_k><e_k| from the identity.
double completeness_deviation(const BasisSet& basis) {
    const std::size_t dim = basis.elements().front().state.dim();
    double dev = 0.0;
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            Amplitude acc = 0.0;
            for (const auto& e : basis.elements())
                acc += e.state.amplitude(r) * std::conj(e.state.amplitude(c));
            dev = std::max(dev, std::abs(acc - (r == c ? Amplitude{1.0} : Amplitude{0.0})));
        }
    }
    return dev;
}

// Smallest deviation from |<e| P |A+>| = 1 over all 4-qubit Pauli strings
// with per-qubit ops in {I, X, Z, ZX}.
double pauli_generation_deviation(const BasisSet& ghz4) {
    const StateVector& generator = ghz4.elements().front().state;
    std::vector<StateVector> images;
    images.reserve(256);
    for (int code = 0; code < 256; ++code) {
        StateVector s = generator;
        for (int qb = 0; qb < 4; ++qb) {
            const int op = (code >> (2 * qb)) & 3;
            if (op & 1) s = apply_unitary(s, pauli_x(), {qb});
            if (op & 2) s = apply_unitary(s, pauli_z(), {qb});
        }
        images.push_back(std::move(s));
    }
    double worst = 0.0;
    for (const auto& e : ghz4.elements()) {
        double best = 1.0;
        for (const auto& img : images)
            best = std::min(best, std::abs(1.0 - std::sqrt(fidelity(e.state, img))));
        worst = std::max(worst, best);
    }
    return worst;
}

CheckResult make_result(std::string name, double dev, double threshold) {
    return {std::move(name), dev, threshold, dev <= threshold};
}

}  // namespace

std::vector<CheckResult> verify_bases() {
    std::vector<CheckResult> out;
    const auto m_grid = linspace(0.05, 1.0, 20);

    double gram_bell = 0.0, gram_ghz3 = 0.0, gram_ghz4 = 0.0;
    double complete = 0.0;
    for (double m : m_grid) {
        gram_bell = std::max(gram_bell, bell_basis(BasisParam(m)).gram_deviation());
        gram_ghz3 = std::max(gram_ghz3, ghz3_basis(BasisParam(m)).gram_deviation());
        gram_ghz4 = std::max(gram_ghz4, ghz4_basis(BasisParam(m)).gram_deviation());
        complete = std::max(complete, completeness_deviation(bell_basis(BasisParam(m))));
        complete = std::max(complete, completeness_deviation(ghz3_basis(BasisParam(m))));
        complete = std::max(complete, completeness_deviation(ghz4_basis(BasisParam(m))));
    }
    out.push_back(make_result("bell gram matrix", gram_bell, 1e-12));
    out.push_back(make_result("ghz3 gram matrix", gram_ghz3, 1e-12));
    out.push_back(make_result("ghz4 gram matrix", gram_ghz4, 1e-12));
    out.push_back(make_result("resolution of identity", complete, 1e-10));

    double uv_dev = 0.0;
    for (double n : linspace(0.0, 1.0, 20)) {
        uv_dev = std::max(uv_dev, u_correction(n).unitarity_deviation());
        uv_dev = std::max(uv_dev, v_correction(n).unitarity_deviation());
    }
    out.push_back(make_result("U_n/V_n unitarity", uv_dev, 1e-12));

    double gen_dev = 0.0;
    for (double m : {0.3, 0.7, 1.0})
        gen_dev = std::max(gen_dev, pauli_generation_deviation(ghz4_basis(BasisParam(m))));
    out.push_back(make_result("ghz4 Pauli generation", gen_dev, 1e-10));

    // m=1 reproduces the standard Bell basis.
    const auto std_bell = bell_basis(BasisParam(1.0));
    const double r = 1.0 / std::sqrt(2.0);
    const StateVector phi_plus(2, {r, 0.0, 0.0, r});
    out.push_back(make_result("bell m=1 standard form",
                              max_amplitude_diff(std_bell.elements()[0].state, phi_plus),
                              1e-12));
    return out;
}

std::vector<CheckResult> verify_formulas() {
    std::vector<CheckResult> out;
    const auto& input = probe_input();
    const auto n_grid = linspace(0.1, 0.9, 9);

    double worst = 0.0;
    std::string worst_name;
    for (const auto& def : protocol_registry()) {
        if (!def.total_formula) continue;
        for (double nv : n_grid) {
            const ChannelParam n(nv);
            const std::vector<int> q_values = def.needs_q
                                                  ? std::vector<int>{1, 2, 3, 4, 5, 6}
                                                  : std::vector<int>{0};
            for (int q : q_values) {
                const std::optional<int> qo = def.needs_q ? std::optional<int>(q) : std::nullopt;
                if (def.name == "ghz_chan_ghz4_mn" && nv == 0.0) continue;
                const ProtocolReport rep = def.run(input, n, qo, default_limits);
                const std::optional<int> fq =
                    formula_needs_q(*def.total_formula) ? qo : std::nullopt;
                const double formula = eval_formula(*def.total_formula, n, fq);
                const double diff = std::abs(rep.corrected_success - formula);
                if (diff > worst) {
                    worst = diff;
                    worst_name = def.name;
                }
                if (def.direct_formula) {
                    const std::optional<int> dq =
                        formula_needs_q(*def.direct_formula) ? qo : std::nullopt;
                    const double dform = eval_formula(*def.direct_formula, n, dq);
                    worst = std::max(worst, std::abs(rep.direct_success - dform));
                }
            }
        }
    }
    out.push_back(make_result("enumeration vs closed forms", worst, 1e-12));

    // Ordering of the three base strategies.
    double ord_dev = 0.0;
    for (double nv : n_grid) {
        const ChannelParam n(nv);
        const double p1 = eval_formula(FormulaId::p_suc1, n);
        const double p2 = eval_formula(FormulaId::p_suc2, n);
        const double p3 = eval_formula(FormulaId::p_suc3, n);
        ord_dev = std::max(ord_dev, std::abs(p2 - p3));
        if (p1 < p2) ord_dev = std::max(ord_dev, p2 - p1);
    }
    out.push_back(make_result("p_suc1 >= p_suc2 = p_suc3", ord_dev, 1e-15));

    // Noisy-model threshold identities.
    double noise_dev = 0.0;
    const double pts[][4] = {{0.9, 0.8, 0.7, 0.5}, {0.5, 0.9, 0.6, 0.3}, {1.0, 1.0, 1.0, 0.8},
                             {0.7, 0.6, 0.9, 0.9}, {0.8, 0.95, 0.85, 0.1}};
    for (const auto& p : pts) {
        const NoiseParams noise(p[0], p[1], p[2]);
        const ChannelParam n(p[3]);
        const double n2 = p[3] * p[3];
        const double r12 = noisy_success(1, n, noise) / noisy_success(2, n, noise);
        noise_dev = std::max(noise_dev,
                             std::abs(r12 - noise.eps_b * noise.eps_u * (1.0 + n2) / noise.eps_m));
        const double r23 = noisy_success(2, n, noise) / noisy_success(3, n, noise);
        noise_dev = std::max(noise_dev, std::abs(r23 - noise.eps_m / (noise.eps_b * noise.eps_b)));
    }
    out.push_back(make_result("noisy crossover identities", noise_dev, 1e-12));

    // Chain tilde step shrinks with q.
    double shrink = 0.0;
    for (double nv : {0.3, 0.6, 0.9}) {
        double prev = eval_formula(FormulaId::chain_tilde_step, ChannelParam(nv), 2);
        for (int q = 3; q <= 12; ++q) {
            const double cur = eval_formula(FormulaId::chain_tilde_step, ChannelParam(nv), q);
            if (cur > prev) shrink = std::max(shrink, cur - prev);
            prev = cur;
        }
    }
    out.push_back(make_result("ancilla step vanishes with q", shrink, 0.0));
    return out;
}

std::vector<CheckResult> verify_distill(int q_max) {
    // Every q up to 200, then doubling steps up to q_max: the identity is
    // cheap per point but quadratic when checked densely at large q.
    std::vector<int> q_values;
    for (int q = 1; q <= std::min(q_max, 200); ++q) q_values.push_back(q);
    for (int q = 400; q < q_max; q *= 2) q_values.push_back(q);
    if (q_max > 200) q_values.push_back(q_max);
    double worst = 0.0;
    for (int q : q_values)
        for (double nv : linspace(0.05, 0.95, 19))
            worst = std::max(worst, distill_equivalence(ChannelParam(nv), q).diff);
    return {make_result("direct network vs distillation", worst, 1e-10)};
}

std::vector<CheckResult> verify_bounds() {
    const auto& input = probe_input();
    double excess = 0.0;
    for (const auto& def : protocol_registry()) {
        for (double nv : linspace(0.02, 1.0, 50)) {
            if (def.name == "ghz_chan_ghz4_mn" && nv == 0.0) continue;
            const ChannelParam n(nv);
            const std::optional<int> q = def.needs_q ? std::optional<int>(3) : std::nullopt;
            const ProtocolReport rep = def.run(input, n, q, default_limits);
            const double bound = eval_formula(FormulaId::bound_one_copy, n);
            if (rep.corrected_success > bound + 1e-12)
                excess = std::max(excess, rep.corrected_success - bound);
        }
    }
    return {make_result("one-copy conversion bound", excess, 1e-12)};
}

bool all_pass(const std::vector<CheckResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

}  // namespace telesim
