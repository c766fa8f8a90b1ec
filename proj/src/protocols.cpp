#include "telesim/protocols.hpp"

#include <array>
#include <cassert>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <utility>

namespace telesim {

namespace {

// Classical balance check on the recorded coefficient multipliers: the
// branch state is proportional to the input exactly when the alpha and
// beta products agree.
bool balanced(double x, double y) {
    const double mx = std::max(x, y);
    return mx > 0.0 && std::abs(x - y) <= 1e-12 * mx;
}

enum class LeafKind { direct_success, corrected_success, failure };

struct Trace {
    std::vector<std::string> labels;
    std::vector<std::string> corrections;
    double prob = 1.0;
};

// Precomputed pieces of one teleportation step.
struct StepResources {
    BasisSet basis;
    StateVector channel;
    double m;
    double n;
    StepResources(BasisParam mm, ChannelParam nn)
        : basis(bell_basis(mm)), channel(channel_state(nn)), m(mm.m), n(nn.n) {}
};

// Enumeration driver: visits every measurement outcome and collects the
// full branch list, with direct/corrected probability sums on the side.
class EnumContext {
public:
    EnumContext(StateVector target, const Tolerances& tol)
        : target_(std::move(target)), tol_(tol) {}

    template <class Fn>
    void measure(Trace& tr, const StateVector& s, const BasisSet& basis,
                 const std::vector<int>& targets, Fn&& fn) {
        const auto outs = project(s, basis, targets, tol_);
        for (std::size_t d = 0; d < outs.size(); ++d) {
            push(tr, outs[d].label, outs[d].probability);
            if (!outs[d].post_state)
                leaf(tr, std::nullopt, LeafKind::failure);
            else
                fn(static_cast<int>(d), *outs[d].post_state);
            pop(tr);
        }
    }

    template <class Fn>
    void teleport(Trace& tr, const StateVector& s, const StepResources& res, Fn&& fn) {
        const StateVector joint = tensor(s, res.channel);
        const auto outs = project(joint, res.basis, {0, 1}, tol_);
        for (int d = 0; d < 4; ++d) {
            const auto& o = outs[static_cast<std::size_t>(d)];
            push(tr, o.label, o.probability);
            if (!o.post_state) {
                leaf(tr, std::nullopt, LeafKind::failure);
            } else {
                for (const auto& op : bell_correction_sequence(d)) tr.corrections.push_back(op);
                fn(d, apply_bell_correction(*o.post_state, d, tol_));
            }
            pop(tr);
        }
    }

    void ancilla(Trace& tr, const StateVector& s, AncillaPattern pattern, ChannelParam n_eff) {
        const auto outs = ancilla_correct(s, pattern, n_eff, {}, tol_);
        for (std::size_t d = 0; d < 2; ++d) {
            const auto& o = outs[d];
            push(tr, o.labels.front(), o.probability);
            for (const auto& op : o.corrections_applied) tr.corrections.push_back(op);
            leaf(tr, o.post_state,
                 d == 0 && o.post_state ? LeafKind::corrected_success : LeafKind::failure);
            pop(tr);
        }
    }

    void record(Trace& tr, const std::string& op) { tr.corrections.push_back(op); }

    void leaf(Trace& tr, std::optional<StateVector> post, LeafKind kind) {
        OutcomeBranch b;
        b.labels = tr.labels;
        b.probability = tr.prob;
        b.post_state = std::move(post);
        b.corrections_applied = tr.corrections;
        b.success = kind != LeafKind::failure;
        if (b.success) {
            assert(b.post_state && fidelity(*b.post_state, target_) > 1.0 - 1e-9);
            corrected_ += tr.prob;
            if (kind == LeafKind::direct_success) direct_ += tr.prob;
        }
        leaves_.push_back(std::move(b));
    }

    double direct_sum() const { return direct_; }
    double corrected_sum() const { return corrected_; }
    std::vector<OutcomeBranch>&& take_leaves() { return std::move(leaves_); }
    const Tolerances& tol() const { return tol_; }

private:
    struct Frame {
        double prob;
        std::size_t corrections_size;
    };

    void push(Trace& tr, const std::string& label, double p) {
        frames_.push_back({tr.prob, tr.corrections.size()});
        tr.labels.push_back(label);
        tr.prob *= p;
    }
    void pop(Trace& tr) {
        tr.labels.pop_back();
        tr.prob = frames_.back().prob;
        tr.corrections.resize(frames_.back().corrections_size);
        frames_.pop_back();
    }

    StateVector target_;
    Tolerances tol_;
    std::vector<Frame> frames_;
    std::vector<OutcomeBranch> leaves_;
    double direct_ = 0.0;
    double corrected_ = 0.0;
};

// Sampling driver: draws one outcome per measurement from the exact
// conditional distribution and reports overall trajectory success.
class SampleContext {
public:
    SampleContext(SplitMix64& rng, const Tolerances& tol) : rng_(&rng), tol_(tol) {}

    template <class Fn>
    void measure(Trace&, const StateVector& s, const BasisSet& basis,
                 const std::vector<int>& targets, Fn&& fn) {
        const auto probs = project_probabilities(s, basis, targets);
        const int d = pick(probs);
        auto out = project_outcome(s, basis, targets, d, tol_);
        if (!out.post_state) return;  // numerically dead branch, counts as failure
        fn(d, *out.post_state);
    }

    template <class Fn>
    void teleport(Trace&, const StateVector& s, const StepResources& res, Fn&& fn) {
        const StateVector joint = tensor(s, res.channel);
        const auto probs = project_probabilities(joint, res.basis, {0, 1});
        const int d = pick(probs);
        auto out = project_outcome(joint, res.basis, {0, 1}, d, tol_);
        if (!out.post_state) return;
        fn(d, apply_bell_correction(*out.post_state, d, tol_));
    }

    void ancilla(Trace&, const StateVector& s, AncillaPattern pattern, ChannelParam n_eff) {
        const auto outs = ancilla_correct(s, pattern, n_eff, {}, tol_);
        const double u = rng_->uniform() * (outs[0].probability + outs[1].probability);
        success_ = u < outs[0].probability && outs[0].post_state.has_value();
    }

    void record(Trace&, const std::string&) {}

    void leaf(Trace&, const std::optional<StateVector>&, LeafKind kind) {
        success_ = kind != LeafKind::failure;
    }

    bool succeeded() const { return success_; }
    const Tolerances& tol() const { return tol_; }

private:
    int pick(const std::vector<double>& probs) {
        double total = 0.0;
        for (double p : probs) total += p;
        const double u = rng_->uniform() * total;
        double cum = 0.0;
        int last_live = 0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            if (probs[i] <= 0.0) continue;
            last_live = static_cast<int>(i);
            cum += probs[i];
            if (u < cum) return last_live;
        }
        return last_live;
    }

    SplitMix64* rng_;
    Tolerances tol_;
    bool success_ = false;
};

// Routes a damped failure state into the ancilla correction, with the
// pattern and effective parameter read off the classical record.
template <class Ctx>
void ancilla_from_record(Ctx& ctx, Trace& tr, const StateVector& s, double x, double y) {
    if (std::max(x, y) <= 0.0) {
        ctx.leaf(tr, std::nullopt, LeafKind::failure);
        return;
    }
    const AncillaPattern pattern = x >= y ? AncillaPattern::A : AncillaPattern::B;
    const double ratio = std::min(std::min(x, y) / std::max(x, y), 1.0);
    ctx.ancilla(tr, s, pattern, ChannelParam(ratio));
}

// ---------------------------------------------------------------------------
// Group protocols and serial compositions

struct GroupResources {
    StepResources step;
    bool with_ancilla;        // group 1
    bool matched_labels_only; // group 2 accepts exactly Phi- and Psi+
    int repeats;              // 1 or 2 teleportations
    GroupResources(double m, double n, bool anc, bool matched, int reps)
        : step(BasisParam(m), ChannelParam(n)),
          with_ancilla(anc),
          matched_labels_only(matched),
          repeats(reps) {}
};

template <class Ctx>
void group_recurse(Ctx& ctx, Trace& tr, const GroupResources& res, const StateVector& s,
                   int step_index, double x, double y) {
    ctx.teleport(tr, s, res.step, [&](int d, const StateVector& post) {
        const auto [mx, my] = bell_multipliers(d, res.step.m, res.step.n);
        const double nx = x * mx, ny = y * my;
        if (step_index < res.repeats) {
            group_recurse(ctx, tr, res, post, step_index + 1, nx, ny);
        } else if (res.with_ancilla) {
            ancilla_from_record(ctx, tr, post, nx, ny);
        } else {
            // Group 2 declares success on its two matched outcomes only;
            // the repeated protocol accepts any balanced record.
            const bool ok =
                res.matched_labels_only ? (d == 1 || d == 2) : balanced(nx, ny);
            ctx.leaf(tr, post, ok ? LeafKind::direct_success : LeafKind::failure);
        }
    });
}

struct ChainResources {
    ChainSchedule schedule;
    std::vector<StepResources> steps;
    explicit ChainResources(ChainSchedule s) : schedule(std::move(s)) {
        steps.reserve(static_cast<std::size_t>(schedule.q));
        for (int j = 0; j < schedule.q; ++j)
            steps.emplace_back(schedule.m_seq[static_cast<std::size_t>(j)],
                               schedule.n_seq[static_cast<std::size_t>(j)]);
    }
};

// Serial chain with early stopping: Bob stops as soon as the record says
// the state is clean; surviving failures optionally get the ancilla.
template <class Ctx>
void chain_recurse(Ctx& ctx, Trace& tr, const ChainResources& res, const StateVector& s, int j,
                   double x, double y) {
    if (j > res.schedule.q) {
        if (res.schedule.final_ancilla)
            ancilla_from_record(ctx, tr, s, x, y);
        else
            ctx.leaf(tr, s, LeafKind::failure);
        return;
    }
    ctx.teleport(tr, s, res.steps[static_cast<std::size_t>(j - 1)],
                 [&](int d, const StateVector& post) {
                     const auto [mx, my] = bell_multipliers(
                         d, res.steps[static_cast<std::size_t>(j - 1)].m,
                         res.steps[static_cast<std::size_t>(j - 1)].n);
                     const double nx = x * mx, ny = y * my;
                     if (balanced(nx, ny))
                         ctx.leaf(tr, post, LeafKind::direct_success);
                     else
                         chain_recurse(ctx, tr, res, post, j + 1, nx, ny);
                 });
}

// One-dimensional network: no intermediate stopping, corrections deferred
// to the recipient; every surviving failure goes through the ancilla.
template <class Ctx>
void network_recurse(Ctx& ctx, Trace& tr, const ChainResources& res, const StateVector& s,
                     int j, double x, double y) {
    if (j > res.schedule.q) {
        if (balanced(x, y))
            ctx.leaf(tr, s, LeafKind::direct_success);
        else
            ancilla_from_record(ctx, tr, s, x, y);
        return;
    }
    ctx.teleport(tr, s, res.steps[static_cast<std::size_t>(j - 1)],
                 [&](int d, const StateVector& post) {
                     const auto [mx, my] = bell_multipliers(
                         d, res.steps[static_cast<std::size_t>(j - 1)].m,
                         res.steps[static_cast<std::size_t>(j - 1)].n);
                     network_recurse(ctx, tr, res, post, j + 1, x * mx, y * my);
                 });
}

// ---------------------------------------------------------------------------
// Parallel-channel and GHZ-channel protocols

// One measurement-outcome row of a masked protocol: the label-determined
// Pauli ops that bring Bob's pair to x alpha|00> + y beta|11>.
struct VariantRow {
    std::vector<std::string> ops;
    double x = 0.0;
    double y = 0.0;
};

// Builds a row from the signed branch coefficients: the branch state is
// a*alpha|k> + b*beta|~k>. Chooses Paulis (classically, from the label)
// that land on non-negative coefficients with alpha on |00>.
VariantRow make_row(double a, int alpha_ket, double b) {
    VariantRow row;
    assert(!(a < 0.0 && b < 0.0));
    assert(!(a < 0.0 && alpha_ket == 0));
    if (alpha_ket == 0b11) {
        if (a < 0.0) {
            row.ops.push_back("Z1");
            a = -a;
        }
        row.ops.push_back("X0");
        row.ops.push_back("X1");
        if (b < 0.0) {
            row.ops.push_back("Z1");
            b = -b;
        }
    } else {
        if (a < 0.0) {
            row.ops.push_back((alpha_ket & 0b10) ? "Z0" : "Z1");
            a = -a;
        }
        if (b < 0.0) {
            row.ops.push_back((~alpha_ket & 0b10) ? "Z0" : "Z1");
            b = -b;
        }
        if (alpha_ket & 0b10) row.ops.push_back("X0");
        if (alpha_ket & 0b01) row.ops.push_back("X1");
    }
    row.x = a;
    row.y = b;
    return row;
}

// Extracts the data qubit after the unmasking CNOT; the companion qubit is
// in |0> by construction.
StateVector drop_settled_aux(const StateVector& s, const Tolerances& tol) {
    static const BasisSet readout = computational_basis(1);
    const auto out = project_outcome(s, readout, {1}, 0, tol);
    assert(out.probability > 1.0 - 1e-9);
    return *out.post_state;
}

template <class Ctx>
void masked_tail(Ctx& ctx, Trace& tr, const VariantRow& row, const StateVector& bob_pair) {
    StateVector s = bob_pair;
    for (const auto& op : row.ops) {
        s = apply_unitary(s, op[0] == 'X' ? pauli_x() : pauli_z(), {op[1] - '0'}, ctx.tol());
        ctx.record(tr, op);
    }
    s = apply_unitary(s, cnot(), {0, 1}, ctx.tol());
    ctx.record(tr, "CNOT");
    const StateVector data = drop_settled_aux(s, ctx.tol());
    if (balanced(row.x, row.y))
        ctx.leaf(tr, data, LeafKind::direct_success);
    else
        ancilla_from_record(ctx, tr, data, row.x, row.y);
}

StateVector masked_input(const InputQubit& in) {
    // CNOT of the input against a fresh |0> ancilla: alpha|00> + beta|11>.
    return StateVector(2, {in.alpha, 0.0, 0.0, in.beta});
}

StateVector ghz4_channel(double n) {
    std::vector<Amplitude> amps(16);
    const double norm = 1.0 / std::sqrt(1.0 + n * n);
    amps[0b0000] = norm;
    amps[0b1111] = n * norm;
    return StateVector(4, std::move(amps));
}

struct ParallelResources {
    ParallelVariant variant;
    double m;
    double n;
    std::unique_ptr<BasisSet> joint_basis;  // ghz3/ghz4 variants
    std::unique_ptr<BasisSet> bell;         // double_bell variant
    StateVector channel;
    StateVector initial;
    std::vector<VariantRow> rows;

    ParallelResources(ParallelVariant v, double m_, ChannelParam n_, const InputQubit& input)
        : variant(v),
          m(m_),
          n(n_.n),
          channel(channel_state(n_)),
          initial(v == ParallelVariant::ghz3
                      ? tensor(tensor(input.state(), channel), channel)
                      : tensor(tensor(masked_input(input), channel), channel)) {
        const double n2 = n * n;
        switch (variant) {
            case ParallelVariant::ghz3:
                joint_basis = std::make_unique<BasisSet>(ghz3_basis(BasisParam(m)));
                rows = {make_row(1.0, 0b00, m * n2),  make_row(m, 0b00, -n2),
                        make_row(n, 0b10, m * n),     make_row(m * n, 0b10, -n),
                        make_row(m * n2, 0b11, 1.0),  make_row(-n2, 0b11, m),
                        make_row(m * n, 0b01, n),     make_row(-n, 0b01, m * n)};
                break;
            case ParallelVariant::ghz4:
                joint_basis = std::make_unique<BasisSet>(ghz4_basis(BasisParam(m)));
                rows.assign(16, VariantRow{});
                rows[0] = make_row(1.0, 0b00, m * n2);    // A+
                rows[1] = make_row(m, 0b00, -n2);         // A-
                rows[2] = make_row(m * n, 0b01, n);       // B+
                rows[3] = make_row(-n, 0b01, m * n);      // B-
                rows[8] = make_row(n, 0b10, m * n);       // E+
                rows[9] = make_row(m * n, 0b10, -n);      // E-
                rows[10] = make_row(m * n2, 0b11, 1.0);   // F+
                rows[11] = make_row(-n2, 0b11, m);        // F-
                break;
            case ParallelVariant::double_bell: {
                bell = std::make_unique<BasisSet>(bell_basis(BasisParam(m)));
                // Per-wire maps of an uncorrected step: coefficient on the
                // alpha path, coefficient on the beta path (signed), and
                // whether the receiving ket flips.
                const double c0[4] = {1.0, m, n, m * n};
                const double c1[4] = {m * n, -n, m, -1.0};
                rows.reserve(16);
                for (int d1 = 0; d1 < 4; ++d1) {
                    for (int d2 = 0; d2 < 4; ++d2) {
                        const int k = ((d1 >= 2) ? 0b10 : 0) | ((d2 >= 2) ? 0b01 : 0);
                        rows.push_back(make_row(c0[d1] * c0[d2], k, c1[d1] * c1[d2]));
                    }
                }
                break;
            }
        }
    }
};

template <class Ctx>
void parallel_execute(Ctx& ctx, Trace& tr, const ParallelResources& res) {
    switch (res.variant) {
        case ParallelVariant::ghz3:
            // Register order (1,3,5,4,6); Alice holds 1,3,4.
            ctx.measure(tr, res.initial, *res.joint_basis, {0, 1, 3},
                        [&](int d, const StateVector& bob) {
                            masked_tail(ctx, tr, res.rows[static_cast<std::size_t>(d)], bob);
                        });
            break;
        case ParallelVariant::ghz4:
            // Register order (1,2,3,5,4,6); joint measurement on 1,3,2,4.
            ctx.measure(tr, res.initial, *res.joint_basis, {0, 2, 1, 4},
                        [&](int d, const StateVector& bob) {
                            masked_tail(ctx, tr, res.rows[static_cast<std::size_t>(d)], bob);
                        });
            break;
        case ParallelVariant::double_bell:
            ctx.measure(tr, res.initial, *res.bell, {0, 2},
                        [&](int d1, const StateVector& rest) {
                            ctx.measure(tr, rest, *res.bell, {0, 2},
                                        [&](int d2, const StateVector& bob) {
                                            masked_tail(
                                                ctx, tr,
                                                res.rows[static_cast<std::size_t>(4 * d1 + d2)],
                                                bob);
                                        });
                        });
            break;
    }
}

struct GhzChannelResources {
    GhzReadout readout;
    double m;
    double n;
    std::unique_ptr<BasisSet> joint_basis;
    std::unique_ptr<BasisSet> bell;
    StateVector channel;
    StateVector initial;
    std::vector<VariantRow> rows;

    GhzChannelResources(GhzReadout r, double m_, ChannelParam n_, const InputQubit& input)
        : readout(r),
          m(m_),
          n(n_.n),
          channel(ghz4_channel(n_.n)),
          initial(tensor(masked_input(input), channel)) {
        if (readout == GhzReadout::double_bell) {
            bell = std::make_unique<BasisSet>(bell_basis(BasisParam(m)));
            rows.assign(16, VariantRow{});
            rows[0] = make_row(1.0, 0b00, m * m * n);   // Phi+ Phi+
            rows[1] = make_row(m, 0b00, -m * n);        // Phi+ Phi-
            rows[4] = make_row(m, 0b00, -m * n);        // Phi- Phi+
            rows[5] = make_row(m * m, 0b00, n);         // Phi- Phi-
            rows[10] = make_row(n, 0b11, m * m);        // Psi+ Psi+
            rows[11] = make_row(m * n, 0b11, -m);       // Psi+ Psi-
            rows[14] = make_row(m * n, 0b11, -m);       // Psi- Psi+
            rows[15] = make_row(m * m * n, 0b11, 1.0);  // Psi- Psi-
        } else {
            joint_basis = std::make_unique<BasisSet>(ghz4_basis(BasisParam(m)));
            rows.assign(16, VariantRow{});
            rows[0] = make_row(1.0, 0b00, m * n);    // A+
            rows[1] = make_row(m, 0b00, -n);         // A-
            rows[10] = make_row(m * n, 0b11, 1.0);   // F+
            rows[11] = make_row(-n, 0b11, m);        // F-
        }
    }
};

GhzReadout variant_readout(GhzChannelVariant v) {
    return v == GhzChannelVariant::double_bell_m1 ? GhzReadout::double_bell
                                                  : GhzReadout::ghz4;
}

double variant_m(GhzChannelVariant v, double n) {
    return v == GhzChannelVariant::ghz4_measure_mn ? n : 1.0;
}

template <class Ctx>
void ghz_channel_execute(Ctx& ctx, Trace& tr, const GhzChannelResources& res) {
    if (res.readout == GhzReadout::double_bell) {
        ctx.measure(tr, res.initial, *res.bell, {0, 2}, [&](int d1, const StateVector& rest) {
            ctx.measure(tr, rest, *res.bell, {0, 2}, [&](int d2, const StateVector& bob) {
                masked_tail(ctx, tr, res.rows[static_cast<std::size_t>(4 * d1 + d2)], bob);
            });
        });
    } else {
        ctx.measure(tr, res.initial, *res.joint_basis, {0, 2, 1, 4},
                    [&](int d, const StateVector& bob) {
                        masked_tail(ctx, tr, res.rows[static_cast<std::size_t>(d)], bob);
                    });
    }
}

// ---------------------------------------------------------------------------
// Report assembly

ProtocolReport finish_report(std::string name, ProtocolParams params, EnumContext&& ctx,
                             EntanglementUse use) {
    ProtocolReport rep;
    rep.protocol_name = std::move(name);
    rep.params = std::move(params);
    rep.direct_success = ctx.direct_sum();
    rep.corrected_success = ctx.corrected_sum();
    rep.branches = ctx.take_leaves();
    rep.entanglement_consumed = use;
    return rep;
}

void fill_per_step(ProtocolReport& rep, int q) {
    rep.per_step.assign(static_cast<std::size_t>(q), 0.0);
    for (const auto& b : rep.branches) {
        if (!b.success || b.labels.empty() || b.labels.back() == "aux0") continue;
        const std::size_t step = b.labels.size();
        if (step >= 1 && step <= static_cast<std::size_t>(q))
            rep.per_step[step - 1] += b.probability;
    }
}

void check_budget(int q, const EnumLimits& limits) {
    if (q < 1) throw std::invalid_argument("q must be positive");
    if (q >= 32 || (std::uint64_t{1} << (2 * q)) > limits.branch_budget)
        throw std::invalid_argument("exact enumeration exceeds branch budget; use Monte Carlo mode");
}

}  // namespace

ChainSchedule::ChainSchedule(int q_, std::vector<BasisParam> m, std::vector<ChannelParam> nseq,
                             bool ancilla)
    : q(q_), m_seq(std::move(m)), n_seq(std::move(nseq)), final_ancilla(ancilla) {
    if (q < 1) throw std::invalid_argument("q must be positive");
    if (m_seq.size() != static_cast<std::size_t>(q) ||
        n_seq.size() != static_cast<std::size_t>(q))
        throw std::invalid_argument("schedule length does not match q");
}

ChainSchedule chain1_schedule(ChannelParam n, int q, bool final_ancilla) {
    return ChainSchedule(q, std::vector<BasisParam>(static_cast<std::size_t>(q), BasisParam(1.0)),
                         std::vector<ChannelParam>(static_cast<std::size_t>(q), n),
                         final_ancilla);
}

ChainSchedule chain2_schedule(ChannelParam n, int q, bool final_ancilla) {
    return ChainSchedule(q,
                         std::vector<BasisParam>(static_cast<std::size_t>(q), BasisParam(n.n)),
                         std::vector<ChannelParam>(static_cast<std::size_t>(q), n),
                         final_ancilla);
}

ChainSchedule chain3_schedule(ChannelParam n, int q, bool final_ancilla) {
    // n_1 = n_2 = n, then n_j = n_(j-1)^2: entanglement halving.
    std::vector<ChannelParam> nseq;
    nseq.reserve(static_cast<std::size_t>(q));
    double current = n.n;
    for (int j = 1; j <= q; ++j) {
        nseq.push_back(ChannelParam(current));
        if (j >= 2) current *= current;
    }
    return ChainSchedule(q, std::vector<BasisParam>(static_cast<std::size_t>(q), BasisParam(1.0)),
                         std::move(nseq), final_ancilla);
}

ProtocolReport run_group1(const InputQubit& input, ChannelParam n, const Tolerances& tol) {
    const GroupResources res(1.0, n.n, true, false, 1);
    EnumContext ctx(input.state(), tol);
    Trace tr;
    group_recurse(ctx, tr, res, input.state(), 1, 1.0, 1.0);
    return finish_report("group1", {n.n, std::nullopt, "m=1"}, std::move(ctx), {1, 0});
}

ProtocolReport run_group2(const InputQubit& input, ChannelParam n, const Tolerances& tol) {
    const GroupResources res(n.n, n.n, false, true, 1);
    EnumContext ctx(input.state(), tol);
    Trace tr;
    group_recurse(ctx, tr, res, input.state(), 1, 1.0, 1.0);
    return finish_report("group2", {n.n, std::nullopt, "m=n"}, std::move(ctx), {1, 0});
}

ProtocolReport run_group3(const InputQubit& input, ChannelParam n, const Tolerances& tol) {
    const GroupResources res(1.0, n.n, false, false, 2);
    EnumContext ctx(input.state(), tol);
    Trace tr;
    group_recurse(ctx, tr, res, input.state(), 1, 1.0, 1.0);
    return finish_report("group3", {n.n, std::nullopt, "m=1 twice"}, std::move(ctx), {2, 0});
}

ProtocolReport run_chain(const InputQubit& input, const ChainSchedule& schedule,
                         const EnumLimits& limits, const Tolerances& tol) {
    check_budget(schedule.q, limits);
    const ChainResources res(schedule);
    EnumContext ctx(input.state(), tol);
    Trace tr;
    chain_recurse(ctx, tr, res, input.state(), 1, 1.0, 1.0);
    ProtocolParams params{schedule.n_seq.front().n, schedule.q, "custom"};
    ProtocolReport rep = finish_report("chain", std::move(params), std::move(ctx),
                                       {schedule.q, 0});
    fill_per_step(rep, schedule.q);
    return rep;
}

ProtocolReport run_network(const InputQubit& input, ChannelParam n, int q, NetworkMode mode,
                           const EnumLimits& limits, const Tolerances& tol) {
    check_budget(q, limits);
    const ChainSchedule schedule = mode == NetworkMode::matched
                                       ? chain2_schedule(n, q, true)
                                       : chain1_schedule(n, q, true);
    const ChainResources res(schedule);
    EnumContext ctx(input.state(), tol);
    Trace tr;
    network_recurse(ctx, tr, res, input.state(), 1, 1.0, 1.0);
    const char* name = mode == NetworkMode::matched ? "net_matched" : "net_standard";
    const char* policy = mode == NetworkMode::matched ? "m=n" : "m=1";
    return finish_report(name, {n.n, q, policy}, std::move(ctx), {q, 0});
}

ProtocolReport run_parallel(const InputQubit& input, ChannelParam n, ParallelVariant variant,
                            const Tolerances& tol) {
    const ParallelResources res(variant, 1.0, n, input);
    EnumContext ctx(input.state(), tol);
    Trace tr;
    parallel_execute(ctx, tr, res);
    const char* name = variant == ParallelVariant::ghz3          ? "par_ghz3"
                       : variant == ParallelVariant::double_bell ? "par_double_bell"
                                                                 : "par_ghz4";
    return finish_report(name, {n.n, std::nullopt, "m=1"}, std::move(ctx), {2, 0});
}

ProtocolReport run_ghz_channel(const InputQubit& input, ChannelParam n,
                               GhzChannelVariant variant, const Tolerances& tol) {
    const GhzChannelResources res(variant_readout(variant), variant_m(variant, n.n), n,
                                  input);
    EnumContext ctx(input.state(), tol);
    Trace tr;
    ghz_channel_execute(ctx, tr, res);
    const char* name = variant == GhzChannelVariant::ghz4_measure_m1   ? "ghz_chan_ghz4_m1"
                       : variant == GhzChannelVariant::ghz4_measure_mn ? "ghz_chan_ghz4_mn"
                                                                       : "ghz_chan_double_bell";
    const char* policy = variant == GhzChannelVariant::ghz4_measure_mn ? "m=n" : "m=1";
    return finish_report(name, {n.n, std::nullopt, policy}, std::move(ctx), {0, 1});
}

ProtocolReport run_parallel_custom(const InputQubit& input, ChannelParam n,
                                   ParallelVariant variant, BasisParam m,
                                   const Tolerances& tol) {
    const ParallelResources res(variant, m.m, n, input);
    EnumContext ctx(input.state(), tol);
    Trace tr;
    parallel_execute(ctx, tr, res);
    const char* name = variant == ParallelVariant::ghz3          ? "par_ghz3"
                       : variant == ParallelVariant::double_bell ? "par_double_bell"
                                                                 : "par_ghz4";
    return finish_report(name, {n.n, std::nullopt, "m=custom"}, std::move(ctx), {2, 0});
}

ProtocolReport run_ghz_channel_custom(const InputQubit& input, ChannelParam n,
                                      GhzReadout readout, BasisParam m,
                                      const Tolerances& tol) {
    const GhzChannelResources res(readout, m.m, n, input);
    EnumContext ctx(input.state(), tol);
    Trace tr;
    ghz_channel_execute(ctx, tr, res);
    const char* name =
        readout == GhzReadout::ghz4 ? "ghz_chan_ghz4" : "ghz_chan_double_bell";
    return finish_report(name, {n.n, std::nullopt, "m=custom"}, std::move(ctx), {0, 1});
}

std::function<bool(SplitMix64&)> make_trajectory_sampler(const std::string& protocol_name,
                                                         const InputQubit& input,
                                                         ChannelParam n, std::optional<int> q) {
    const Tolerances tol = default_tol;
    const auto need_q = [&]() {
        if (!q) throw std::invalid_argument("protocol requires q");
        if (*q < 1) throw std::invalid_argument("q must be positive");
        return *q;
    };

    if (protocol_name == "group1" || protocol_name == "group2" || protocol_name == "group3") {
        const bool anc = protocol_name == "group1";
        const bool matched = protocol_name == "group2";
        const int reps = protocol_name == "group3" ? 2 : 1;
        auto res = std::make_shared<GroupResources>(matched ? n.n : 1.0, n.n, anc, matched, reps);
        return [res, input, tol](SplitMix64& rng) {
            SampleContext ctx(rng, tol);
            Trace tr;
            group_recurse(ctx, tr, *res, input.state(), 1, 1.0, 1.0);
            return ctx.succeeded();
        };
    }
    if (protocol_name == "chain1" || protocol_name == "chain2" || protocol_name == "chain3" ||
        protocol_name == "chain3_ancilla") {
        const int steps = need_q();
        ChainSchedule sch = protocol_name == "chain1"
                                ? chain1_schedule(n, steps)
                                : protocol_name == "chain2"
                                      ? chain2_schedule(n, steps)
                                      : chain3_schedule(n, steps,
                                                        protocol_name == "chain3_ancilla");
        auto res = std::make_shared<ChainResources>(std::move(sch));
        return [res, input, tol](SplitMix64& rng) {
            SampleContext ctx(rng, tol);
            Trace tr;
            chain_recurse(ctx, tr, *res, input.state(), 1, 1.0, 1.0);
            return ctx.succeeded();
        };
    }
    if (protocol_name == "net_matched" || protocol_name == "net_standard") {
        const int steps = need_q();
        ChainSchedule sch = protocol_name == "net_matched" ? chain2_schedule(n, steps, true)
                                                           : chain1_schedule(n, steps, true);
        auto res = std::make_shared<ChainResources>(std::move(sch));
        return [res, input, tol](SplitMix64& rng) {
            SampleContext ctx(rng, tol);
            Trace tr;
            network_recurse(ctx, tr, *res, input.state(), 1, 1.0, 1.0);
            return ctx.succeeded();
        };
    }
    if (protocol_name == "par_ghz3" || protocol_name == "par_double_bell" ||
        protocol_name == "par_ghz4") {
        const ParallelVariant v = protocol_name == "par_ghz3"          ? ParallelVariant::ghz3
                                  : protocol_name == "par_double_bell" ? ParallelVariant::double_bell
                                                                       : ParallelVariant::ghz4;
        auto res = std::make_shared<ParallelResources>(v, 1.0, n, input);
        return [res, tol](SplitMix64& rng) {
            SampleContext ctx(rng, tol);
            Trace tr;
            parallel_execute(ctx, tr, *res);
            return ctx.succeeded();
        };
    }
    if (protocol_name == "ghz_chan_ghz4_m1" || protocol_name == "ghz_chan_ghz4_mn" ||
        protocol_name == "ghz_chan_double_bell") {
        const GhzChannelVariant v =
            protocol_name == "ghz_chan_ghz4_m1"   ? GhzChannelVariant::ghz4_measure_m1
            : protocol_name == "ghz_chan_ghz4_mn" ? GhzChannelVariant::ghz4_measure_mn
                                                  : GhzChannelVariant::double_bell_m1;
        auto res = std::make_shared<GhzChannelResources>(variant_readout(v),
                                                         variant_m(v, n.n), n, input);
        return [res, tol](SplitMix64& rng) {
            SampleContext ctx(rng, tol);
            Trace tr;
            ghz_channel_execute(ctx, tr, *res);
            return ctx.succeeded();
        };
    }
    throw std::invalid_argument("unknown protocol: " + protocol_name);
}

bool sample_trajectory(const std::string& protocol_name, const InputQubit& input,
                       ChannelParam n, std::optional<int> q, SplitMix64& rng) {
    return make_trajectory_sampler(protocol_name, input, n, q)(rng);
}

const std::vector<ProtocolDef>& protocol_registry() {
    using RunFn = std::function<ProtocolReport(const InputQubit&, ChannelParam,
                                               std::optional<int>, const EnumLimits&)>;
    static const std::vector<ProtocolDef> defs = [] {
        const auto need_q = [](std::optional<int> q) {
            if (!q) throw std::invalid_argument("protocol requires q");
            return *q;
        };
        std::vector<ProtocolDef> out;
        const auto add = [&](std::string name, bool needs_q, std::optional<FormulaId> direct,
                             std::optional<FormulaId> total, RunFn run) {
            out.push_back({std::move(name), needs_q, direct, total, std::move(run)});
        };
        add("group1", false, std::nullopt, FormulaId::p_suc1,
            [](const InputQubit& in, ChannelParam n, std::optional<int>, const EnumLimits&) {
                return run_group1(in, n);
            });
        add("group2", false, FormulaId::p_suc2, FormulaId::p_suc2,
            [](const InputQubit& in, ChannelParam n, std::optional<int>, const EnumLimits&) {
                return run_group2(in, n);
            });
        add("group3", false, FormulaId::p_suc3, FormulaId::p_suc3,
            [](const InputQubit& in, ChannelParam n, std::optional<int>, const EnumLimits&) {
                return run_group3(in, n);
            });
        add("chain1", true, std::nullopt, std::nullopt,
            [need_q](const InputQubit& in, ChannelParam n, std::optional<int> q,
                     const EnumLimits& lim) {
                ProtocolReport rep = run_chain(in, chain1_schedule(n, need_q(q)), lim);
                rep.protocol_name = "chain1";
                rep.params.m_policy = "m=1";
                return rep;
            });
        add("chain2", true, std::nullopt, std::nullopt,
            [need_q](const InputQubit& in, ChannelParam n, std::optional<int> q,
                     const EnumLimits& lim) {
                ProtocolReport rep = run_chain(in, chain2_schedule(n, need_q(q)), lim);
                rep.protocol_name = "chain2";
                rep.params.m_policy = "m=n";
                return rep;
            });
        add("chain3", true, FormulaId::chain_total, FormulaId::chain_total,
            [need_q](const InputQubit& in, ChannelParam n, std::optional<int> q,
                     const EnumLimits& lim) {
                ProtocolReport rep = run_chain(in, chain3_schedule(n, need_q(q), false), lim);
                rep.protocol_name = "chain3";
                rep.params.m_policy = "halving";
                return rep;
            });
        add("chain3_ancilla", true, FormulaId::chain_total, FormulaId::chain_tilde_total,
            [need_q](const InputQubit& in, ChannelParam n, std::optional<int> q,
                     const EnumLimits& lim) {
                ProtocolReport rep = run_chain(in, chain3_schedule(n, need_q(q), true), lim);
                rep.protocol_name = "chain3_ancilla";
                rep.params.m_policy = "halving";
                return rep;
            });
        add("net_matched", true, FormulaId::net_matched_direct, FormulaId::net_matched_total,
            [need_q](const InputQubit& in, ChannelParam n, std::optional<int> q,
                     const EnumLimits& lim) {
                return run_network(in, n, need_q(q), NetworkMode::matched, lim);
            });
        add("net_standard", true, FormulaId::net_standard_direct, FormulaId::net_standard_total,
            [need_q](const InputQubit& in, ChannelParam n, std::optional<int> q,
                     const EnumLimits& lim) {
                return run_network(in, n, need_q(q), NetworkMode::standard, lim);
            });
        add("par_ghz3", false, FormulaId::p_suc2, FormulaId::p_suc1,
            [](const InputQubit& in, ChannelParam n, std::optional<int>, const EnumLimits&) {
                return run_parallel(in, n, ParallelVariant::ghz3);
            });
        add("par_double_bell", false, FormulaId::p_suc2, FormulaId::p_suc1,
            [](const InputQubit& in, ChannelParam n, std::optional<int>, const EnumLimits&) {
                return run_parallel(in, n, ParallelVariant::double_bell);
            });
        add("par_ghz4", false, FormulaId::p_suc2, FormulaId::p_suc1,
            [](const InputQubit& in, ChannelParam n, std::optional<int>, const EnumLimits&) {
                return run_parallel(in, n, ParallelVariant::ghz4);
            });
        add("ghz_chan_ghz4_m1", false, std::nullopt, FormulaId::p_suc1,
            [](const InputQubit& in, ChannelParam n, std::optional<int>, const EnumLimits&) {
                return run_ghz_channel(in, n, GhzChannelVariant::ghz4_measure_m1);
            });
        add("ghz_chan_ghz4_mn", false, FormulaId::p_suc2, FormulaId::p_suc1,
            [](const InputQubit& in, ChannelParam n, std::optional<int>, const EnumLimits&) {
                return run_ghz_channel(in, n, GhzChannelVariant::ghz4_measure_mn);
            });
        add("ghz_chan_double_bell", false, std::nullopt, FormulaId::p_suc1,
            [](const InputQubit& in, ChannelParam n, std::optional<int>, const EnumLimits&) {
                return run_ghz_channel(in, n, GhzChannelVariant::double_bell_m1);
            });
        return out;
    }();
    return defs;
}

const ProtocolDef* find_protocol(const std::string& name) {
    for (const auto& def : protocol_registry())
        if (def.name == name) return &def;
    return nullptr;
}

std::vector<std::string> protocol_names() {
    std::vector<std::string> names;
    for (const auto& def : protocol_registry()) names.push_back(def.name);
    return names;
}

}  // namespace telesim
