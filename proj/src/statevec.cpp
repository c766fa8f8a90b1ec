#include "telesim/statevec.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "telesim/bases.hpp"

namespace telesim {

namespace {

bool finite(const Amplitude& a) { return std::isfinite(a.real()) && std::isfinite(a.imag()); }

void check_targets(int num_qubits, const std::vector<int>& targets) {
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (targets[i] < 0 || targets[i] >= num_qubits)
            throw std::invalid_argument("qubit index out of range");
        for (std::size_t j = i + 1; j < targets.size(); ++j)
            if (targets[i] == targets[j]) throw std::invalid_argument("duplicate qubit index");
    }
}

// Bit shifts that place target-register bits (MSB first) and residual
// register bits into the global amplitude index.
struct IndexMap {
    std::vector<int> target_shift;    // one per target qubit
    std::vector<int> residual_shift;  // one per untouched qubit, ascending order
};

IndexMap make_index_map(int num_qubits, const std::vector<int>& targets) {
    IndexMap m;
    m.target_shift.reserve(targets.size());
    for (int q : targets) m.target_shift.push_back(num_qubits - 1 - q);
    for (int q = 0; q < num_qubits; ++q) {
        if (std::find(targets.begin(), targets.end(), q) == targets.end())
            m.residual_shift.push_back(num_qubits - 1 - q);
    }
    return m;
}

std::size_t global_index(const IndexMap& m, std::size_t t, std::size_t r) {
    std::size_t idx = 0;
    const std::size_t k = m.target_shift.size();
    for (std::size_t j = 0; j < k; ++j)
        idx |= ((t >> (k - 1 - j)) & 1u) << m.target_shift[j];
    const std::size_t nr = m.residual_shift.size();
    for (std::size_t j = 0; j < nr; ++j)
        idx |= ((r >> (nr - 1 - j)) & 1u) << m.residual_shift[j];
    return idx;
}

}  // namespace

Matrix::Matrix(int dim) : dim_(dim), a_(static_cast<std::size_t>(dim) * dim) {
    if (dim <= 0) throw std::invalid_argument("matrix dimension must be positive");
}

Matrix Matrix::identity(int dim) {
    Matrix m(dim);
    for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
    return m;
}

double Matrix::unitarity_deviation() const {
    double dev = 0.0;
    for (int r = 0; r < dim_; ++r) {
        for (int c = 0; c < dim_; ++c) {
            Amplitude dot = 0.0;
            for (int k = 0; k < dim_; ++k) dot += at(r, k) * std::conj(at(c, k));
            dev = std::max(dev, std::abs(dot - (r == c ? Amplitude{1.0} : Amplitude{0.0})));
        }
    }
    return dev;
}

Matrix pauli_x() {
    Matrix m(2);
    m.at(0, 1) = 1.0;
    m.at(1, 0) = 1.0;
    return m;
}

Matrix pauli_z() {
    Matrix m(2);
    m.at(0, 0) = 1.0;
    m.at(1, 1) = -1.0;
    return m;
}

Matrix cnot() {
    Matrix m(4);
    m.at(0, 0) = 1.0;
    m.at(1, 1) = 1.0;
    m.at(2, 3) = 1.0;
    m.at(3, 2) = 1.0;
    return m;
}

StateVector::StateVector(int num_qubits, std::vector<Amplitude> amplitudes)
    : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
    if (num_qubits < 1 || num_qubits > 16)
        throw std::invalid_argument("qubit count out of supported range");
    if (amps_.size() != (std::size_t{1} << num_qubits))
        throw std::invalid_argument("amplitude count does not match qubit count");
    for (const auto& a : amps_)
        if (!finite(a)) throw std::invalid_argument("non-finite amplitude");
}

double StateVector::norm_sq() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
}

StateVector make_state(int num_qubits, std::span<const Amplitude> amplitudes,
                       double* original_norm) {
    if (num_qubits >= 1 && amplitudes.size() != (std::size_t{1} << num_qubits))
        throw std::invalid_argument("amplitude count does not match qubit count");
    std::vector<Amplitude> amps(amplitudes.begin(), amplitudes.end());
    double n2 = 0.0;
    for (const auto& a : amps) n2 += std::norm(a);
    const double norm = std::sqrt(n2);
    if (!(norm > 0.0)) throw std::invalid_argument("null state");
    if (original_norm) *original_norm = norm;
    for (auto& a : amps) a /= norm;
    // Rotate the first nonzero amplitude to be real nonnegative.
    for (const auto& a : amps) {
        const double mag = std::abs(a);
        if (mag > default_tol.null_branch) {
            const Amplitude phase = std::conj(a) / mag;
            if (std::abs(phase - 1.0) > 0.0)
                for (auto& b : amps) b *= phase;
            break;
        }
    }
    return StateVector(num_qubits, std::move(amps));
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    const std::size_t da = a.dim(), db = b.dim();
    std::vector<Amplitude> amps(da * db);
    for (std::size_t i = 0; i < da; ++i) {
        const Amplitude ai = a.amplitude(i);
        for (std::size_t j = 0; j < db; ++j) amps[i * db + j] = ai * b.amplitude(j);
    }
    return StateVector(a.num_qubits() + b.num_qubits(), std::move(amps));
}

StateVector apply_unitary(const StateVector& state, const Matrix& u,
                          const std::vector<int>& targets, const Tolerances& tol) {
    const int k = static_cast<int>(targets.size());
    if (u.dim() != (1 << k)) throw std::invalid_argument("matrix dimension does not match targets");
    check_targets(state.num_qubits(), targets);
    if (!u.is_unitary(tol.unitary)) throw std::invalid_argument("not unitary");

    const IndexMap map = make_index_map(state.num_qubits(), targets);
    const std::size_t dt = std::size_t{1} << k;
    const std::size_t dr = std::size_t{1} << map.residual_shift.size();

    std::vector<Amplitude> out(state.dim());
    std::vector<Amplitude> scratch(dt);
    for (std::size_t r = 0; r < dr; ++r) {
        for (std::size_t t = 0; t < dt; ++t) scratch[t] = state.amplitude(global_index(map, t, r));
        for (std::size_t row = 0; row < dt; ++row) {
            Amplitude acc = 0.0;
            for (std::size_t col = 0; col < dt; ++col)
                acc += u.at(static_cast<int>(row), static_cast<int>(col)) * scratch[col];
            out[global_index(map, row, r)] = acc;
        }
    }
    return StateVector(state.num_qubits(), std::move(out));
}

std::vector<ProjectionOutcome> project(const StateVector& state, const BasisSet& basis,
                                       const std::vector<int>& targets, const Tolerances& tol) {
    const int k = static_cast<int>(targets.size());
    if (basis.element_qubits() != k)
        throw std::invalid_argument("basis dimension does not match targets");
    check_targets(state.num_qubits(), targets);

    const IndexMap map = make_index_map(state.num_qubits(), targets);
    const std::size_t dt = std::size_t{1} << k;
    const std::size_t dr = std::size_t{1} << map.residual_shift.size();
    const int residual_qubits = state.num_qubits() - k;

    std::vector<ProjectionOutcome> outcomes;
    outcomes.reserve(basis.size());
    std::vector<Amplitude> residual(dr);
    for (const auto& elem : basis.elements()) {
        double prob = 0.0;
        for (std::size_t r = 0; r < dr; ++r) {
            Amplitude acc = 0.0;
            for (std::size_t t = 0; t < dt; ++t)
                acc += std::conj(elem.state.amplitude(t)) * state.amplitude(global_index(map, t, r));
            residual[r] = acc;
            prob += std::norm(acc);
        }
        ProjectionOutcome out;
        out.label = elem.label;
        out.probability = prob;
        if (prob >= tol.null_branch && residual_qubits >= 1) {
            const double inv = 1.0 / std::sqrt(prob);
            std::vector<Amplitude> post(dr);
            for (std::size_t r = 0; r < dr; ++r) post[r] = residual[r] * inv;
            out.post_state = StateVector(residual_qubits, std::move(post));
        }
        outcomes.push_back(std::move(out));
    }
    return outcomes;
}

std::vector<double> project_probabilities(const StateVector& state, const BasisSet& basis,
                                          const std::vector<int>& targets) {
    const int k = static_cast<int>(targets.size());
    if (basis.element_qubits() != k)
        throw std::invalid_argument("basis dimension does not match targets");
    check_targets(state.num_qubits(), targets);

    const IndexMap map = make_index_map(state.num_qubits(), targets);
    const std::size_t dt = std::size_t{1} << k;
    const std::size_t dr = std::size_t{1} << map.residual_shift.size();

    std::vector<double> probs;
    probs.reserve(basis.size());
    for (const auto& elem : basis.elements()) {
        double prob = 0.0;
        for (std::size_t r = 0; r < dr; ++r) {
            Amplitude acc = 0.0;
            for (std::size_t t = 0; t < dt; ++t)
                acc += std::conj(elem.state.amplitude(t)) * state.amplitude(global_index(map, t, r));
            prob += std::norm(acc);
        }
        probs.push_back(prob);
    }
    return probs;
}

ProjectionOutcome project_outcome(const StateVector& state, const BasisSet& basis,
                                  const std::vector<int>& targets, int element,
                                  const Tolerances& tol) {
    const int k = static_cast<int>(targets.size());
    if (basis.element_qubits() != k)
        throw std::invalid_argument("basis dimension does not match targets");
    if (element < 0 || static_cast<std::size_t>(element) >= basis.size())
        throw std::invalid_argument("basis element out of range");
    check_targets(state.num_qubits(), targets);

    const IndexMap map = make_index_map(state.num_qubits(), targets);
    const std::size_t dt = std::size_t{1} << k;
    const std::size_t dr = std::size_t{1} << map.residual_shift.size();
    const int residual_qubits = state.num_qubits() - k;
    const auto& elem = basis.elements()[static_cast<std::size_t>(element)];

    std::vector<Amplitude> residual(dr);
    double prob = 0.0;
    for (std::size_t r = 0; r < dr; ++r) {
        Amplitude acc = 0.0;
        for (std::size_t t = 0; t < dt; ++t)
            acc += std::conj(elem.state.amplitude(t)) * state.amplitude(global_index(map, t, r));
        residual[r] = acc;
        prob += std::norm(acc);
    }
    ProjectionOutcome out;
    out.label = elem.label;
    out.probability = prob;
    if (prob >= tol.null_branch && residual_qubits >= 1) {
        const double inv = 1.0 / std::sqrt(prob);
        for (auto& a : residual) a *= inv;
        out.post_state = StateVector(residual_qubits, std::move(residual));
    }
    return out;
}

Amplitude inner_product(const StateVector& a, const StateVector& b) {
    if (a.num_qubits() != b.num_qubits())
        throw std::invalid_argument("register size mismatch");
    Amplitude acc = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        acc += std::conj(a.amplitude(i)) * b.amplitude(i);
    return acc;
}

double fidelity(const StateVector& a, const StateVector& b) {
    return std::norm(inner_product(a, b));
}

double max_amplitude_diff(const StateVector& a, const StateVector& b) {
    if (a.num_qubits() != b.num_qubits())
        throw std::invalid_argument("register size mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        d = std::max(d, std::abs(a.amplitude(i) - b.amplitude(i)));
    return d;
}

bool approx_equal(const StateVector& a, const StateVector& b, double tol) {
    return a.num_qubits() == b.num_qubits() && max_amplitude_diff(a, b) <= tol;
}

bool equal_up_to_phase(const StateVector& a, const StateVector& b, double tol) {
    if (a.num_qubits() != b.num_qubits()) return false;
    return std::abs(1.0 - fidelity(a, b)) <= tol;
}

InputQubit::InputQubit(Amplitude a, Amplitude b) : alpha(a), beta(b) {
    const double n2 = std::norm(alpha) + std::norm(beta);
    if (std::abs(n2 - 1.0) > default_tol.eq)
        throw std::invalid_argument("input qubit is not normalized");
}

StateVector InputQubit::state() const { return StateVector(1, {alpha, beta}); }

}  // namespace telesim
