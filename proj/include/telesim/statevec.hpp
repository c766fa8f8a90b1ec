#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "telesim/tolerances.hpp"

namespace telesim {

using Amplitude = std::complex<double>;

class BasisSet;  // bases.hpp

// Small dense complex matrix, row-major.
class Matrix {
public:
    explicit Matrix(int dim);
    static Matrix identity(int dim);

    int dim() const { return dim_; }
    Amplitude& at(int row, int col) { return a_[static_cast<std::size_t>(row) * dim_ + col]; }
    const Amplitude& at(int row, int col) const {
        return a_[static_cast<std::size_t>(row) * dim_ + col];
    }

    // Max entrywise deviation of U U^dagger from the identity.
    double unitarity_deviation() const;
    bool is_unitary(double tol = default_tol.unitary) const {
        return unitarity_deviation() <= tol;
    }

private:
    int dim_;
    std::vector<Amplitude> a_;
};

Matrix pauli_x();
Matrix pauli_z();
// CNOT with the first (most significant) qubit as control.
Matrix cnot();

// Dense statevector over an ordered qubit register. Qubit 0 is the most
// significant bit of the amplitude index. Public operations return
// normalized states; the constructor itself only checks shape and
// finiteness so that unnormalized intermediates can exist internally.
class StateVector {
public:
    StateVector(int num_qubits, std::vector<Amplitude> amplitudes);

    int num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return amps_.size(); }
    const std::vector<Amplitude>& amplitudes() const { return amps_; }
    Amplitude amplitude(std::size_t index) const { return amps_[index]; }

    double norm_sq() const;

private:
    int num_qubits_;
    std::vector<Amplitude> amps_;

    friend StateVector scale_state(const StateVector&, Amplitude);
};

// Normalizing constructor. Rejects zero vectors ("null state") and length
// mismatches; rotates the global phase so the first nonzero amplitude is
// real nonnegative. If `original_norm` is given, the norm of the raw input
// is written there.
StateVector make_state(int num_qubits, std::span<const Amplitude> amplitudes,
                       double* original_norm = nullptr);

// Kronecker product; a's qubits come first (most significant).
StateVector tensor(const StateVector& a, const StateVector& b);

// Applies `u` to the listed qubits (first listed = most significant within
// u's index), identity elsewhere. The matrix must be unitary within
// tol.unitary and the targets distinct and in range.
StateVector apply_unitary(const StateVector& state, const Matrix& u,
                          const std::vector<int>& targets,
                          const Tolerances& tol = default_tol);

struct ProjectionOutcome {
    std::string label;
    double probability = 0.0;
    // Residual state of the unmeasured qubits, in their original register
    // order. Empty when the probability is below tol.null_branch or when
    // the measurement covers the whole register.
    std::optional<StateVector> post_state;
};

// Projective measurement of the target qubits in the given basis. Returns
// one entry per basis element, in basis order; probabilities sum to 1.
std::vector<ProjectionOutcome> project(const StateVector& state, const BasisSet& basis,
                                       const std::vector<int>& targets,
                                       const Tolerances& tol = default_tol);

// Probability-only variant (no post states built). Same ordering.
std::vector<double> project_probabilities(const StateVector& state, const BasisSet& basis,
                                          const std::vector<int>& targets);

// Builds the single outcome `element` of the projection.
ProjectionOutcome project_outcome(const StateVector& state, const BasisSet& basis,
                                  const std::vector<int>& targets, int element,
                                  const Tolerances& tol = default_tol);

Amplitude inner_product(const StateVector& a, const StateVector& b);

// |<a|b>|^2. States must have equal register sizes.
double fidelity(const StateVector& a, const StateVector& b);

// Max entrywise amplitude difference.
double max_amplitude_diff(const StateVector& a, const StateVector& b);

bool approx_equal(const StateVector& a, const StateVector& b, double tol = default_tol.eq);
bool equal_up_to_phase(const StateVector& a, const StateVector& b, double tol = default_tol.eq);

// Qubit Alice wants to teleport: alpha|0> + beta|1>, normalized.
struct InputQubit {
    Amplitude alpha;
    Amplitude beta;

    InputQubit(Amplitude a, Amplitude b);
    StateVector state() const;
};

}  // namespace telesim
