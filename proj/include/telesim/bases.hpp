#pragma once

#include <string>
#include <vector>

#include "telesim/statevec.hpp"
#include "telesim/tolerances.hpp"

namespace telesim {

// Measurement-family parameter m in [0,1].
struct BasisParam {
    double m;
    explicit BasisParam(double value);
};

struct BasisElement {
    std::string label;
    StateVector state;
};

// An orthonormal family of multi-qubit states used for projective
// measurement. Orthonormality is validated once at construction; element
// labels are the cross-module currency for branch bookkeeping.
class BasisSet {
public:
    BasisSet(std::string name, double param, std::vector<BasisElement> elements,
             const Tolerances& tol = default_tol);

    const std::string& name() const { return name_; }
    double param() const { return param_; }
    const std::vector<BasisElement>& elements() const { return elements_; }
    std::size_t size() const { return elements_.size(); }
    int element_qubits() const { return elements_.front().state.num_qubits(); }

    // Max deviation of the Gram matrix from the identity.
    double gram_deviation() const;

private:
    std::string name_;
    double param_;
    std::vector<BasisElement> elements_;
};

// The four generalized Bell states {Phi+, Phi-, Psi+, Psi-}:
//   Phi+ = (|00> + m|11>)/sqrt(1+m^2),  Phi- = (m|00> - |11>)/sqrt(1+m^2),
//   Psi+ = (|01> + m|10>)/sqrt(1+m^2),  Psi- = (m|01> - |10>)/sqrt(1+m^2).
BasisSet bell_basis(BasisParam m);

// Eight three-qubit states {GHZ+, GHZ-, G+, G-, H+, H-, Z+, Z-}.
// m = 0 is rejected ("degenerate basis").
BasisSet ghz3_basis(BasisParam m);

// Sixteen four-qubit states {A+..K-}, generated from A+ by Pauli strings.
// m = 0 is rejected ("degenerate basis").
BasisSet ghz4_basis(BasisParam m);

// Computational basis on `num_qubits` qubits; labels are bitstrings with
// qubit 0 as the leftmost bit.
BasisSet computational_basis(int num_qubits);

}  // namespace telesim
