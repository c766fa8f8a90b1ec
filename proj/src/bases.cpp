#include "telesim/bases.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace telesim {

namespace {

StateVector two_term_state(int num_qubits, std::size_t hi_index, double hi_coeff,
                           std::size_t lo_index, double lo_coeff, double norm) {
    std::vector<Amplitude> amps(std::size_t{1} << num_qubits);
    amps[hi_index] = hi_coeff * norm;
    amps[lo_index] = lo_coeff * norm;
    return StateVector(num_qubits, std::move(amps));
}

void check_param(double m) {
    if (!(m >= 0.0 && m <= 1.0)) throw std::invalid_argument("basis parameter out of range");
}

// Each family is a list of (label stem, first ket, second ket); the "+"
// member is (first + m second) and the "-" member is (m first - second),
// both divided by sqrt(1+m^2). Signs are kept exactly as written; the
// downstream Pauli-correction tables depend on them.
struct KetPair {
    const char* stem;
    std::size_t first;
    std::size_t second;
};

std::vector<BasisElement> build_family(int num_qubits, double m,
                                       std::span<const KetPair> pairs) {
    const double norm = 1.0 / std::sqrt(1.0 + m * m);
    std::vector<BasisElement> out;
    out.reserve(pairs.size() * 2);
    for (const auto& p : pairs) {
        out.push_back({std::string(p.stem) + "+",
                       two_term_state(num_qubits, p.first, 1.0, p.second, m, norm)});
        out.push_back({std::string(p.stem) + "-",
                       two_term_state(num_qubits, p.first, m, p.second, -1.0, norm)});
    }
    return out;
}

}  // namespace

BasisParam::BasisParam(double value) : m(value) { check_param(value); }

BasisSet::BasisSet(std::string name, double param, std::vector<BasisElement> elements,
                   const Tolerances& tol)
    : name_(std::move(name)), param_(param), elements_(std::move(elements)) {
    if (elements_.empty()) throw std::invalid_argument("empty basis");
    const int nq = elements_.front().state.num_qubits();
    if (elements_.size() != (std::size_t{1} << nq))
        throw std::invalid_argument("basis does not span its register");
    for (const auto& e : elements_)
        if (e.state.num_qubits() != nq)
            throw std::invalid_argument("mixed element sizes in basis");
    if (gram_deviation() > tol.unitary)
        throw std::invalid_argument("basis is not orthonormal");
}

double BasisSet::gram_deviation() const {
    double dev = 0.0;
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        for (std::size_t j = 0; j < elements_.size(); ++j) {
            const Amplitude g = inner_product(elements_[i].state, elements_[j].state);
            dev = std::max(dev, std::abs(g - (i == j ? Amplitude{1.0} : Amplitude{0.0})));
        }
    }
    return dev;
}

BasisSet bell_basis(BasisParam m) {
    // Psi+ = (|01> + m|10>)/M, Psi- = (m|01> - |10>)/M.
    static constexpr KetPair pairs[] = {{"Phi", 0b00, 0b11}, {"Psi", 0b01, 0b10}};
    return BasisSet("bell_m", m.m, build_family(2, m.m, pairs));
}

BasisSet ghz3_basis(BasisParam m) {
    if (m.m == 0.0) throw std::invalid_argument("degenerate basis");
    static constexpr KetPair pairs[] = {
        {"GHZ", 0b000, 0b111}, {"G", 0b010, 0b101}, {"H", 0b100, 0b011}, {"Z", 0b110, 0b001}};
    return BasisSet("ghz3_m", m.m, build_family(3, m.m, pairs));
}

BasisSet ghz4_basis(BasisParam m) {
    if (m.m == 0.0) throw std::invalid_argument("degenerate basis");
    static constexpr KetPair pairs[] = {
        {"A", 0b0000, 0b1111}, {"B", 0b1110, 0b0001}, {"C", 0b0010, 0b1101},
        {"D", 0b1100, 0b0011}, {"E", 0b0100, 0b1011}, {"F", 0b1010, 0b0101},
        {"J", 0b0110, 0b1001}, {"K", 0b1000, 0b0111}};
    return BasisSet("ghz4_m", m.m, build_family(4, m.m, pairs));
}

BasisSet computational_basis(int num_qubits) {
    if (num_qubits < 1 || num_qubits > 16)
        throw std::invalid_argument("qubit count out of supported range");
    const std::size_t dim = std::size_t{1} << num_qubits;
    std::vector<BasisElement> elements;
    elements.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        std::string label(static_cast<std::size_t>(num_qubits), '0');
        for (int q = 0; q < num_qubits; ++q)
            if ((i >> (num_qubits - 1 - q)) & 1u) label[static_cast<std::size_t>(q)] = '1';
        std::vector<Amplitude> amps(dim);
        amps[i] = 1.0;
        elements.push_back({std::move(label), StateVector(num_qubits, std::move(amps))});
    }
    return BasisSet("computational", 1.0, std::move(elements));
}

}  // namespace telesim
