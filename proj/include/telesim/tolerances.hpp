#pragma once

#include <cstdint>

namespace telesim {

// Numerical tolerances used across the library. State equality, probability
// sums and success fidelity use `eq`; unitarity and basis orthonormality
// checks use `unitary`; branches below `null_branch` carry no post state.
struct Tolerances {
    double eq = 1e-12;
    double unitary = 1e-10;
    double null_branch = 1e-14;
};

inline constexpr Tolerances default_tol{};

// Exact enumeration limits. Protocols refuse to enumerate outcome trees
// larger than `branch_budget` leaves (4^10 by default) and direct the
// caller to Monte Carlo mode instead.
struct EnumLimits {
    std::uint64_t branch_budget = 1ull << 20;
};

inline constexpr EnumLimits default_limits{};

}  // namespace telesim
