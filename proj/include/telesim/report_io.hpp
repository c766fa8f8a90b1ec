#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "telesim/bases.hpp"
#include "telesim/protocols.hpp"

namespace telesim {

// One grid point of a parameter sweep. Cells are optional: exact columns
// stay empty in MC mode and vice versa.
struct SweepRow {
    double n = 0.0;
    std::optional<int> q;
    std::optional<double> direct;
    std::optional<double> corrected;
    std::optional<double> formula;
    std::optional<double> abs_diff;
    std::optional<double> p_hat;
    std::optional<double> std_err;
};

// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

std::string sweep_csv(const std::vector<SweepRow>& rows);
nlohmann::json sweep_json(const std::vector<SweepRow>& rows);

// Parses a file produced by sweep_csv; used for round-trip checks.
std::vector<SweepRow> parse_sweep_csv(const std::string& text);

nlohmann::json report_json(const ProtocolReport& report, bool include_branches);

// Long-format dump of a basis: one row per (element, amplitude index).
std::string basis_csv(const BasisSet& basis);

}  // namespace telesim
