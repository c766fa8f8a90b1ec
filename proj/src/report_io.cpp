#include "telesim/report_io.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace telesim {

namespace {

std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(current);
    return fields;
}

std::optional<double> parse_cell(const std::string& s) {
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::invalid_argument("bad numeric cell: " + s);
    return v;
}

nlohmann::json row_json(const SweepRow& r) {
    nlohmann::json j;
    j["n"] = r.n;
    if (r.q) j["q"] = *r.q;
    const auto put = [&](const char* key, const std::optional<double>& v) {
        if (v) j[key] = *v;
    };
    put("direct", r.direct);
    put("corrected", r.corrected);
    put("formula", r.formula);
    put("abs_diff", r.abs_diff);
    put("p_hat", r.p_hat);
    put("std_err", r.std_err);
    return j;
}

nlohmann::json amplitudes_json(const StateVector& s) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& a : s.amplitudes()) arr.push_back({a.real(), a.imag()});
    return arr;
}

}  // namespace

std::string format_double(double value) {
    char buf[40];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
    return std::string(buf, ptr);
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "n,q,direct,corrected,formula,abs_diff,p_hat,std_err\n";
    for (const auto& r : rows) {
        out += format_double(r.n);
        out += ',';
        out += r.q ? std::to_string(*r.q) : "";
        out += ',';
        out += cell(r.direct);
        out += ',';
        out += cell(r.corrected);
        out += ',';
        out += cell(r.formula);
        out += ',';
        out += cell(r.abs_diff);
        out += ',';
        out += cell(r.p_hat);
        out += ',';
        out += cell(r.std_err);
        out += '\n';
    }
    return out;
}

nlohmann::json sweep_json(const std::vector<SweepRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) arr.push_back(row_json(r));
    return arr;
}

std::vector<SweepRow> parse_sweep_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "n,q,direct,corrected,formula,abs_diff,p_hat,std_err")
        throw std::invalid_argument("missing or unexpected header");
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_line(line);
        if (fields.size() != 8) throw std::invalid_argument("wrong column count");
        SweepRow r;
        const auto n = parse_cell(fields[0]);
        if (!n) throw std::invalid_argument("missing n");
        r.n = *n;
        if (!fields[1].empty()) r.q = std::stoi(fields[1]);
        r.direct = parse_cell(fields[2]);
        r.corrected = parse_cell(fields[3]);
        r.formula = parse_cell(fields[4]);
        r.abs_diff = parse_cell(fields[5]);
        r.p_hat = parse_cell(fields[6]);
        r.std_err = parse_cell(fields[7]);
        rows.push_back(r);
    }
    return rows;
}

nlohmann::json report_json(const ProtocolReport& report, bool include_branches) {
    nlohmann::json j;
    j["protocol_name"] = report.protocol_name;
    nlohmann::json params;
    params["n"] = report.params.n;
    if (report.params.q) params["q"] = *report.params.q;
    params["m_policy"] = report.params.m_policy;
    j["params"] = params;
    j["direct_success"] = report.direct_success;
    j["corrected_success"] = report.corrected_success;
    j["entanglement_consumed"] = {{"bell", report.entanglement_consumed.bell},
                                  {"ghz4", report.entanglement_consumed.ghz4}};
    if (!report.per_step.empty()) j["per_step"] = report.per_step;
    if (include_branches) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& b : report.branches) {
            nlohmann::json bj;
            bj["labels"] = b.labels;
            bj["probability"] = b.probability;
            bj["corrections_applied"] = b.corrections_applied;
            bj["success"] = b.success;
            if (b.post_state) bj["post_state"] = amplitudes_json(*b.post_state);
            arr.push_back(std::move(bj));
        }
        j["branches"] = arr;
    }
    return j;
}

std::string basis_csv(const BasisSet& basis) {
    std::string out = "label,index,re,im\n";
    for (const auto& e : basis.elements()) {
        for (std::size_t i = 0; i < e.state.dim(); ++i) {
            out += e.label;
            out += ',';
            out += std::to_string(i);
            out += ',';
            out += format_double(e.state.amplitude(i).real());
            out += ',';
            out += format_double(e.state.amplitude(i).imag());
            out += '\n';
        }
    }
    return out;
}

}  // namespace telesim
