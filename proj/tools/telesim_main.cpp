// Command-line front end: run protocols exactly or by sampling, sweep
// parameter grids to CSV/JSON, dump measurement bases, and drive the
// verification suites. Data goes to stdout (or --out); diagnostics to
// stderr. Exit codes: 0 ok, 1 internal error, 2 validation error,
// 3 verification failure.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "telesim/analytics.hpp"
#include "telesim/mc.hpp"
#include "telesim/report_io.hpp"
#include "telesim/verify.hpp"

namespace {

using namespace telesim;

struct QubitFlags {
    double alpha_re = 0.6;
    double alpha_im = 0.0;
    double beta_re = 0.8;
    double beta_im = 0.0;
};

void add_qubit_flags(CLI::App* cmd, QubitFlags& f) {
    cmd->add_option("--alpha-re", f.alpha_re, "Input amplitude alpha, real part");
    cmd->add_option("--alpha-im", f.alpha_im, "Input amplitude alpha, imaginary part");
    cmd->add_option("--beta-re", f.beta_re, "Input amplitude beta, real part");
    cmd->add_option("--beta-im", f.beta_im, "Input amplitude beta, imaginary part");
}

InputQubit make_input(const QubitFlags& f) {
    const Amplitude alpha{f.alpha_re, f.alpha_im};
    const Amplitude beta{f.beta_re, f.beta_im};
    const double norm = std::sqrt(std::norm(alpha) + std::norm(beta));
    if (!(norm > 0.0)) throw std::invalid_argument("input qubit must be nonzero");
    return InputQubit(alpha / norm, beta / norm);
}

void write_output(const std::optional<std::string>& path, const std::string& content) {
    if (!path) {
        std::cout << content;
        return;
    }
    std::ofstream out(*path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output path: " + *path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + *path);
}

std::string fixed12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12f", v);
    return buf;
}

std::optional<double> protocol_formula(const ProtocolDef& def, ChannelParam n,
                                       std::optional<int> q,
                                       const std::optional<NoiseParams>& noise) {
    if (noise) {
        if (def.name == "group1") return noisy_success(1, n, *noise);
        if (def.name == "group2") return noisy_success(2, n, *noise);
        if (def.name == "group3") return noisy_success(3, n, *noise);
        throw std::invalid_argument("noise model applies to group1/group2/group3 only");
    }
    if (!def.total_formula) return std::nullopt;
    const std::optional<int> fq = formula_needs_q(*def.total_formula) ? q : std::nullopt;
    return eval_formula(*def.total_formula, n, fq);
}

// ---------------------------------------------------------------------- run

struct RunArgs {
    std::string protocol;
    double n = 0.0;
    std::optional<int> q;
    std::string mode = "exact";
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 0;
    int workers = 1;
    std::string format = "text";
    bool branches = false;
    std::optional<std::string> out;
    QubitFlags qubit;
};

int cmd_run(const RunArgs& args) {
    const ProtocolDef* def = find_protocol(args.protocol);
    if (!def) {
        std::string names;
        for (const auto& name : protocol_names()) names += " " + name;
        throw std::invalid_argument("unknown protocol '" + args.protocol +
                                    "'; registered:" + names);
    }
    const ChannelParam n(args.n);
    const InputQubit input = make_input(args.qubit);

    if (args.mode == "mc") {
        McConfig cfg;
        cfg.samples = args.samples;
        cfg.seed = args.seed;
        cfg.workers = args.workers;
        const McEstimate est = mc_run(def->name, input, n, args.q, cfg);
        const auto formula = protocol_formula(*def, n, args.q, std::nullopt);
        if (args.format == "json") {
            nlohmann::json j;
            j["protocol_name"] = def->name;
            j["mode"] = "mc";
            j["samples"] = est.samples;
            j["successes"] = est.successes;
            j["p_hat"] = est.p_hat;
            j["std_err"] = est.std_err;
            if (formula) {
                j["formula"] = *formula;
                j["abs_diff"] = std::abs(est.p_hat - *formula);
            }
            write_output(args.out, j.dump(2) + "\n");
            return 0;
        }
        std::string text;
        text += "protocol " + def->name + "\n";
        text += "mode mc\n";
        text += "samples " + std::to_string(est.samples) + "\n";
        text += "successes " + std::to_string(est.successes) + "\n";
        text += "p_hat " + fixed12(est.p_hat) + "\n";
        text += "std_err " + format_double(est.std_err) + "\n";
        if (formula) {
            text += "formula " + format_double(*formula) + "\n";
            text += "abs_diff " + format_double(std::abs(est.p_hat - *formula)) + "\n";
        }
        write_output(args.out, text);
        return 0;
    }
    if (args.mode != "exact") throw std::invalid_argument("mode must be exact or mc");

    const ProtocolReport rep = def->run(input, n, args.q, default_limits);
    const auto formula = protocol_formula(*def, n, args.q, std::nullopt);
    if (args.format == "json") {
        nlohmann::json j = report_json(rep, args.branches);
        if (formula) {
            j["formula"] = *formula;
            j["abs_diff"] = std::abs(rep.corrected_success - *formula);
        }
        write_output(args.out, j.dump(2) + "\n");
        return 0;
    }
    std::string text;
    text += "protocol " + rep.protocol_name + "\n";
    text += "n " + format_double(rep.params.n) + "\n";
    if (rep.params.q) text += "q " + std::to_string(*rep.params.q) + "\n";
    text += "direct_success " + fixed12(rep.direct_success) + "\n";
    text += "corrected_success " + fixed12(rep.corrected_success) + "\n";
    text += "branches " + std::to_string(rep.branches.size()) + "\n";
    if (formula) {
        text += "formula " + format_double(*formula) + "\n";
        text += "abs_diff " + format_double(std::abs(rep.corrected_success - *formula)) + "\n";
    }
    write_output(args.out, text);
    return 0;
}

// -------------------------------------------------------------------- sweep

struct SweepArgs {
    std::string protocol;
    double n_start = 0.0;
    double n_stop = 1.0;
    double n_step = 0.02;
    std::optional<int> q;
    std::string mode = "exact";
    std::uint64_t samples = 100000;
    std::uint64_t seed = 0;
    int workers = 1;
    std::optional<double> eps_b, eps_u, eps_m;
    double r_start = 0.0, r_stop = 2.0, r_step = 0.1;
    std::string out;
    std::string format = "csv";
    QubitFlags qubit;
};

std::vector<double> make_grid(double start, double stop, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
    if (start > stop) throw std::invalid_argument("grid start exceeds stop");
    const int count = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        grid.push_back(std::min(start + i * step, stop));
    return grid;
}

int cmd_sweep_crossover(const SweepArgs& args) {
    const auto cells =
        crossover_surface(make_grid(args.r_start, args.r_stop, args.r_step),
                          make_grid(args.n_start, args.n_stop, args.n_step));
    if (args.format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : cells)
            arr.push_back({{"r", c.r},
                           {"n", c.n},
                           {"ratio", c.ratio},
                           {"group1_wins", c.group1_wins}});
        write_output(args.out, arr.dump(2) + "\n");
        return 0;
    }
    std::string csv = "r,n,ratio,group1_wins\n";
    for (const auto& c : cells) {
        csv += format_double(c.r) + "," + format_double(c.n) + "," + format_double(c.ratio) +
               "," + (c.group1_wins ? "1" : "0") + "\n";
    }
    write_output(args.out, csv);
    return 0;
}

int cmd_sweep(const SweepArgs& args) {
    if (args.protocol == "crossover") return cmd_sweep_crossover(args);
    if (!(args.n_start >= 0.0 && args.n_stop <= 1.0))
        throw std::invalid_argument("n grid must lie in [0,1]");

    const ProtocolDef* def = find_protocol(args.protocol);
    if (!def) throw std::invalid_argument("unknown protocol '" + args.protocol + "'");
    if (def->needs_q && !args.q) throw std::invalid_argument("protocol requires --q");
    std::optional<NoiseParams> noise;
    if (args.eps_b || args.eps_u || args.eps_m)
        noise = NoiseParams(args.eps_b.value_or(1.0), args.eps_u.value_or(1.0),
                            args.eps_m.value_or(1.0));

    const InputQubit input = make_input(args.qubit);
    const auto grid = make_grid(args.n_start, args.n_stop, args.n_step);

    bool enumerable = true;
    if (args.mode == "exact" && def->needs_q &&
        (*args.q >= 32 ||
         (std::uint64_t{1} << (2 * *args.q)) > default_limits.branch_budget)) {
        std::cerr << "note: q=" << *args.q
                  << " exceeds the exact enumeration budget; emitting formula column only\n";
        enumerable = false;
    }

    std::vector<SweepRow> rows(grid.size());
    if (args.mode == "exact") {
        bool failed = false;
        std::string error;
#pragma omp parallel for schedule(dynamic)
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (failed) continue;
            try {
                SweepRow row;
                row.n = grid[i];
                row.q = args.q;
                const ChannelParam n(grid[i]);
                row.formula = protocol_formula(*def, n, args.q, noise);
                if (enumerable && !(def->name == "ghz_chan_ghz4_mn" && grid[i] == 0.0)) {
                    const ProtocolReport rep = def->run(input, n, args.q, default_limits);
                    row.direct = rep.direct_success;
                    row.corrected = rep.corrected_success;
                    if (row.formula && !noise)
                        row.abs_diff = std::abs(rep.corrected_success - *row.formula);
                }
                rows[i] = row;
            } catch (const std::exception& e) {
#pragma omp critical
                {
                    failed = true;
                    error = e.what();
                }
            }
        }
        if (failed) throw std::invalid_argument(error);
    } else if (args.mode == "mc") {
        McConfig cfg;
        cfg.samples = args.samples;
        cfg.seed = args.seed;
        cfg.workers = args.workers;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            SweepRow row;
            row.n = grid[i];
            row.q = args.q;
            const ChannelParam n(grid[i]);
            row.formula = protocol_formula(*def, n, args.q, noise);
            const McEstimate est = mc_run(def->name, input, n, args.q, cfg);
            row.p_hat = est.p_hat;
            row.std_err = est.std_err;
            if (row.formula && !noise) row.abs_diff = std::abs(est.p_hat - *row.formula);
            rows[i] = row;
        }
    } else {
        throw std::invalid_argument("mode must be exact or mc");
    }

    if (args.format == "json")
        write_output(args.out, sweep_json(rows).dump(2) + "\n");
    else
        write_output(args.out, sweep_csv(rows));
    return 0;
}

// ------------------------------------------------------------------- verify

int cmd_verify(const std::string& suite, int q_max) {
    std::vector<CheckResult> results;
    const auto append = [&](std::vector<CheckResult> more) {
        results.insert(results.end(), more.begin(), more.end());
    };
    if (suite == "all" || suite == "bases") append(verify_bases());
    if (suite == "all" || suite == "formulas") append(verify_formulas());
    if (suite == "all" || suite == "distill") append(verify_distill(q_max));
    if (suite == "all" || suite == "bounds") append(verify_bounds());
    if (results.empty()) throw std::invalid_argument("unknown suite: " + suite);

    bool ok = true;
    for (const auto& r : results) {
        ok = ok && r.pass;
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": max deviation "
                  << format_double(r.max_deviation) << " (threshold "
                  << format_double(r.threshold) << ")\n";
    }
    return ok ? 0 : 3;
}

// -------------------------------------------------------------------- bases

int cmd_bases(const std::string& name, double m, int qubits,
              const std::optional<std::string>& out) {
    if (name == "bell") {
        write_output(out, basis_csv(bell_basis(BasisParam(m))));
    } else if (name == "ghz3") {
        write_output(out, basis_csv(ghz3_basis(BasisParam(m))));
    } else if (name == "ghz4") {
        write_output(out, basis_csv(ghz4_basis(BasisParam(m))));
    } else if (name == "computational") {
        write_output(out, basis_csv(computational_basis(qubits)));
    } else {
        throw std::invalid_argument("unknown basis: " + name);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact and Monte Carlo simulator for probabilistic teleportation protocols "
                 "over partially entangled channels"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Run one protocol and print its report");
    run->add_option("--protocol", run_args.protocol, "Protocol name")->required();
    run->add_option("--n", run_args.n, "Channel entanglement parameter")->required();
    int run_q = -1;
    run->add_option("--q", run_q, "Teleportation count (chains and networks)");
    run->add_option("--mode", run_args.mode, "exact|mc");
    run->add_option("--samples", run_args.samples, "MC trajectory count");
    run->add_option("--seed", run_args.seed, "MC seed");
    run->add_option("--workers", run_args.workers, "MC worker streams");
    run->add_option("--format", run_args.format, "text|json");
    run->add_flag("--branches", run_args.branches, "Include branch list in JSON output");
    std::string run_out;
    run->add_option("--out", run_out, "Write output to this path");
    add_qubit_flags(run, run_args.qubit);

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "Sweep a protocol over an n grid");
    sweep->add_option("--protocol", sweep_args.protocol, "Protocol name or 'crossover'")
        ->required();
    sweep->add_option("--n-start", sweep_args.n_start, "Grid start");
    sweep->add_option("--n-stop", sweep_args.n_stop, "Grid stop");
    sweep->add_option("--n-step", sweep_args.n_step, "Grid step");
    int sweep_q = -1;
    sweep->add_option("--q", sweep_q, "Teleportation count");
    sweep->add_option("--mode", sweep_args.mode, "exact|mc");
    sweep->add_option("--samples", sweep_args.samples, "MC trajectory count per point");
    sweep->add_option("--seed", sweep_args.seed, "MC seed");
    sweep->add_option("--workers", sweep_args.workers, "MC worker streams");
    double eps_b = -1.0, eps_u = -1.0, eps_m = -1.0;
    sweep->add_option("--eps-b", eps_b, "Bell-measurement efficiency");
    sweep->add_option("--eps-u", eps_u, "Unitary-correction efficiency");
    sweep->add_option("--eps-m", eps_m, "Generalized-measurement efficiency");
    sweep->add_option("--r-start", sweep_args.r_start, "Crossover grid start");
    sweep->add_option("--r-stop", sweep_args.r_stop, "Crossover grid stop");
    sweep->add_option("--r-step", sweep_args.r_step, "Crossover grid step");
    sweep->add_option("--out", sweep_args.out, "Output path")->required();
    sweep->add_option("--format", sweep_args.format, "csv|json");
    add_qubit_flags(sweep, sweep_args.qubit);

    std::string verify_suite = "all";
    int q_max = 200;
    auto* verify = app.add_subcommand("verify", "Run the invariant suites");
    verify->add_option("--suite", verify_suite, "all|bases|formulas|distill|bounds");
    verify->add_option("--q-max", q_max, "Largest q for the distillation identity");

    std::string basis_name;
    double basis_m = 1.0;
    int basis_qubits = 1;
    std::string basis_out;
    auto* bases = app.add_subcommand("bases", "Dump a measurement basis as CSV");
    bases->add_option("--name", basis_name, "bell|ghz3|ghz4|computational")->required();
    bases->add_option("--m", basis_m, "Basis parameter");
    bases->add_option("--qubits", basis_qubits, "Register size (computational basis)");
    bases->add_option("--out", basis_out, "Output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) {
            if (run->count("--q")) run_args.q = run_q;
            if (!run_out.empty()) run_args.out = run_out;
            return cmd_run(run_args);
        }
        if (sweep->parsed()) {
            if (sweep->count("--q")) sweep_args.q = sweep_q;
            if (sweep->count("--eps-b")) sweep_args.eps_b = eps_b;
            if (sweep->count("--eps-u")) sweep_args.eps_u = eps_u;
            if (sweep->count("--eps-m")) sweep_args.eps_m = eps_m;
            return cmd_sweep(sweep_args);
        }
        if (verify->parsed()) return cmd_verify(verify_suite, q_max);
        if (bases->parsed()) {
            std::optional<std::string> out;
            if (!basis_out.empty()) out = basis_out;
            return cmd_bases(basis_name, basis_m, basis_qubits, out);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
