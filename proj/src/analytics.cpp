#include "telesim/analytics.hpp"

#include <cmath>
#include <stdexcept>

namespace telesim {

namespace {

// n^(2^k) by repeated squaring in extended precision; k >= 0.
long double pow_tower(double n, int k) {
    long double v = n;
    for (int i = 0; i < k; ++i) v *= v;
    return v;
}

long double log_choose(int a, int b) {
    return std::lgamma(a + 1.0L) - std::lgamma(b + 1.0L) - std::lgamma(a - b + 1.0L);
}

// Compensated summation of exp(log_terms).
struct KahanSum {
    long double sum = 0.0L;
    long double carry = 0.0L;
    void add(long double x) {
        const long double y = x - carry;
        const long double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

double chain_step_value(double n, int q) {
    if (q < 2) throw std::invalid_argument("chain step is defined for q >= 2");
    if (n == 1.0) return std::pow(2.0, 1 - q);
    if (n == 0.0) return 0.0;
    const long double num = pow_tower(n, q - 1);
    const long double den = 1.0L - pow_tower(n, q);
    return static_cast<double>(2.0L * (1.0L - static_cast<long double>(n) * n) * num /
                               ((1.0L + static_cast<long double>(n) * n) * den));
}

double chain_tilde_step_value(double n, int q) {
    if (q < 1) throw std::invalid_argument("q must be positive");
    if (n == 1.0) return std::pow(2.0, 1 - q);
    if (n == 0.0) return 0.0;
    const long double num = pow_tower(n, q);
    const long double den = 1.0L - num;
    return static_cast<double>(2.0L * (1.0L - static_cast<long double>(n) * n) * num /
                               ((1.0L + static_cast<long double>(n) * n) * den));
}

double chain_total_value(double n, int q) {
    if (q < 1) throw std::invalid_argument("q must be positive");
    KahanSum s;
    for (int j = 2; j <= q; ++j) s.add(chain_step_value(n, j));
    return static_cast<double>(s.sum);
}

double net_matched_direct_value(double n, int q) {
    if (n == 0.0) return 0.0;
    const long double log_term = log_choose(2 * q, q) + 2.0L * q * std::log(n) -
                                 2.0L * q * std::log1p(static_cast<long double>(n) * n);
    return static_cast<double>(std::exp(log_term));
}

double net_matched_total_value(double n, int q) {
    if (n == 0.0) return 0.0;
    const long double log_n = std::log(n);
    const long double log_den = std::log1p(static_cast<long double>(n) * n);
    KahanSum s;
    for (int j = 1; j <= q; ++j)
        s.add(std::exp(log_choose(2 * q, q - j) + 2.0L * (q + j) * log_n - 2.0L * q * log_den));
    for (int j = 0; j <= q; ++j)
        s.add(std::exp(log_choose(2 * q, q + j) + 2.0L * (q + j) * log_n - 2.0L * q * log_den));
    return static_cast<double>(s.sum);
}

double net_standard_direct_value(double n, int q) {
    if (q % 2 != 0) return 0.0;
    if (n == 0.0) return 0.0;
    const long double log_term = log_choose(q, q / 2) + q * std::log(n) -
                                 q * std::log1p(static_cast<long double>(n) * n);
    return static_cast<double>(std::exp(log_term));
}

double net_standard_total_value(double n, int q) {
    if (n == 0.0) return 0.0;
    const long double log_n = std::log(n);
    const long double log_den = std::log1p(static_cast<long double>(n) * n);
    KahanSum s;
    if (q % 2 == 0) s.add(std::exp(log_choose(q, q / 2) + q * log_n - q * log_den));
    for (int j = 0; j <= (q - 1) / 2; ++j)
        s.add(std::exp(std::log(2.0L) + log_choose(q, j) + 2.0L * (q - j) * log_n -
                        q * log_den));
    return static_cast<double>(s.sum);
}

double distill_value(double n, int q) {
    // 1 - (f^2 - g^2) * sum_j (f g)^(2j) C(2j, j) truncated at (q-1)/2,
    // with f^2 = 1/(1+n^2), g^2 = n^2/(1+n^2).
    const long double n2 = static_cast<long double>(n) * n;
    const long double fg_sq = n2 / ((1.0L + n2) * (1.0L + n2));
    const long double f2_minus_g2 = (1.0L - n2) / (1.0L + n2);
    KahanSum s;
    for (int j = 0; j <= (q - 1) / 2; ++j) {
        if (j == 0) {
            s.add(1.0L);
        } else if (fg_sq > 0.0L) {
            s.add(std::exp(log_choose(2 * j, j) + j * std::log(fg_sq)));
        }
    }
    return static_cast<double>(1.0L - f2_minus_g2 * s.sum);
}

}  // namespace

NoiseParams::NoiseParams(double b, double u, double m) : eps_b(b), eps_u(u), eps_m(m) {
    if (!(b >= 0.0 && b <= 1.0 && u >= 0.0 && u <= 1.0 && m >= 0.0 && m <= 1.0))
        throw std::invalid_argument("efficiency factors must lie in [0,1]");
}

const std::vector<FormulaId>& all_formula_ids() {
    static const std::vector<FormulaId> ids = {
        FormulaId::p_suc1,
        FormulaId::p_suc2,
        FormulaId::p_suc3,
        FormulaId::chain_step,
        FormulaId::chain_total,
        FormulaId::chain_tilde_step,
        FormulaId::chain_tilde_total,
        FormulaId::net_matched_direct,
        FormulaId::net_matched_total,
        FormulaId::net_standard_direct,
        FormulaId::net_standard_total,
        FormulaId::distill_per08,
        FormulaId::bound_one_copy,
        FormulaId::bound_two_copy,
    };
    return ids;
}

std::string formula_name(FormulaId id) {
    switch (id) {
        case FormulaId::p_suc1: return "p_suc1";
        case FormulaId::p_suc2: return "p_suc2";
        case FormulaId::p_suc3: return "p_suc3";
        case FormulaId::chain_step: return "chain_step";
        case FormulaId::chain_total: return "chain_total";
        case FormulaId::chain_tilde_step: return "chain_tilde_step";
        case FormulaId::chain_tilde_total: return "chain_tilde_total";
        case FormulaId::net_matched_direct: return "net_matched_direct";
        case FormulaId::net_matched_total: return "net_matched_total";
        case FormulaId::net_standard_direct: return "net_standard_direct";
        case FormulaId::net_standard_total: return "net_standard_total";
        case FormulaId::distill_per08: return "distill_per08";
        case FormulaId::bound_one_copy: return "bound_one_copy";
        case FormulaId::bound_two_copy: return "bound_two_copy";
    }
    throw std::logic_error("unknown formula id");
}

std::optional<FormulaId> formula_from_name(const std::string& name) {
    for (FormulaId id : all_formula_ids())
        if (formula_name(id) == name) return id;
    return std::nullopt;
}

bool formula_needs_q(FormulaId id) {
    switch (id) {
        case FormulaId::chain_step:
        case FormulaId::chain_total:
        case FormulaId::chain_tilde_step:
        case FormulaId::net_matched_direct:
        case FormulaId::net_matched_total:
        case FormulaId::net_standard_direct:
        case FormulaId::net_standard_total:
        case FormulaId::distill_per08:
            return true;
        default:
            return false;
    }
}

double eval_formula(FormulaId id, ChannelParam n, std::optional<int> q) {
    if (formula_needs_q(id) != q.has_value())
        throw std::invalid_argument(formula_needs_q(id) ? "formula requires q"
                                                        : "formula takes no q");
    if (q && *q < 1) throw std::invalid_argument("q must be positive");
    const double n2 = n.n * n.n;
    switch (id) {
        case FormulaId::p_suc1:
        case FormulaId::chain_tilde_total:
        case FormulaId::bound_one_copy:
            return 2.0 * n2 / (1.0 + n2);
        case FormulaId::p_suc2:
        case FormulaId::p_suc3:
            return 2.0 * n2 / ((1.0 + n2) * (1.0 + n2));
        case FormulaId::bound_two_copy:
            return 4.0 * n2 / ((1.0 + n2) * (1.0 + n2));
        case FormulaId::chain_step:
            return chain_step_value(n.n, *q);
        case FormulaId::chain_total:
            return chain_total_value(n.n, *q);
        case FormulaId::chain_tilde_step:
            return chain_tilde_step_value(n.n, *q);
        case FormulaId::net_matched_direct:
            return net_matched_direct_value(n.n, *q);
        case FormulaId::net_matched_total:
            return net_matched_total_value(n.n, *q);
        case FormulaId::net_standard_direct:
            return net_standard_direct_value(n.n, *q);
        case FormulaId::net_standard_total:
            return net_standard_total_value(n.n, *q);
        case FormulaId::distill_per08:
            return distill_value(n.n, *q);
    }
    throw std::logic_error("unknown formula id");
}

double noisy_success(int group, ChannelParam n, const NoiseParams& noise) {
    const double n2 = n.n * n.n;
    switch (group) {
        case 1: return noise.eps_b * noise.eps_u * 2.0 * n2 / (1.0 + n2);
        case 2: return noise.eps_m * 2.0 * n2 / ((1.0 + n2) * (1.0 + n2));
        case 3: return noise.eps_b * noise.eps_b * 2.0 * n2 / ((1.0 + n2) * (1.0 + n2));
        default: throw std::invalid_argument("group must be 1, 2 or 3");
    }
}

std::vector<CrossoverCell> crossover_surface(const std::vector<double>& r_grid,
                                             const std::vector<double>& n_grid) {
    if (r_grid.empty() || n_grid.empty()) throw std::invalid_argument("empty grid");
    for (double r : r_grid)
        if (!(r >= 0.0)) throw std::invalid_argument("r out of range");
    for (double n : n_grid)
        if (!(n >= 0.0 && n <= 1.0)) throw std::invalid_argument("n out of range");
    std::vector<CrossoverCell> cells;
    cells.reserve(r_grid.size() * n_grid.size());
    for (double r : r_grid) {
        for (double n : n_grid) {
            const double ratio = r * (1.0 + n * n);
            cells.push_back({r, n, ratio, ratio > 1.0});
        }
    }
    return cells;
}

DistillComparison distill_equivalence(ChannelParam n, int q) {
    if (q < 1) throw std::invalid_argument("q must be positive");
    const double lhs = eval_formula(FormulaId::net_standard_total, n, q);
    const double rhs = eval_formula(FormulaId::distill_per08, n, q);
    return {lhs, rhs, std::abs(lhs - rhs)};
}

}  // namespace telesim
