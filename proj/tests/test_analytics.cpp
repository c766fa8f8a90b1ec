#include <cmath>
#include <vector>

#include "doctest.h"
#include "telesim/analytics.hpp"
#include "telesim/verify.hpp"

using namespace telesim;

namespace {

double binom(int a, int b) {
    double r = 1.0;
    for (int i = 0; i < b; ++i) r = r * (a - i) / (i + 1);
    return r;
}

}  // namespace

TEST_SUITE("analytics") {

TEST_CASE("base formulas at the maximally entangled point") {
    CHECK(eval_formula(FormulaId::p_suc1, ChannelParam(1.0)) == doctest::Approx(1.0));
    CHECK(eval_formula(FormulaId::p_suc2, ChannelParam(1.0)) == doctest::Approx(0.5));
    CHECK(eval_formula(FormulaId::p_suc3, ChannelParam(1.0)) == doctest::Approx(0.5));
    CHECK(eval_formula(FormulaId::bound_one_copy, ChannelParam(0.5)) ==
          doctest::Approx(0.4).epsilon(1e-12));
    CHECK(eval_formula(FormulaId::bound_two_copy, ChannelParam(0.5)) ==
          doctest::Approx(0.64).epsilon(1e-12));
}

TEST_CASE("chain totals accumulate the per-step values") {
    const double n = 0.8;
    double expected = 0.0;
    for (int j = 2; j <= 4; ++j) {
        const double num = 2.0 * (1.0 - n * n) * std::pow(n, std::pow(2.0, j - 1));
        const double den = (1.0 + n * n) * (1.0 - std::pow(n, std::pow(2.0, j)));
        expected += num / den;
    }
    CHECK(eval_formula(FormulaId::chain_total, ChannelParam(n), 4) ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(eval_formula(FormulaId::chain_total, ChannelParam(n), 1) == doctest::Approx(0.0));
}

TEST_CASE("chain limits behave at the parameter edges") {
    // At n=1 the per-step value is 2^(1-q).
    CHECK(eval_formula(FormulaId::chain_step, ChannelParam(1.0), 5) ==
          doctest::Approx(std::pow(2.0, -4)).epsilon(1e-12));
    CHECK(eval_formula(FormulaId::chain_step, ChannelParam(0.0), 5) == doctest::Approx(0.0));
    // Long chains exhaust the ceiling.
    const double n = 0.5;
    CHECK(std::abs(eval_formula(FormulaId::chain_total, ChannelParam(n), 20) -
                   eval_formula(FormulaId::bound_one_copy, ChannelParam(n))) < 1e-14);
    // The ancilla-completed total is q-independent.
    CHECK(eval_formula(FormulaId::chain_tilde_total, ChannelParam(n)) ==
          doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("eval_formula polices its q argument") {
    CHECK_THROWS_AS(eval_formula(FormulaId::p_suc1, ChannelParam(0.5), 3),
                    std::invalid_argument);
    CHECK_THROWS_AS(eval_formula(FormulaId::chain_total, ChannelParam(0.5)),
                    std::invalid_argument);
    CHECK_THROWS_AS(eval_formula(FormulaId::chain_step, ChannelParam(0.5), 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(eval_formula(FormulaId::net_standard_total, ChannelParam(0.5), 0),
                    std::invalid_argument);
}

TEST_CASE("formula names round-trip") {
    for (FormulaId id : all_formula_ids()) {
        const auto back = formula_from_name(formula_name(id));
        REQUIRE(back.has_value());
        CHECK(*back == id);
    }
    CHECK_FALSE(formula_from_name("p_suc9").has_value());
}

TEST_CASE("network formulas agree with small exact binomial sums") {
    for (double n : {0.2, 0.6, 0.9}) {
        for (int q : {1, 2, 3, 5, 6}) {
            const double den_std = std::pow(1.0 + n * n, q);
            double expect_std =
                q % 2 == 0 ? binom(q, q / 2) * std::pow(n, q) / den_std : 0.0;
            CHECK(eval_formula(FormulaId::net_standard_direct, ChannelParam(n), q) ==
                  doctest::Approx(expect_std).epsilon(1e-12));
            for (int j = 0; j <= (q - 1) / 2; ++j)
                expect_std += binom(q, j) * 2.0 * std::pow(n, 2 * (q - j)) / den_std;
            CHECK(eval_formula(FormulaId::net_standard_total, ChannelParam(n), q) ==
                  doctest::Approx(expect_std).epsilon(1e-12));

            const double den_mat = std::pow(1.0 + n * n, 2 * q);
            CHECK(eval_formula(FormulaId::net_matched_direct, ChannelParam(n), q) ==
                  doctest::Approx(binom(2 * q, q) * std::pow(n, 2 * q) / den_mat)
                      .epsilon(1e-12));
        }
    }
}

TEST_CASE("standard beats matched across the grid at q=15") {
    for (int i = 1; i < 50; ++i) {
        const double n = static_cast<double>(i) / 50.0;
        const double std_total =
            eval_formula(FormulaId::net_standard_total, ChannelParam(n), 15);
        const double mat_total =
            eval_formula(FormulaId::net_matched_total, ChannelParam(n), 15);
        CHECK(std_total >= mat_total - 1e-15);
    }
}

TEST_CASE("large-q binomial sums stay finite and ordered") {
    for (int q : {100, 200, 500}) {
        const double v = eval_formula(FormulaId::net_standard_total, ChannelParam(0.8), q);
        CHECK(std::isfinite(v));
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("noisy success reduces to the ideal model at unit efficiency") {
    const NoiseParams perfect;
    for (double n : {0.2, 0.7, 1.0}) {
        CHECK(noisy_success(1, ChannelParam(n), perfect) ==
              doctest::Approx(eval_formula(FormulaId::p_suc1, ChannelParam(n))));
        CHECK(noisy_success(2, ChannelParam(n), perfect) ==
              doctest::Approx(eval_formula(FormulaId::p_suc2, ChannelParam(n))));
        CHECK(noisy_success(3, ChannelParam(n), perfect) ==
              doctest::Approx(eval_formula(FormulaId::p_suc3, ChannelParam(n))));
    }
    CHECK_THROWS_AS(noisy_success(4, ChannelParam(0.5), perfect), std::invalid_argument);
    CHECK_THROWS_AS(NoiseParams(1.2, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("noisy ratios reproduce the threshold identities") {
    const NoiseParams noise(0.9, 0.8, 0.7);
    for (double n : {0.1, 0.5, 0.9}) {
        const ChannelParam cp(n);
        const double r12 = noisy_success(1, cp, noise) / noisy_success(2, cp, noise);
        CHECK(r12 == doctest::Approx(noise.eps_b * noise.eps_u * (1.0 + n * n) / noise.eps_m)
                         .epsilon(1e-12));
        const double r23 = noisy_success(2, cp, noise) / noisy_success(3, cp, noise);
        CHECK(r23 ==
              doctest::Approx(noise.eps_m / (noise.eps_b * noise.eps_b)).epsilon(1e-12));
    }
}

TEST_CASE("crossover surface flags the threshold") {
    const auto cells = crossover_surface({1.0, 0.5, 0.8}, {0.0, 1.0, 0.6});
    REQUIRE(cells.size() == 9);
    CHECK(cells[0].ratio == doctest::Approx(1.0));   // r=1, n=0
    CHECK_FALSE(cells[0].group1_wins);
    CHECK(cells[4].ratio == doctest::Approx(1.0));   // r=0.5, n=1
    CHECK_FALSE(cells[4].group1_wins);
    CHECK(cells[8].ratio == doctest::Approx(1.088).epsilon(1e-12));  // r=0.8, n=0.6
    CHECK(cells[8].group1_wins);
    CHECK_THROWS_AS(crossover_surface({}, {0.5}), std::invalid_argument);
    CHECK_THROWS_AS(crossover_surface({0.5}, {1.5}), std::invalid_argument);
}

TEST_CASE("distillation identity holds numerically") {
    // Trivial edges first.
    const auto at_one = distill_equivalence(ChannelParam(1.0), 40);
    CHECK(at_one.lhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(at_one.rhs == doctest::Approx(1.0).epsilon(1e-12));
    const auto at_zero = distill_equivalence(ChannelParam(0.0), 1);
    CHECK(at_zero.lhs == doctest::Approx(0.0));
    CHECK(at_zero.rhs == doctest::Approx(0.0));
    // Generic points.
    CHECK(distill_equivalence(ChannelParam(0.7), 50).diff < 1e-10);
    CHECK(distill_equivalence(ChannelParam(0.95), 120).diff < 1e-10);
}

TEST_CASE("verification suites for formulas and bounds pass") {
    for (const auto& r : verify_formulas()) {
        INFO(r.name, " deviation ", r.max_deviation);
        CHECK(r.pass);
    }
    for (const auto& r : verify_distill(60)) {
        INFO(r.name, " deviation ", r.max_deviation);
        CHECK(r.pass);
    }
    for (const auto& r : verify_bounds()) {
        INFO(r.name, " deviation ", r.max_deviation);
        CHECK(r.pass);
    }
}

}  // TEST_SUITE
