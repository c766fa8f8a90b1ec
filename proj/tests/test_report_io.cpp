#include <charconv>
#include <cmath>
#include <string>

#include "doctest.h"
#include "telesim/report_io.hpp"

using namespace telesim;

TEST_SUITE("report_io") {

TEST_CASE("format_double is shortest round-trip") {
    for (double v : {0.1, 1.0 / 3.0, 0.32, 1e-300, 2.0 * 0.81 / 1.81, 0.0}) {
        const std::string s = format_double(v);
        double back = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), back);
        REQUIRE(ec == std::errc{});
        REQUIRE(ptr == s.data() + s.size());
        CHECK(back == v);
    }
    CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("sweep csv round-trips exactly") {
    std::vector<SweepRow> rows(3);
    rows[0].n = 0.1;
    rows[0].q = 4;
    rows[0].direct = 1.0 / 3.0;
    rows[0].corrected = 0.32;
    rows[0].formula = 0.32;
    rows[0].abs_diff = 1.1102230246251565e-16;
    rows[1].n = 0.2;
    rows[1].p_hat = 0.4;
    rows[1].std_err = 0.00049;
    rows[2].n = 1.0;
    rows[2].corrected = 1.0;

    const std::string text = sweep_csv(rows);
    CHECK(text.substr(0, text.find('\n')) ==
          "n,q,direct,corrected,formula,abs_diff,p_hat,std_err");
    CHECK(text.find("\r") == std::string::npos);

    const auto parsed = parse_sweep_csv(text);
    REQUIRE(parsed.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(parsed[i].n == rows[i].n);
        CHECK(parsed[i].q == rows[i].q);
        CHECK(parsed[i].direct == rows[i].direct);
        CHECK(parsed[i].corrected == rows[i].corrected);
        CHECK(parsed[i].formula == rows[i].formula);
        CHECK(parsed[i].abs_diff == rows[i].abs_diff);
        CHECK(parsed[i].p_hat == rows[i].p_hat);
        CHECK(parsed[i].std_err == rows[i].std_err);
    }
}

TEST_CASE("parse_sweep_csv rejects malformed input") {
    CHECK_THROWS_AS(parse_sweep_csv("bogus header\n"), std::invalid_argument);
    CHECK_THROWS_AS(
        parse_sweep_csv("n,q,direct,corrected,formula,abs_diff,p_hat,std_err\n0.1,1,x,,,,,\n"),
        std::invalid_argument);
}

TEST_CASE("report json mirrors the report fields") {
    const InputQubit in(0.6, 0.8);
    const ProtocolReport rep = run_group1(in, ChannelParam(0.5));
    const auto plain = report_json(rep, false);
    CHECK(plain["protocol_name"] == "group1");
    CHECK(plain["params"]["n"] == 0.5);
    CHECK(plain["params"]["m_policy"] == "m=1");
    CHECK(plain["direct_success"].get<double>() == doctest::Approx(0.0));
    CHECK(plain["corrected_success"].get<double>() == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(plain["entanglement_consumed"]["bell"] == 1);
    CHECK_FALSE(plain.contains("branches"));

    const auto full = report_json(rep, true);
    REQUIRE(full.contains("branches"));
    CHECK(full["branches"].size() == rep.branches.size());
    CHECK(full["branches"][0].contains("labels"));
    CHECK(full["branches"][0].contains("probability"));
    CHECK(full["branches"][0].contains("corrections_applied"));
}

TEST_CASE("basis csv lists every amplitude") {
    const auto basis = bell_basis(BasisParam(0.5));
    const std::string text = basis_csv(basis);
    CHECK(text.substr(0, text.find('\n')) == "label,index,re,im");
    std::size_t lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    CHECK(lines == 1 + 4 * 4);
    CHECK(text.find("Phi+,0,") != std::string::npos);
    CHECK(text.find("Psi-,2,") != std::string::npos);
}

}  // TEST_SUITE
