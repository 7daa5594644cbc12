#include <doctest.h>

#include <string>

#include <json.hpp>

#include "ptlab/cli.hpp"

using ptlab::Config;
using ptlab::cplx;
using ptlab::Report;

namespace {

const char* kCubicConfig = R"({
  "potential_V": "i*x^3",
  "potential_A": "0",
  "half_width": 8.0,
  "grid_points": 121
})";

}  // namespace

TEST_CASE("config parsing: defaults, params, tolerances") {
    const Config cfg = ptlab::config_from_json(kCubicConfig);
    CHECK(cfg.potential_v == "i*x^3");
    CHECK(cfg.mass == 0.5);  // default
    CHECK(cfg.grid_points == 121);

    const Config with_params = ptlab::config_from_json(R"({
        "potential_V": "x^2 + i*g*x^3",
        "half_width": 6.0,
        "grid_points": 101,
        "params": {"g": [0.0, 1.0]},
        "tolerances": {"pairing": 1e-7}
    })");
    CHECK(with_params.params.at("g") == cplx(0.0, 1.0));
    CHECK(with_params.tol.pairing == 1e-7);
    CHECK(with_params.tol.exact == 1e-12);
    CHECK(with_params.potential_a == "0");  // default
}

TEST_CASE("config parsing rejects malformed input with field names") {
    using ptlab::ConfigError;
    CHECK_THROWS_AS(ptlab::config_from_json("not json"), ConfigError);
    CHECK_THROWS_AS(ptlab::config_from_json("{}"), ConfigError);
    CHECK_THROWS_AS(ptlab::config_from_json(R"({"potential_V": "x", "half_width": 1.0})"),
                    ConfigError);
    CHECK_THROWS_AS(ptlab::config_from_json(
                        R"({"potential_V": "x", "half_width": 1.0, "grid_points": 100})"),
                    ConfigError);  // even N
    CHECK_THROWS_AS(ptlab::config_from_json(
                        R"({"potential_V": "x", "half_width": 1.0, "grid_points": 101,
                            "bogus": 3})"),
                    ConfigError);
    CHECK_THROWS_AS(ptlab::config_from_json(
                        R"({"potential_V": "x", "half_width": 1.0, "grid_points": 101,
                            "params": {"g": [1.0]}})"),
                    ConfigError);  // complex must be [re, im]

    try {
        ptlab::config_from_json(R"({"half_width": 1.0, "grid_points": 101})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("potential_V") != std::string::npos);
    }
}

TEST_CASE("spec_from_config validates expressions and parameter bindings") {
    Config cfg = ptlab::config_from_json(kCubicConfig);
    CHECK_NOTHROW(ptlab::spec_from_config(cfg));

    cfg.potential_v = "i*(x";
    CHECK_THROWS_AS(ptlab::spec_from_config(cfg), ptlab::ConfigError);

    cfg.potential_v = "g*x";
    CHECK_THROWS_AS(ptlab::spec_from_config(cfg), ptlab::ConfigError);  // unbound g
}

TEST_CASE("run_check on the canonical PT-symmetric cubic: all exact, parity pass") {
    const Config cfg = ptlab::config_from_json(R"({
        "potential_V": "i*x^3", "potential_A": "0", "half_width": 8.0, "grid_points": 201
    })");
    const Report rep = ptlab::run_check(cfg);
    CHECK(rep.verdict == "pass");
    REQUIRE(rep.parity.has_value());
    CHECK(rep.parity->all_pass);
    REQUIRE(rep.checks.size() == 5);  // pt, anti-pseudo, corollary1, eta, pseudo
    for (const auto& c : rep.checks) {
        CAPTURE(c.name);
        CHECK(c.classification == ptlab::ResidualClass::Exact);
    }
    CHECK(rep.skipped.empty());
    CHECK(ptlab::verdict_exit_code(rep) == 0);
}

TEST_CASE("run_check on odd real V: pt fails, pseudo skipped with reason") {
    const Config cfg = ptlab::config_from_json(R"({
        "potential_V": "x", "potential_A": "0", "half_width": 8.0, "grid_points": 201
    })");
    const Report rep = ptlab::run_check(cfg);
    CHECK(rep.verdict == "fail");
    CHECK(ptlab::verdict_exit_code(rep) == 1);
    CHECK_FALSE(rep.parity->all_pass);
    REQUIRE(rep.skipped.size() == 1);
    CHECK(rep.skipped[0].name == "pseudo");
    bool saw_pt_fail = false;
    for (const auto& c : rep.checks)
        if (c.name == "pt_symmetry") saw_pt_fail = c.classification == ptlab::ResidualClass::Fail;
    CHECK(saw_pt_fail);
}

TEST_CASE("run_check with imaginary linear gauge: parity pass, eta exact, anti-pseudo "
          "discretization") {
    const Config cfg = ptlab::config_from_json(R"({
        "potential_V": "x^2", "potential_A": "g*x", "half_width": 6.0, "grid_points": 301,
        "params": {"g": [0.0, 1.0]}
    })");
    const Report rep = ptlab::run_check(cfg);
    CHECK(rep.parity->all_pass);
    for (const auto& c : rep.checks) {
        CAPTURE(c.name);
        if (c.name == "eta_hermiticity" || c.name == "corollary1_identity" ||
            c.name == "pt_symmetry")
            CHECK(c.classification == ptlab::ResidualClass::Exact);
        if (c.name == "anti_pseudo" || c.name == "pseudo")
            CHECK(c.classification == ptlab::ResidualClass::Discretization);
    }
    CHECK(rep.verdict == "pass");
}

TEST_CASE("report JSON is canonical, deterministic, and parseable") {
    const Config cfg = ptlab::config_from_json(kCubicConfig);
    const Report a = ptlab::run_check(cfg);
    const Report b = ptlab::run_check(cfg);
    const std::string ja = ptlab::emit_report(a, ptlab::ReportFormat::Json);
    const std::string jb = ptlab::emit_report(b, ptlab::ReportFormat::Json);
    CHECK(ja == jb);  // byte-identical

    const nlohmann::json doc = nlohmann::json::parse(ja);
    CHECK(doc["command"] == "check");
    CHECK(doc["verdict"] == "pass");
    CHECK(doc["config"]["grid_points"] == 121);
    CHECK(doc["checks"].size() == 5);
    CHECK(doc["parity_conditions"]["pass"] == true);
    // residuals are emitted in 17-significant-digit scientific notation
    CHECK(ja.find("e+") != std::string::npos);

    const std::string text = ptlab::emit_report(a, ptlab::ReportFormat::Text);
    CHECK(text.find("verdict: pass") != std::string::npos);
}

TEST_CASE("spectrum report and CSV") {
    const Config cfg = ptlab::config_from_json(R"({
        "potential_V": "x^2 + i*x^3", "potential_A": "0", "half_width": 6.0, "grid_points": 61
    })");
    const Report rep = ptlab::run_spectrum(cfg);
    REQUIRE(rep.spectrum.has_value());
    CHECK(rep.verdict == "pass");
    CHECK(rep.spectrum->pairing.unmatched.empty());
    CHECK(rep.spectrum->eigenvalues.size() == 61);

    const std::string csv = ptlab::spectrum_csv(rep);
    CHECK(csv.rfind("index,eigenvalue_re,eigenvalue_im,residual,pairing_partner_index\n", 0) ==
          0);
    // header + one row per eigenvalue, LF endings
    int lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == 62);
    CHECK(csv.find("\r") == std::string::npos);

    // csv of a check report is a config error
    const Report chk = ptlab::run_check(cfg);
    CHECK_THROWS_AS(ptlab::emit_report(chk, ptlab::ReportFormat::Csv), ptlab::ConfigError);
}

TEST_CASE("converge report") {
    const Config cfg = ptlab::config_from_json(R"json({
        "potential_V": "0", "potential_A": "sin(x)", "half_width": 5.0, "grid_points": 101
    })json");
    const std::vector<int> sizes{61, 121, 241};
    const Report rep = ptlab::run_converge(cfg, sizes, ptlab::IdentityKind::AntiPseudo);
    REQUIRE(rep.convergence.has_value());
    CHECK(rep.convergence->pass);
    CHECK(rep.verdict == "pass");
    const std::string json = ptlab::emit_report(rep, ptlab::ReportFormat::Json);
    const nlohmann::json doc = nlohmann::json::parse(json);
    CHECK(doc["convergence"]["samples"].size() == 3);
    CHECK(doc["convergence"]["pass"] == true);
}

TEST_CASE("empty report is a no-op verdict") {
    Report rep;
    rep.command = "check";
    rep.config = ptlab::config_from_json(kCubicConfig);
    rep.verdict = "no-op";
    const std::string json = ptlab::emit_report(rep, ptlab::ReportFormat::Json);
    const nlohmann::json doc = nlohmann::json::parse(json);
    CHECK(doc["checks"].empty());
    CHECK(doc["verdict"] == "no-op");
    CHECK(ptlab::verdict_exit_code(rep) == 0);
}
