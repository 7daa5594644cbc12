#include "ptlab/cli.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ptlab {

namespace {

using nlohmann::json;

double require_finite_number(const json& j, const char* field) {
    if (!j.is_number()) throw ConfigError(std::string(field) + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(std::string(field) + ": must be finite");
    return v;
}

cplx complex_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2)
        throw ConfigError(field + ": complex values are [re, im] pairs");
    return {require_finite_number(j[0], field.c_str()), require_finite_number(j[1], field.c_str())};
}

Tolerances tolerances_from_json(const json& j) {
    Tolerances t;
    for (const auto& [key, value] : j.items()) {
        if (key == "exact") t.exact = require_finite_number(value, "tolerances.exact");
        else if (key == "pairing") t.pairing = require_finite_number(value, "tolerances.pairing");
        else if (key == "eigen") t.eigen = require_finite_number(value, "tolerances.eigen");
        else if (key == "condition_limit")
            t.condition_limit = require_finite_number(value, "tolerances.condition_limit");
        else throw ConfigError("tolerances: unknown field '" + key + "'");
    }
    if (t.exact < 0.0 || t.pairing < 0.0 || t.eigen < 0.0 || t.condition_limit <= 0.0)
        throw ConfigError("tolerances: values must be non-negative");
    return t;
}

}  // namespace

Config config_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");

    Config cfg;
    bool have_v = false, have_l = false, have_n = false;
    for (const auto& [key, value] : doc.items()) {
        if (key == "potential_V") {
            if (!value.is_string()) throw ConfigError("potential_V: expected a string");
            cfg.potential_v = value.get<std::string>();
            have_v = true;
        } else if (key == "potential_A") {
            if (!value.is_string()) throw ConfigError("potential_A: expected a string");
            cfg.potential_a = value.get<std::string>();
        } else if (key == "mass") {
            cfg.mass = require_finite_number(value, "mass");
        } else if (key == "half_width") {
            cfg.half_width = require_finite_number(value, "half_width");
            have_l = true;
        } else if (key == "grid_points") {
            if (!value.is_number_integer()) throw ConfigError("grid_points: expected an integer");
            cfg.grid_points = value.get<int>();
            have_n = true;
        } else if (key == "params") {
            if (!value.is_object()) throw ConfigError("params: expected an object");
            for (const auto& [pname, pval] : value.items())
                cfg.params[pname] = complex_from_json(pval, "params." + pname);
        } else if (key == "tolerances") {
            if (!value.is_object()) throw ConfigError("tolerances: expected an object");
            cfg.tol = tolerances_from_json(value);
        } else {
            throw ConfigError("unknown config field '" + key + "'");
        }
    }
    if (!have_v) throw ConfigError("missing required field 'potential_V'");
    if (!have_l) throw ConfigError("missing required field 'half_width'");
    if (!have_n) throw ConfigError("missing required field 'grid_points'");
    if (!(cfg.mass > 0.0)) throw ConfigError("mass: must be positive");
    if (!(cfg.half_width > 0.0)) throw ConfigError("half_width: must be positive");
    if (cfg.grid_points < 5 || cfg.grid_points % 2 == 0)
        throw ConfigError("grid_points: must be an odd integer >= 5");
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return config_from_json(buf.str());
}

PotentialSpec spec_from_config(const Config& cfg) {
    PotentialSpec spec;
    try {
        spec.v = Expr::parse(cfg.potential_v);
    } catch (const ParseError& e) {
        throw ConfigError(std::string("potential_V: ") + e.what());
    }
    try {
        spec.a = Expr::parse(cfg.potential_a);
    } catch (const ParseError& e) {
        throw ConfigError(std::string("potential_A: ") + e.what());
    }
    spec.mass = cfg.mass;
    spec.params = cfg.params;

    for (const Expr* e : {&spec.v, &spec.a}) {
        for (const std::string& name : e->free_params()) {
            if (!cfg.params.contains(name))
                throw ConfigError("unbound parameter '" + name + "' (add it to params)");
        }
    }
    return spec;
}

namespace {

bool check_fails(const Report& rep) {
    for (const ResidualReport& c : rep.checks)
        if (c.applicable && c.classification == ResidualClass::Fail) return true;
    // Parity is a requested check for `check`; for `spectrum` it only
    // decides whether the conjugate-pairing invariant is enforced.
    if (rep.command == "check" && rep.parity && !rep.parity->all_pass) return true;
    if (rep.spectrum && rep.parity && rep.parity->all_pass &&
        !rep.spectrum->pairing.unmatched.empty())
        return true;
    if (rep.convergence && !rep.convergence->pass) return true;
    return false;
}

void finish_verdict(Report& rep) {
    if (rep.checks.empty() && !rep.parity && !rep.spectrum && !rep.convergence) {
        rep.verdict = "no-op";
        return;
    }
    rep.verdict = check_fails(rep) ? "fail" : "pass";
}

}  // namespace

Report run_check(const Config& cfg) {
    const PotentialSpec spec = spec_from_config(cfg);
    const Grid grid = make_grid(cfg.half_width, cfg.grid_points);
    const HamiltonianSystem sys = build_system(spec, grid);

    Report rep;
    rep.command = "check";
    rep.config = cfg;
    rep.parity = parity_conditions_check(spec, grid, cfg.tol.exact);
    rep.checks.push_back(pt_symmetry_residual(sys, cfg.tol.exact));
    rep.checks.push_back(anti_pseudo_residual(sys, cfg.tol.exact));
    rep.checks.push_back(corollary1_identity_check(sys, cfg.tol.exact));
    rep.checks.push_back(eta_hermiticity_residual(sys, cfg.tol.exact));
    if (rep.parity->all_pass) {
        rep.checks.push_back(pseudo_residual(sys, cfg.tol.exact));
    } else {
        rep.skipped.push_back({"pseudo", "parity conditions fail: eta-pseudo-Hermiticity is only "
                                         "predicted for PT-symmetric potentials"});
    }
    finish_verdict(rep);
    return rep;
}

Report run_spectrum(const Config& cfg) {
    const PotentialSpec spec = spec_from_config(cfg);
    const Grid grid = make_grid(cfg.half_width, cfg.grid_points);
    const LinearOp h = build_hamiltonian(spec, grid);

    Report rep;
    rep.command = "spectrum";
    rep.config = cfg;
    rep.parity = parity_conditions_check(spec, grid, cfg.tol.exact);

    const Spectrum s = eigendecompose(h.m, cfg.tol.eigen);
    SpectrumData data;
    data.matrix_norm = s.matrix_norm;
    data.basis_condition = s.basis_condition;
    data.basis_ill_conditioned = s.basis_ill_conditioned;
    data.eigenvalues.reserve(s.pairs.size());
    data.residuals.reserve(s.pairs.size());
    for (const EigenPair& p : s.pairs) {
        data.eigenvalues.push_back(p.value);
        data.residuals.push_back(p.residual);
    }
    data.pairing = conjugate_pair_matching(s, cfg.tol.pairing);
    rep.spectrum = std::move(data);
    finish_verdict(rep);
    return rep;
}

Report run_converge(const Config& cfg, std::span<const int> n_list, IdentityKind identity) {
    const PotentialSpec spec = spec_from_config(cfg);
    Report rep;
    rep.command = "converge";
    rep.config = cfg;
    rep.convergence = convergence_study(spec, cfg.half_width, n_list, identity, cfg.tol.exact);
    finish_verdict(rep);
    return rep;
}

int verdict_exit_code(const Report& rep) { return rep.verdict == "fail" ? 1 : 0; }

}  // namespace ptlab
