#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ptlab/eigensolver.hpp"
#include "ptlab/verify.hpp"

// Config ingestion, command drivers and report emission. Reports are
// deterministic: a fixed key order, every floating-point number printed as
// %.16e (17 significant digits), complex numbers as [re, im] pairs, and no
// timestamps — identical config bytes produce identical report bytes.

namespace ptlab {

struct Tolerances {
    double exact = kExactThreshold;  // EXACT classification threshold
    double pairing = 1e-8;           // conjugate-pair matching, relative
    double eigen = 1e-9;             // eigenpair residual bound, relative
    double condition_limit = kConditionLimit;
};

struct Config {
    std::string potential_v;
    std::string potential_a = "0";
    double mass = 0.5;
    double half_width = 0.0;
    int grid_points = 0;
    std::map<std::string, cplx> params;
    Tolerances tol;
};

Config config_from_json(const std::string& text);  // throws ConfigError
Config load_config(const std::string& path);
PotentialSpec spec_from_config(const Config& cfg);  // parses + validates bindings

struct SkippedCheck {
    std::string name;
    std::string reason;
};

struct SpectrumData {
    std::vector<cplx> eigenvalues;
    std::vector<double> residuals;
    PairingReport pairing;
    double matrix_norm = 0.0;
    double basis_condition = 0.0;
    bool basis_ill_conditioned = false;
};

struct Report {
    std::string command;  // check | spectrum | converge
    Config config;
    std::optional<ParityConditionReport> parity;
    std::vector<ResidualReport> checks;
    std::vector<SkippedCheck> skipped;
    std::optional<SpectrumData> spectrum;
    std::optional<ConvergenceReport> convergence;
    std::string verdict;  // pass | fail | no-op
};

// Builds the system once and runs the identity suite; pseudo-Hermiticity
// runs only when the parity conditions pass (it is skipped with a reason
// otherwise).
Report run_check(const Config& cfg);

// Eigendecomposition plus conjugate-pair matching. Zero unmatched
// eigenvalues is enforced only for PT-symmetric configs (parity pass).
Report run_spectrum(const Config& cfg);

Report run_converge(const Config& cfg, std::span<const int> n_list, IdentityKind identity);

enum class ReportFormat { Json, Text, Csv };

// Csv is only defined for spectrum reports.
std::string emit_report(const Report& rep, ReportFormat format);
std::string spectrum_csv(const Report& rep);

// 0 on pass/no-op, 1 on fail.
int verdict_exit_code(const Report& rep);

}  // namespace ptlab
