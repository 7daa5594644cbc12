#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ptlab/model.hpp"

// Each operator identity becomes a measured residual with a
// classification:
//   EXACT          entrywise relative residual at rounding level
//   DISCRETIZATION identity holds in the continuum; the finite-difference
//                  truncation leaves an O(h^2) remainder
//   FAIL           the identity's hypothesis is violated, or an expected
//                  exact identity missed the threshold
//
// Two measurements are recorded per identity. The entrywise one,
// max_abs(difference) / max(1, max_abs(reference)), is the EXACT gate: the
// machine-exact identities hold entry by entry. The action one applies the
// difference to a fixed family of smooth boundary-vanishing probe vectors,
// max over probes of ||G psi||_2 / max(1, ||H psi||_2). Identities that
// are only approximate on the grid agree in action at O(h^2), while their
// entrywise difference concentrates O(1/h) on the stencil band (two
// second-order discretizations of one operator never agree entry by
// entry), so convergence studies fit the action residual.

namespace ptlab {

inline constexpr double kExactThreshold = 1e-12;

enum class ResidualClass { Exact, Discretization, Fail };
const char* to_string(ResidualClass c);

struct ResidualReport {
    std::string name;
    double absolute = 0.0;  // max_abs(difference)
    double relative = 0.0;  // absolute / scale
    double scale = 1.0;     // max(1, max_abs(reference operator))
    double action_absolute = 0.0;  // max_probe ||G psi||_2
    double action_relative = 0.0;  // action_absolute / action_scale
    double action_scale = 1.0;     // max(1, max_probe ||ref psi||_2)
    ResidualClass classification = ResidualClass::Fail;
    bool applicable = true;  // false: hypothesis violated, residual informational
    std::string note;
};

// The smooth probe family used by the action measurement: the quartic
// Dirichlet bump (1 - (x/L)^2)^4 times {1, x/L, (x/L)^2, sin(pi x/L)},
// each normalized to unit 2-norm.
std::vector<std::vector<cplx>> smooth_probes(const Grid& grid);

// tau H tau^-1 vs H^dagger; exact for vanishing A, O(h^2) otherwise.
ResidualReport anti_pseudo_residual(const HamiltonianSystem& sys,
                                    double exact_threshold = kExactThreshold);

// eta H eta^-1 vs H^dagger; predicted for PT-symmetric specs only.
ResidualReport pseudo_residual(const HamiltonianSystem& sys,
                               double exact_threshold = kExactThreshold);

// R conj(H) R vs H; exact at the nodes whenever the sampled potentials
// satisfy the component parity conditions.
ResidualReport pt_symmetry_residual(const HamiltonianSystem& sys,
                                    double exact_threshold = kExactThreshold);

// eta vs eta^dagger.
ResidualReport eta_hermiticity_residual(const HamiltonianSystem& sys,
                                        double exact_threshold = kExactThreshold);

// matrix(tau . P . T) vs matrix(eta); exact for arbitrary complex A
// because conjugation commutes with the real-weight quadrature.
ResidualReport corollary1_identity_check(const HamiltonianSystem& sys,
                                         double exact_threshold = kExactThreshold);

// tau H vs H tau; predicted for Hermitian specs (A and V real-valued).
ResidualReport commutator_tau_residual(const HamiltonianSystem& sys,
                                       double exact_threshold = kExactThreshold);

struct ParityCondition {
    std::string name;            // A_real_even | A_imag_odd | V_real_even | V_imag_odd
    double max_violation = 0.0;  // relative to max(1, max |samples|)
    bool pass = false;
};

struct ParityConditionReport {
    std::vector<ParityCondition> conditions;
    bool all_pass = false;
};

// Checks A_r even, A_i odd, V_r even, V_i odd at every node pair.
ParityConditionReport parity_conditions_check(const PotentialSpec& spec, const Grid& grid,
                                              double tol = kExactThreshold);

enum class IdentityKind { AntiPseudo, Pseudo, PtSymmetry, EtaHermiticity, Corollary1, CommutatorTau };
const char* to_string(IdentityKind k);
bool identity_from_name(std::string_view name, IdentityKind* out);

struct ConvergenceSample {
    int n_points = 0;
    double h = 0.0;
    double max_abs_absolute = 0.0;
    double max_abs_relative = 0.0;
    double action_absolute = 0.0;
    double action_relative = 0.0;
};

struct ConvergenceReport {
    IdentityKind identity = IdentityKind::AntiPseudo;
    std::vector<ConvergenceSample> samples;
    double slope = 0.0;  // least-squares d log(action residual) / d log(h)
    double slope_min = 1.7;
    double slope_max = 2.3;
    bool exact_short_circuit = false;  // every action residual already EXACT-level
    bool pass = false;
};

// Measures one identity across >= 3 increasing odd grid sizes and fits the
// log-log slope of the action residual; passes on slope in [1.7, 2.3] or
// on the exact short-circuit.
ConvergenceReport convergence_study(const PotentialSpec& spec, double half_width,
                                    std::span<const int> n_list, IdentityKind identity,
                                    double exact_threshold = kExactThreshold);

}  // namespace ptlab
