#pragma once

#include "ptlab/expr.hpp"
#include "ptlab/grid.hpp"
#include "ptlab/opalg.hpp"

// Discretized H = (p - A(x))^2 / (2m) + V(x) on a symmetric grid, together
// with its symmetry operators:
//   tau = T e^{i alpha(x)},  alpha = -2 int_0^x A      (antilinear)
//   eta = e^{i beta(x)} P,   beta  =  2 int_0^x conj(A) (linear)
// p is the 3-point central difference, which keeps conj(D) = -D and
// R D R = -D exact, so the A = 0 identities and the node-level PT identity
// hold at machine precision rather than merely O(h^2).

namespace ptlab {

struct PotentialSpec {
    Expr v;             // scalar potential V(x)
    Expr a;             // vector potential A(x)
    double mass = 0.5;  // default 1/2 makes H = p^2 + V
    ParamEnv params;
};

struct HamiltonianSystem {
    Grid grid;
    LinearOp h;
    LinearOp h_dagger;
    AntilinearOp tau;
    LinearOp eta;
    LinearOp parity;
    std::vector<cplx> alpha;      // -2 int_0^x A, sampled
    std::vector<cplx> beta;       //  2 int_0^x conj(A), sampled
    std::vector<cplx> v_samples;
    std::vector<cplx> a_samples;
};

// Samples an expression at every node, rejecting non-finite values with
// the offending x in the message.
std::vector<cplx> sample_on_grid(const Expr& e, const Grid& grid, const ParamEnv& params,
                                 const char* label);

// p = -i d/dx: D = -i S / (2h) with the central-difference stencil S,
// Dirichlet-truncated at the ends. Exactly Hermitian; conj(D) = -D.
LinearOp build_momentum(const Grid& grid);

// Reflection permutation R, R = R^T = R^-1 exactly.
LinearOp build_parity(const Grid& grid);

// H = (D - diag A)(D - diag A)/(2m) + diag V, kept as an explicit square.
LinearOp build_hamiltonian(const PotentialSpec& spec, const Grid& grid);

AntilinearOp build_tau(const PotentialSpec& spec, const Grid& grid);
LinearOp build_eta(const PotentialSpec& spec, const Grid& grid);

// PT conjugation at matrix level: R conj(H) R.
LinearOp pt_transform(const LinearOp& h, const Grid& grid);

HamiltonianSystem build_system(const PotentialSpec& spec, const Grid& grid);

}  // namespace ptlab
