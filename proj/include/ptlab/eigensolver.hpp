#pragma once

#include <utility>
#include <vector>

#include "ptlab/opalg.hpp"

namespace ptlab {

struct EigenPair {
    cplx value{0.0, 0.0};
    std::vector<cplx> vector;  // normalized, ||v||_2 = 1
    double residual = 0.0;     // ||H v - lambda v||_2 against the input matrix
};

// Full spectrum sorted by (Re, Im). `basis_condition` is an infinity-norm
// condition estimate of the eigenvector matrix; defective or
// near-defective inputs are reported through it instead of being hidden
// behind a diagonalizability assumption.
struct Spectrum {
    std::vector<EigenPair> pairs;
    double matrix_norm = 0.0;  // max_abs of the input
    double basis_condition = 0.0;
    bool basis_ill_conditioned = false;
};

inline constexpr int kMaxEigenDim = 1000;

// Dense non-Hermitian eigendecomposition: Householder reduction to upper
// Hessenberg form, implicit single-shift QR with Wilkinson shifts and
// Schur-vector accumulation, then triangular back-substitution for the
// eigenvectors. Deterministic for a fixed input. Throws ConvergenceError
// if the iteration cap is hit or any certified residual misses
// tol * max(1, max_abs(H)).
Spectrum eigendecompose(const ComplexMatrix& h, double tol = 1e-9);

struct PairingReport {
    std::vector<std::pair<int, int>> conjugate_pairs;  // indices into Spectrum
    std::vector<int> real_indices;                     // |Im| within tolerance
    std::vector<int> unmatched;
    double tolerance_abs = 0.0;  // tol * max(1, max_abs(H))
};

// Greedy minimum-distance matching of each eigenvalue against the
// conjugated spectrum. Pseudo-Hermiticity predicts `unmatched` empty: the
// multiset of eigenvalues is closed under complex conjugation.
PairingReport conjugate_pair_matching(const Spectrum& s, double tol = 1e-8);

}  // namespace ptlab
