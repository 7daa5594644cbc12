#pragma once

#include <span>
#include <vector>

#include "ptlab/core.hpp"

// Dense complex matrices plus a closed algebra of linear and antilinear
// operators. An antilinear operator is stored as the single matrix M of
// the map psi -> M conj(psi); with that convention the algebra closes
// under four composition rules, the adjoint of an antilinear operator is
// a plain transpose, and antilinear Hermiticity becomes complex symmetry
// of M.

namespace ptlab {

struct ComplexMatrix {
    int n = 0;
    std::vector<cplx> a;  // row-major n x n

    ComplexMatrix() = default;
    explicit ComplexMatrix(int n) : n(n), a(std::size_t(n) * n) {}

    cplx& at(int i, int j) { return a[std::size_t(i) * n + j]; }
    cplx at(int i, int j) const { return a[std::size_t(i) * n + j]; }

    static ComplexMatrix identity(int n);
    static ComplexMatrix diagonal(std::span<const cplx> d);
};

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix sub(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix scaled(const ComplexMatrix& a, cplx factor);
ComplexMatrix conjugated(const ComplexMatrix& a);
ComplexMatrix transposed(const ComplexMatrix& a);
ComplexMatrix conj_transposed(const ComplexMatrix& a);

// max over entries of |a_jk|; residual metrics are relative to max(1, .).
double max_abs_norm(const ComplexMatrix& a);
double max_abs_diff_norm(const ComplexMatrix& a, const ComplexMatrix& b);

bool all_finite(const ComplexMatrix& a);

std::vector<cplx> matvec(const ComplexMatrix& a, std::span<const cplx> v);

// psi -> M psi
struct LinearOp {
    ComplexMatrix m;
};

// psi -> M conj(psi); Hermitian iff M == transpose(M) under the pairing
// <phi, A psi> = <psi, adjoint(A) phi>.
struct AntilinearOp {
    ComplexMatrix m;
};

// T: plain complex conjugation, AntilinearOp(identity).
AntilinearOp time_reversal(int n);

// Kind of a composition is the XOR of the operand kinds; matrices combine
// with a conjugation on the right factor exactly when the left operand is
// antilinear:
//   linear . linear         -> linear      Ma Mb
//   linear . antilinear     -> antilinear  Ma Mb
//   antilinear . linear     -> antilinear  Ma conj(Mb)
//   antilinear . antilinear -> linear      Ma conj(Mb)
LinearOp compose(const LinearOp& a, const LinearOp& b);
AntilinearOp compose(const LinearOp& a, const AntilinearOp& b);
AntilinearOp compose(const AntilinearOp& a, const LinearOp& b);
LinearOp compose(const AntilinearOp& a, const AntilinearOp& b);

LinearOp adjoint(const LinearOp& a);          // conjugate transpose
AntilinearOp adjoint(const AntilinearOp& a);  // transpose

inline constexpr double kConditionLimit = 1e12;

// LU inversion with partial pivoting. Rejects exactly singular input, and
// input whose infinity-norm condition estimate exceeds `condition_limit`.
LinearOp inverse(const LinearOp& a, double condition_limit = kConditionLimit);
AntilinearOp inverse(const AntilinearOp& a, double condition_limit = kConditionLimit);

// a . h . a^-1. Implemented by factor-and-solve rather than through
// inverse(), so only exact singularity is rejected; steep but invertible
// gauge factors (diagonals spanning many orders of magnitude) stay usable.
LinearOp similarity(const LinearOp& a, const LinearOp& h);
LinearOp similarity(const AntilinearOp& a, const LinearOp& h);

struct HermiticityCheck {
    bool hermitian = false;
    double residual = 0.0;  // max_abs(M - M_adjoint) / max(1, max_abs(M))
};
HermiticityCheck is_hermitian(const LinearOp& a, double tol);
HermiticityCheck is_hermitian(const AntilinearOp& a, double tol);

std::vector<cplx> apply(const LinearOp& a, std::span<const cplx> psi);
std::vector<cplx> apply(const AntilinearOp& a, std::span<const cplx> psi);

}  // namespace ptlab
