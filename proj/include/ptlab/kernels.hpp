#pragma once

#include <cstddef>

#include "ptlab/core.hpp"

// Dense complex kernels. Every kernel has a serial twin (`*_serial`) with
// identical arithmetic; the OpenMP versions only change the loop schedule,
// never the per-entry operation order, so parallel and serial results are
// bit-identical. Zero entries of the left factor are skipped in both twins,
// which makes products against diagonal, permutation and banded matrices
// cheap without a sparse format.

namespace ptlab::kernels {

bool parallel_enabled();
void set_parallel(bool on);
int thread_count();

// c = a * b, row-major n x n; c must not alias a or b.
void matmul(const cplx* a, const cplx* b, cplx* c, int n);
void matmul_serial(const cplx* a, const cplx* b, cplx* c, int n);

double max_abs(const cplx* a, std::size_t count);
double max_abs_serial(const cplx* a, std::size_t count);

double max_abs_diff(const cplx* a, const cplx* b, std::size_t count);
double max_abs_diff_serial(const cplx* a, const cplx* b, std::size_t count);

// In-place LU with partial pivoting, row-major. piv[k] is the row swapped
// into position k at step k. Returns false on an exactly zero pivot.
bool lu_factor(cplx* a, int* piv, int n);
bool lu_factor_serial(cplx* a, int* piv, int n);

// Solve A * X = B in place on row-major n x n B, given lu_factor output.
void lu_solve_matrix(const cplx* lu, const int* piv, cplx* b, int n);
void lu_solve_matrix_serial(const cplx* lu, const int* piv, cplx* b, int n);

}  // namespace ptlab::kernels
