#include "ptlab/kernels.hpp"

#include <atomic>
#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ptlab::kernels {

namespace {

std::atomic<bool> g_parallel{true};

// Split interleaved complex storage into real/imag planes so the hot loops
// run on plain doubles (std::complex operator* would route through the
// libgcc NaN-recovery helper on every element).
void split_planes(const cplx* a, double* re, double* im, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
        re[i] = a[i].real();
        im[i] = a[i].imag();
    }
}

void matmul_impl(const cplx* a, const cplx* b, cplx* c, int n, bool par) {
    par = par && n >= 128;
    const std::size_t nn = std::size_t(n) * n;
    std::vector<double> ar(nn), ai(nn), br(nn), bi(nn), cr(nn, 0.0), ci(nn, 0.0);
    split_planes(a, ar.data(), ai.data(), nn);
    split_planes(b, br.data(), bi.data(), nn);

#pragma omp parallel for schedule(static) if (par)
    for (int i = 0; i < n; ++i) {
        double* crow = &cr[std::size_t(i) * n];
        double* cirow = &ci[std::size_t(i) * n];
        for (int k = 0; k < n; ++k) {
            const double x = ar[std::size_t(i) * n + k];
            const double y = ai[std::size_t(i) * n + k];
            if (x == 0.0 && y == 0.0) continue;
            const double* brr = &br[std::size_t(k) * n];
            const double* bir = &bi[std::size_t(k) * n];
            for (int j = 0; j < n; ++j) {
                crow[j] += x * brr[j] - y * bir[j];
                cirow[j] += x * bir[j] + y * brr[j];
            }
        }
    }

    for (std::size_t i = 0; i < nn; ++i) c[i] = cplx(cr[i], ci[i]);
}

double max_abs_impl(const cplx* a, std::size_t count, bool par) {
    par = par && count >= (std::size_t(1) << 15);
    double m = 0.0;
#pragma omp parallel for schedule(static) reduction(max : m) if (par)
    for (long long i = 0; i < (long long)count; ++i) {
        const double v = std::abs(a[i]);
        if (v > m) m = v;
    }
    return m;
}

double max_abs_diff_impl(const cplx* a, const cplx* b, std::size_t count, bool par) {
    par = par && count >= (std::size_t(1) << 15);
    double m = 0.0;
#pragma omp parallel for schedule(static) reduction(max : m) if (par)
    for (long long i = 0; i < (long long)count; ++i) {
        const double v = std::abs(a[i] - b[i]);
        if (v > m) m = v;
    }
    return m;
}

bool lu_factor_impl(cplx* a, int* piv, int n, bool par) {
    par = par && n >= 192;  // one region per pivot step; not worth it below this
    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = std::abs(a[std::size_t(k) * n + k]);
        for (int i = k + 1; i < n; ++i) {
            const double v = std::abs(a[std::size_t(i) * n + k]);
            if (v > best) {
                best = v;
                p = i;
            }
        }
        piv[k] = p;
        if (best == 0.0) return false;
        if (p != k) {
            for (int j = 0; j < n; ++j)
                std::swap(a[std::size_t(k) * n + j], a[std::size_t(p) * n + j]);
        }
        const cplx pivval = a[std::size_t(k) * n + k];
        for (int i = k + 1; i < n; ++i) a[std::size_t(i) * n + k] /= pivval;

        const double* rowk = reinterpret_cast<const double*>(&a[std::size_t(k) * n]);
#pragma omp parallel for schedule(static) if (par && n - k > 32)
        for (int i = k + 1; i < n; ++i) {
            const cplx lik = a[std::size_t(i) * n + k];
            const double lr = lik.real(), li = lik.imag();
            if (lr == 0.0 && li == 0.0) continue;
            double* rowi = reinterpret_cast<double*>(&a[std::size_t(i) * n]);
            for (int j = k + 1; j < n; ++j) {
                const double ur = rowk[2 * j], ui = rowk[2 * j + 1];
                rowi[2 * j] -= lr * ur - li * ui;
                rowi[2 * j + 1] -= lr * ui + li * ur;
            }
        }
    }
    return true;
}

void lu_solve_matrix_impl(const cplx* lu, const int* piv, cplx* b, int n, bool par) {
    par = par && n >= 192;  // one region per column step
    // P b
    for (int k = 0; k < n; ++k) {
        if (piv[k] != k) {
            for (int j = 0; j < n; ++j)
                std::swap(b[std::size_t(k) * n + j], b[std::size_t(piv[k]) * n + j]);
        }
    }
    // L y = b, unit lower triangle, whole-row updates keep accesses stride 1.
    for (int k = 0; k < n; ++k) {
        const double* rowk = reinterpret_cast<const double*>(&b[std::size_t(k) * n]);
#pragma omp parallel for schedule(static) if (par && n - k > 32)
        for (int i = k + 1; i < n; ++i) {
            const cplx lik = lu[std::size_t(i) * n + k];
            const double lr = lik.real(), li = lik.imag();
            if (lr == 0.0 && li == 0.0) continue;
            double* rowi = reinterpret_cast<double*>(&b[std::size_t(i) * n]);
            for (int j = 0; j < n; ++j) {
                const double ur = rowk[2 * j], ui = rowk[2 * j + 1];
                rowi[2 * j] -= lr * ur - li * ui;
                rowi[2 * j + 1] -= lr * ui + li * ur;
            }
        }
    }
    // U x = y
    for (int k = n - 1; k >= 0; --k) {
        const cplx ukk = lu[std::size_t(k) * n + k];
        for (int j = 0; j < n; ++j) b[std::size_t(k) * n + j] /= ukk;
        const double* rowk = reinterpret_cast<const double*>(&b[std::size_t(k) * n]);
#pragma omp parallel for schedule(static) if (par && k > 32)
        for (int i = 0; i < k; ++i) {
            const cplx uik = lu[std::size_t(i) * n + k];
            const double ur2 = uik.real(), ui2 = uik.imag();
            if (ur2 == 0.0 && ui2 == 0.0) continue;
            double* rowi = reinterpret_cast<double*>(&b[std::size_t(i) * n]);
            for (int j = 0; j < n; ++j) {
                const double xr = rowk[2 * j], xi = rowk[2 * j + 1];
                rowi[2 * j] -= ur2 * xr - ui2 * xi;
                rowi[2 * j + 1] -= ur2 * xi + ui2 * xr;
            }
        }
    }
}

}  // namespace

bool parallel_enabled() { return g_parallel.load(std::memory_order_relaxed); }
void set_parallel(bool on) { g_parallel.store(on, std::memory_order_relaxed); }

int thread_count() {
#ifdef _OPENMP
    return parallel_enabled() ? omp_get_max_threads() : 1;
#else
    return 1;
#endif
}

void matmul(const cplx* a, const cplx* b, cplx* c, int n) {
    matmul_impl(a, b, c, n, parallel_enabled());
}
void matmul_serial(const cplx* a, const cplx* b, cplx* c, int n) {
    matmul_impl(a, b, c, n, false);
}

double max_abs(const cplx* a, std::size_t count) {
    return max_abs_impl(a, count, parallel_enabled());
}
double max_abs_serial(const cplx* a, std::size_t count) {
    return max_abs_impl(a, count, false);
}

double max_abs_diff(const cplx* a, const cplx* b, std::size_t count) {
    return max_abs_diff_impl(a, b, count, parallel_enabled());
}
double max_abs_diff_serial(const cplx* a, const cplx* b, std::size_t count) {
    return max_abs_diff_impl(a, b, count, false);
}

bool lu_factor(cplx* a, int* piv, int n) {
    return lu_factor_impl(a, piv, n, parallel_enabled());
}
bool lu_factor_serial(cplx* a, int* piv, int n) {
    return lu_factor_impl(a, piv, n, false);
}

void lu_solve_matrix(const cplx* lu, const int* piv, cplx* b, int n) {
    lu_solve_matrix_impl(lu, piv, b, n, parallel_enabled());
}
void lu_solve_matrix_serial(const cplx* lu, const int* piv, cplx* b, int n) {
    lu_solve_matrix_impl(lu, piv, b, n, false);
}

}  // namespace ptlab::kernels
