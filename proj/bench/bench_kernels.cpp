// Times the OpenMP kernels against their serial reference twins, plus one
// end-to-end identity check. Results are bit-identical between the two
// schedules; only the wall time differs.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "ptlab/kernels.hpp"
#include "ptlab/model.hpp"
#include "ptlab/verify.hpp"

using ptlab::cplx;
using ptlab::ComplexMatrix;
namespace kernels = ptlab::kernels;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ComplexMatrix random_matrix(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    ComplexMatrix m(n);
    for (auto& z : m.a) z = cplx(dist(rng), dist(rng));
    return m;
}

template <typename Fn>
double time_best_of(int reps, Fn&& fn) {
    double best = 1e99;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        best = std::min(best, seconds_since(t0));
    }
    return best;
}

}  // namespace

int main() {
    std::printf("threads available: %d\n\n", kernels::thread_count());
    std::printf("%-28s %8s %12s %12s %9s\n", "kernel", "n", "serial [s]", "openmp [s]", "speedup");

    std::mt19937_64 rng(12345);
    for (const int n : {101, 201, 301, 401}) {
        const ComplexMatrix a = random_matrix(n, rng);
        const ComplexMatrix b = random_matrix(n, rng);
        ComplexMatrix c(n);

        const double ts = time_best_of(3, [&] {
            kernels::matmul_serial(a.a.data(), b.a.data(), c.a.data(), n);
        });
        const double tp = time_best_of(3, [&] {
            kernels::matmul(a.a.data(), b.a.data(), c.a.data(), n);
        });
        std::printf("%-28s %8d %12.4f %12.4f %8.2fx\n", "matmul (dense complex)", n, ts, tp,
                    ts / tp);
    }

    for (const int n : {201, 401}) {
        const ComplexMatrix a = random_matrix(n, rng);
        std::vector<int> piv(n);

        const double ts = time_best_of(3, [&] {
            ComplexMatrix lu = a;
            kernels::lu_factor_serial(lu.a.data(), piv.data(), n);
            ComplexMatrix x = ComplexMatrix::identity(n);
            kernels::lu_solve_matrix_serial(lu.a.data(), piv.data(), x.a.data(), n);
        });
        const double tp = time_best_of(3, [&] {
            ComplexMatrix lu = a;
            kernels::lu_factor(lu.a.data(), piv.data(), n);
            ComplexMatrix x = ComplexMatrix::identity(n);
            kernels::lu_solve_matrix(lu.a.data(), piv.data(), x.a.data(), n);
        });
        std::printf("%-28s %8d %12.4f %12.4f %8.2fx\n", "lu factor + inverse", n, ts, tp,
                    ts / tp);
    }

    // end to end: build a gauged system and measure one identity residual
    {
        ptlab::PotentialSpec spec;
        spec.v = ptlab::Expr::parse("x^2");
        spec.a = ptlab::Expr::parse("sin(x) + i*x");
        spec.mass = 0.5;
        const ptlab::Grid grid = ptlab::make_grid(5.0, 401);

        kernels::set_parallel(false);
        const double ts = time_best_of(2, [&] {
            const auto sys = ptlab::build_system(spec, grid);
            (void)ptlab::anti_pseudo_residual(sys);
        });
        kernels::set_parallel(true);
        const double tp = time_best_of(2, [&] {
            const auto sys = ptlab::build_system(spec, grid);
            (void)ptlab::anti_pseudo_residual(sys);
        });
        std::printf("%-28s %8d %12.4f %12.4f %8.2fx\n", "anti-pseudo check (e2e)", 401, ts, tp,
                    ts / tp);
    }
    return 0;
}
