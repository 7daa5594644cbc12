#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "ptlab/eigensolver.hpp"
#include "ptlab/model.hpp"
#include "ptlab/verify.hpp"

using ptlab::AntilinearOp;
using ptlab::ComplexMatrix;
using ptlab::cplx;
using ptlab::Expr;
using ptlab::Grid;
using ptlab::LinearOp;
using ptlab::PotentialSpec;

namespace {

PotentialSpec make_spec(const char* v, const char* a, double mass = 0.5,
                        ptlab::ParamEnv params = {}) {
    PotentialSpec s;
    s.v = Expr::parse(v);
    s.a = Expr::parse(a);
    s.mass = mass;
    s.params = std::move(params);
    return s;
}

}  // namespace

TEST_CASE("momentum stencil entries and exact symmetries") {
    const Grid g = ptlab::make_grid(1.0, 5);  // h = 0.5
    const ComplexMatrix d = ptlab::build_momentum(g).m;

    CHECK(d.at(0, 1) == cplx(0.0, -1.0));
    CHECK(d.at(1, 0) == cplx(0.0, 1.0));
    CHECK(d.at(0, 0) == cplx(0.0, 0.0));
    CHECK(d.at(0, 2) == cplx(0.0, 0.0));

    // exactly Hermitian, conj(D) = -D, R D R = -D
    CHECK(max_abs_diff_norm(d, conj_transposed(d)) == 0.0);
    CHECK(max_abs_diff_norm(conjugated(d), scaled(d, cplx(-1.0, 0.0))) == 0.0);
    const ComplexMatrix r = ptlab::build_parity(g).m;
    CHECK(max_abs_diff_norm(matmul(matmul(r, d), r), scaled(d, cplx(-1.0, 0.0))) == 0.0);
}

TEST_CASE("momentum eigenvalues match the analytic tridiagonal-Toeplitz spectrum") {
    const Grid g = ptlab::make_grid(3.0, 31);
    const ComplexMatrix d = ptlab::build_momentum(g).m;
    const auto spectrum = ptlab::eigendecompose(d, 1e-11);
    const auto expect = oracles::momentum_eigenvalues(g.n_points, g.spacing);
    const double scale = std::max(1.0, 1.0 / g.spacing);
    for (int k = 0; k < g.n_points; ++k) {
        CHECK(std::abs(spectrum.pairs[k].value.imag()) < 1e-11 * scale);
        CHECK(std::abs(spectrum.pairs[k].value.real() - expect[k]) < 1e-11 * scale);
    }
}

TEST_CASE("hamiltonian reduces to D^2 for free particle at m = 1/2") {
    const Grid g = ptlab::make_grid(2.0, 21);
    const ComplexMatrix d = ptlab::build_momentum(g).m;
    const ComplexMatrix h = ptlab::build_hamiltonian(make_spec("0", "0", 0.5), g).m;
    CHECK(max_abs_diff_norm(h, matmul(d, d)) == 0.0);
}

TEST_CASE("hamiltonian with constant A is the shifted square") {
    const Grid g = ptlab::make_grid(2.0, 21);
    const double m = 1.7;
    const ComplexMatrix h = ptlab::build_hamiltonian(make_spec("0", "3/2", m), g).m;

    const ComplexMatrix d = ptlab::build_momentum(g).m;
    const ComplexMatrix shift = sub(d, scaled(ComplexMatrix::identity(g.n_points), cplx(1.5, 0.0)));
    const ComplexMatrix expect = scaled(matmul(shift, shift), cplx(1.0 / (2.0 * m), 0.0));
    CHECK(max_abs_diff_norm(h, expect) == 0.0);
}

TEST_CASE("hamiltonian rejects non-positive mass and overflowing potentials") {
    const Grid g = ptlab::make_grid(2.0, 9);
    CHECK_THROWS_AS(ptlab::build_hamiltonian(make_spec("x", "0", 0.0), g), ptlab::Error);

    const Grid wide = ptlab::make_grid(40.0, 9);
    try {
        ptlab::build_hamiltonian(make_spec("exp(x^2)", "0", 0.5), wide);
        FAIL("expected overflow");
    } catch (const ptlab::NumericError& e) {
        CHECK(std::string(e.what()).find("x =") != std::string::npos);
    }
}

TEST_CASE("tau with vanishing A is plain time reversal") {
    const Grid g = ptlab::make_grid(4.0, 17);
    const AntilinearOp tau = ptlab::build_tau(make_spec("i*x^3", "0"), g);
    CHECK(max_abs_diff_norm(tau.m, ComplexMatrix::identity(g.n_points)) == 0.0);
}

TEST_CASE("tau with constant real A matches the closed-form phase") {
    const Grid g = ptlab::make_grid(2.0, 33);
    const double c = 2.5;
    const AntilinearOp tau = ptlab::build_tau(make_spec("0", "5/2"), g);
    for (int j = 0; j < g.n_points; ++j) {
        // composed antilinear matrix carries conj(e^{i alpha}) = e^{+2ic x}
        const cplx expect = std::exp(cplx(0.0, 2.0 * c * g.points[j]));
        CHECK(std::abs(tau.m.at(j, j) - expect) < 1e-14);
    }
    for (int j = 1; j < g.n_points; ++j) CHECK(tau.m.at(j, j - 1) == cplx(0.0, 0.0));
}

TEST_CASE("tau is Hermitian and invertible for random complex A") {
    std::mt19937_64 rng(101);
    const Grid g = ptlab::make_grid(2.0, 41);
    for (int trial = 0; trial < 20; ++trial) {
        ptlab::ParamEnv env{{"a0", oracles::random_unit_disk(rng)},
                            {"a1", oracles::random_unit_disk(rng)},
                            {"a2", oracles::random_unit_disk(rng)}};
        const auto spec = make_spec("0", "a0 + a1*x + a2*x^2", 0.5, env);
        const AntilinearOp tau = ptlab::build_tau(spec, g);
        const auto check = is_hermitian(tau, 1e-15);
        CHECK(check.hermitian);
        CHECK(check.residual == 0.0);  // diagonal, symmetric by construction
        for (int j = 0; j < g.n_points; ++j) CHECK(std::abs(tau.m.at(j, j)) > 0.0);
        const AntilinearOp tinv = inverse(tau);
        CHECK(max_abs_diff_norm(compose(tau, tinv).m, ComplexMatrix::identity(g.n_points)) <
              1e-13);
    }
}

TEST_CASE("tau reports gauge overflow with the offending node") {
    const Grid g = ptlab::make_grid(40.0, 41);
    CHECK_THROWS_AS(ptlab::build_tau(make_spec("0", "i*x"), g), ptlab::NumericError);
}

TEST_CASE("eta with vanishing A is the parity permutation") {
    const Grid g = ptlab::make_grid(4.0, 17);
    const LinearOp eta = ptlab::build_eta(make_spec("x^2", "0"), g);
    CHECK(max_abs_diff_norm(eta.m, ptlab::build_parity(g).m) == 0.0);
}

TEST_CASE("eta for A = i x is diag(e^{x^2}) R and exactly Hermitian") {
    const Grid g = ptlab::make_grid(3.0, 41);
    const LinearOp eta = ptlab::build_eta(make_spec("x^2", "i*x"), g);
    for (int j = 0; j < g.n_points; ++j) {
        const double x = g.points[j];
        const cplx entry = eta.m.at(j, g.n_points - 1 - j);
        CHECK(std::abs(entry - cplx(std::exp(x * x), 0.0)) <= 1e-12 * std::exp(x * x));
    }
    CHECK(is_hermitian(eta, 1e-15).hermitian);
    CHECK(max_abs_diff_norm(eta.m, conj_transposed(eta.m)) == 0.0);
}

TEST_CASE("eta with PT-violating A (real odd) is not Hermitian") {
    const Grid g = ptlab::make_grid(2.0, 5);
    const LinearOp eta = ptlab::build_eta(make_spec("0", "x"), g);
    CHECK_FALSE(is_hermitian(eta, 1e-12).hermitian);
}

TEST_CASE("parity matrix examples") {
    const Grid g = ptlab::make_grid(1.0, 5);
    const ComplexMatrix r = ptlab::build_parity(g).m;
    for (int j = 0; j < 5; ++j)
        for (int k = 0; k < 5; ++k)
            CHECK(r.at(j, k) == (k == 4 - j ? cplx(1.0, 0.0) : cplx(0.0, 0.0)));

    CHECK(max_abs_diff_norm(matmul(r, r), ComplexMatrix::identity(5)) == 0.0);

    std::vector<cplx> x(g.points.size()), neg(g.points.size());
    for (int j = 0; j < 5; ++j) {
        x[j] = cplx(g.points[j], 0.0);
        neg[j] = cplx(-g.points[j], 0.0);
    }
    CHECK(max_abs_diff_norm(matmul(matmul(r, ComplexMatrix::diagonal(x)), r),
                            ComplexMatrix::diagonal(neg)) == 0.0);
}

TEST_CASE("pt_transform fixes PT-symmetric building blocks") {
    const Grid g = ptlab::make_grid(2.0, 21);
    const int n = g.n_points;

    // real even multiplication operator
    std::vector<cplx> even(n);
    for (int j = 0; j < n; ++j) even[j] = cplx(g.points[j] * g.points[j], 0.0);
    const LinearOp v_even{ComplexMatrix::diagonal(even)};
    CHECK(max_abs_diff_norm(ptlab::pt_transform(v_even, g).m, v_even.m) == 0.0);

    // kinetic square
    const ComplexMatrix d = ptlab::build_momentum(g).m;
    const LinearOp d2{matmul(d, d)};
    CHECK(max_abs_diff_norm(ptlab::pt_transform(d2, g).m, d2.m) == 0.0);

    // imaginary odd multiplication operator
    std::vector<cplx> cubic(n);
    for (int j = 0; j < n; ++j) {
        const double x = g.points[j];
        cubic[j] = ptlab::mul_i(cplx(x * x * x, 0.0));
    }
    const LinearOp v_odd{ComplexMatrix::diagonal(cubic)};
    CHECK(max_abs_diff_norm(ptlab::pt_transform(v_odd, g).m, v_odd.m) == 0.0);
}

TEST_CASE("discrete gauge identity converges at second order in action") {
    // diag(e^{-i alpha}) D diag(e^{i alpha}) vs D + diag(alpha'), alpha = -2 int A.
    // The two sides are different second-order discretizations of one
    // operator: they agree at O(h^2) on smooth states, not entry by entry.
    auto residual = [](int n) {
        const Grid g = ptlab::make_grid(2.0, n);
        const auto a = ptlab::sample_on_grid(Expr::parse("sin(x)"), g, {}, "A");
        const auto alpha = ptlab::cumulative_integral(g, a);
        std::vector<cplx> phase_pos(g.n_points), phase_neg(g.n_points), aprime(g.n_points);
        for (int j = 0; j < g.n_points; ++j) {
            const cplx al = -2.0 * alpha[j];
            phase_pos[j] = std::exp(ptlab::mul_i(al));
            phase_neg[j] = std::exp(-ptlab::mul_i(al));
            aprime[j] = -2.0 * a[j];  // exact derivative of alpha
        }
        const ComplexMatrix d = ptlab::build_momentum(g).m;
        const ComplexMatrix lhs = matmul(
            matmul(ComplexMatrix::diagonal(phase_neg), d), ComplexMatrix::diagonal(phase_pos));
        const ComplexMatrix diff = sub(lhs, add(d, ComplexMatrix::diagonal(aprime)));
        double worst = 0.0;
        for (const auto& psi : ptlab::smooth_probes(g)) {
            const auto w = matvec(diff, psi);
            double nrm2 = 0.0;
            for (const cplx& z : w) nrm2 += std::norm(z);
            worst = std::max(worst, std::sqrt(nrm2));
        }
        return worst;
    };
    const double coarse = residual(101);
    const double fine = residual(201);
    CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("build_system assembles consistent pieces") {
    const Grid g = ptlab::make_grid(3.0, 25);
    ptlab::ParamEnv env{{"g", cplx(0.4, 0.0)}};
    const auto spec = make_spec("x^2 + i*g*x^3", "i*x", 0.5, env);
    const ptlab::HamiltonianSystem sys = ptlab::build_system(spec, g);

    CHECK(max_abs_diff_norm(sys.h.m, ptlab::build_hamiltonian(spec, g).m) == 0.0);
    CHECK(max_abs_diff_norm(sys.h_dagger.m, conj_transposed(sys.h.m)) == 0.0);
    CHECK(max_abs_diff_norm(sys.tau.m, ptlab::build_tau(spec, g).m) == 0.0);
    CHECK(max_abs_diff_norm(sys.eta.m, ptlab::build_eta(spec, g).m) == 0.0);

    // R^2 = 1 exactly and tau is diagonal
    CHECK(max_abs_diff_norm(matmul(sys.parity.m, sys.parity.m),
                            ComplexMatrix::identity(g.n_points)) == 0.0);
    for (int j = 0; j < g.n_points; ++j)
        for (int k = 0; k < g.n_points; ++k)
            if (j != k) CHECK(sys.tau.m.at(j, k) == cplx(0.0, 0.0));

    // alpha and beta tie together by conjugation
    for (int j = 0; j < g.n_points; ++j) {
        CHECK(sys.beta[j].real() == -std::conj(sys.alpha[j]).real());
        CHECK(sys.beta[j].imag() == -std::conj(sys.alpha[j]).imag());
    }
}
