#include "ptlab/model.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace ptlab {

namespace {

std::string at_node(double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return std::string("x = ") + buf;
}

void check_finite_samples(const std::vector<cplx>& w, const Grid& grid, const char* label) {
    for (int j = 0; j < grid.n_points; ++j) {
        if (!std::isfinite(w[j].real()) || !std::isfinite(w[j].imag()))
            throw NumericError(std::string(label) + " is not finite at " +
                               at_node(grid.points[j]));
    }
}

// e^{i phase_j} for sampled complex phase, overflow-checked.
std::vector<cplx> gauge_exponential(const std::vector<cplx>& phase, const Grid& grid,
                                    const char* label) {
    std::vector<cplx> w(phase.size());
    for (std::size_t j = 0; j < phase.size(); ++j) w[j] = std::exp(mul_i(phase[j]));
    check_finite_samples(w, grid, label);
    return w;
}

std::vector<cplx> scaled_samples(std::vector<cplx> v, double factor) {
    for (auto& z : v) z *= factor;
    return v;
}

std::vector<cplx> conj_samples(std::vector<cplx> v) {
    for (auto& z : v) z = std::conj(z);
    return v;
}

}  // namespace

std::vector<cplx> sample_on_grid(const Expr& e, const Grid& grid, const ParamEnv& params,
                                 const char* label) {
    std::vector<cplx> out(grid.n_points);
    for (int j = 0; j < grid.n_points; ++j) {
        out[j] = e.eval(grid.points[j], params);
        if (!std::isfinite(out[j].real()) || !std::isfinite(out[j].imag()))
            throw NumericError(std::string(label) + " overflows at " + at_node(grid.points[j]));
    }
    return out;
}

LinearOp build_momentum(const Grid& grid) {
    const int n = grid.n_points;
    const cplx off = cplx(0.0, -1.0) / (2.0 * grid.spacing);
    ComplexMatrix d(n);
    for (int j = 0; j + 1 < n; ++j) {
        d.at(j, j + 1) = off;   // -i/(2h)
        d.at(j + 1, j) = -off;  // +i/(2h)
    }
    return {std::move(d)};
}

LinearOp build_parity(const Grid& grid) {
    const int n = grid.n_points;
    ComplexMatrix r(n);
    for (int j = 0; j < n; ++j) r.at(j, n - 1 - j) = cplx(1.0, 0.0);
    return {std::move(r)};
}

LinearOp build_hamiltonian(const PotentialSpec& spec, const Grid& grid) {
    if (!(spec.mass > 0.0))
        throw Error("mass must be positive (got " + std::to_string(spec.mass) + ")");
    const std::vector<cplx> v = sample_on_grid(spec.v, grid, spec.params, "potential V");
    const std::vector<cplx> a = sample_on_grid(spec.a, grid, spec.params, "potential A");

    const LinearOp d = build_momentum(grid);
    const ComplexMatrix kin = sub(d.m, ComplexMatrix::diagonal(a));
    ComplexMatrix h = scaled(matmul(kin, kin), cplx(1.0 / (2.0 * spec.mass), 0.0));
    for (int j = 0; j < grid.n_points; ++j) h.at(j, j) += v[j];
    if (!all_finite(h)) throw NumericError("Hamiltonian has non-finite entries");
    return {std::move(h)};
}

AntilinearOp build_tau(const PotentialSpec& spec, const Grid& grid) {
    const std::vector<cplx> a = sample_on_grid(spec.a, grid, spec.params, "potential A");
    const std::vector<cplx> alpha = scaled_samples(cumulative_integral(grid, a), -2.0);
    const std::vector<cplx> w = gauge_exponential(alpha, grid, "gauge factor e^{i alpha}");
    return compose(time_reversal(grid.n_points), LinearOp{ComplexMatrix::diagonal(w)});
}

LinearOp build_eta(const PotentialSpec& spec, const Grid& grid) {
    const std::vector<cplx> a = sample_on_grid(spec.a, grid, spec.params, "potential A");
    const std::vector<cplx> beta =
        scaled_samples(cumulative_integral(grid, conj_samples(a)), 2.0);
    const std::vector<cplx> w = gauge_exponential(beta, grid, "gauge factor e^{i beta}");
    return compose(LinearOp{ComplexMatrix::diagonal(w)}, build_parity(grid));
}

LinearOp pt_transform(const LinearOp& h, const Grid& grid) {
    if (h.m.n != grid.n_points)
        throw Error("pt_transform: operator dimension " + std::to_string(h.m.n) +
                    " does not match grid with " + std::to_string(grid.n_points) + " points");
    const ComplexMatrix r = build_parity(grid).m;
    return {matmul(matmul(r, conjugated(h.m)), r)};
}

HamiltonianSystem build_system(const PotentialSpec& spec, const Grid& grid) {
    HamiltonianSystem sys;
    sys.grid = grid;
    sys.v_samples = sample_on_grid(spec.v, grid, spec.params, "potential V");
    sys.a_samples = sample_on_grid(spec.a, grid, spec.params, "potential A");
    sys.alpha = scaled_samples(cumulative_integral(grid, sys.a_samples), -2.0);
    sys.beta = scaled_samples(cumulative_integral(grid, conj_samples(sys.a_samples)), 2.0);
    sys.h = build_hamiltonian(spec, grid);
    sys.h_dagger = adjoint(sys.h);
    sys.tau = build_tau(spec, grid);
    sys.eta = build_eta(spec, grid);
    sys.parity = build_parity(grid);
    return sys;
}

}  // namespace ptlab
