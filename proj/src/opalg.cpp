#include "ptlab/opalg.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "ptlab/kernels.hpp"

namespace ptlab {

namespace {

void require_square_match(int an, int bn, const char* what) {
    if (an != bn)
        throw Error(std::string(what) + ": dimension mismatch (" + std::to_string(an) + " vs " +
                    std::to_string(bn) + ")");
}

double norm_inf(const ComplexMatrix& m) {
    double worst = 0.0;
    for (int i = 0; i < m.n; ++i) {
        double row = 0.0;
        for (int j = 0; j < m.n; ++j) row += std::abs(m.at(i, j));
        if (row > worst) worst = row;
    }
    return worst;
}

struct LuFactors {
    ComplexMatrix lu;
    std::vector<int> piv;
};

LuFactors factorize(const ComplexMatrix& m, const char* what) {
    LuFactors f{m, std::vector<int>(m.n)};
    if (!kernels::lu_factor(f.lu.a.data(), f.piv.data(), m.n))
        throw NumericError(std::string(what) + ": matrix is singular");
    return f;
}

// X = B * M^-1, via transposes so the triangular solves stream rows.
ComplexMatrix right_divide(const ComplexMatrix& b, const ComplexMatrix& m, const char* what) {
    ComplexMatrix mt = transposed(m);
    LuFactors f = factorize(mt, what);
    ComplexMatrix xt = transposed(b);
    kernels::lu_solve_matrix(f.lu.a.data(), f.piv.data(), xt.a.data(), m.n);
    return transposed(xt);
}

ComplexMatrix invert(const ComplexMatrix& m, double condition_limit, const char* what) {
    LuFactors f = factorize(m, what);
    ComplexMatrix inv = ComplexMatrix::identity(m.n);
    kernels::lu_solve_matrix(f.lu.a.data(), f.piv.data(), inv.a.data(), m.n);
    const double cond = norm_inf(m) * norm_inf(inv);
    if (!(cond <= condition_limit)) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.3e", cond);
        throw NumericError(std::string(what) + ": condition estimate " + buf +
                           " exceeds limit");
    }
    return inv;
}

}  // namespace

ComplexMatrix ComplexMatrix::identity(int n) {
    ComplexMatrix m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = cplx(1.0, 0.0);
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> d) {
    ComplexMatrix m(static_cast<int>(d.size()));
    for (int i = 0; i < m.n; ++i) m.at(i, i) = d[i];
    return m;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_square_match(a.n, b.n, "matmul");
    ComplexMatrix c(a.n);
    kernels::matmul(a.a.data(), b.a.data(), c.a.data(), a.n);
    return c;
}

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_square_match(a.n, b.n, "add");
    ComplexMatrix c = a;
    for (std::size_t i = 0; i < c.a.size(); ++i) c.a[i] += b.a[i];
    return c;
}

ComplexMatrix sub(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_square_match(a.n, b.n, "sub");
    ComplexMatrix c = a;
    for (std::size_t i = 0; i < c.a.size(); ++i) c.a[i] -= b.a[i];
    return c;
}

ComplexMatrix scaled(const ComplexMatrix& a, cplx factor) {
    ComplexMatrix c = a;
    for (auto& z : c.a) z *= factor;
    return c;
}

ComplexMatrix conjugated(const ComplexMatrix& a) {
    ComplexMatrix c = a;
    for (auto& z : c.a) z = std::conj(z);
    return c;
}

ComplexMatrix transposed(const ComplexMatrix& a) {
    ComplexMatrix c(a.n);
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) c.at(j, i) = a.at(i, j);
    return c;
}

ComplexMatrix conj_transposed(const ComplexMatrix& a) {
    ComplexMatrix c(a.n);
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) c.at(j, i) = std::conj(a.at(i, j));
    return c;
}

double max_abs_norm(const ComplexMatrix& a) { return kernels::max_abs(a.a.data(), a.a.size()); }

double max_abs_diff_norm(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_square_match(a.n, b.n, "max_abs_diff_norm");
    return kernels::max_abs_diff(a.a.data(), b.a.data(), a.a.size());
}

bool all_finite(const ComplexMatrix& a) {
    for (const cplx& z : a.a)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

std::vector<cplx> matvec(const ComplexMatrix& a, std::span<const cplx> v) {
    if (static_cast<int>(v.size()) != a.n)
        throw Error("matvec: vector length " + std::to_string(v.size()) + " vs matrix dimension " +
                    std::to_string(a.n));
    std::vector<cplx> out(a.n, cplx(0.0, 0.0));
    for (int i = 0; i < a.n; ++i) {
        cplx acc(0.0, 0.0);
        for (int j = 0; j < a.n; ++j) acc += a.at(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

AntilinearOp time_reversal(int n) { return AntilinearOp{ComplexMatrix::identity(n)}; }

LinearOp compose(const LinearOp& a, const LinearOp& b) { return {matmul(a.m, b.m)}; }
AntilinearOp compose(const LinearOp& a, const AntilinearOp& b) { return {matmul(a.m, b.m)}; }
AntilinearOp compose(const AntilinearOp& a, const LinearOp& b) {
    return {matmul(a.m, conjugated(b.m))};
}
LinearOp compose(const AntilinearOp& a, const AntilinearOp& b) {
    return {matmul(a.m, conjugated(b.m))};
}

LinearOp adjoint(const LinearOp& a) { return {conj_transposed(a.m)}; }
AntilinearOp adjoint(const AntilinearOp& a) { return {transposed(a.m)}; }

LinearOp inverse(const LinearOp& a, double condition_limit) {
    return {invert(a.m, condition_limit, "inverse(linear)")};
}

AntilinearOp inverse(const AntilinearOp& a, double condition_limit) {
    // (psi -> M conj psi)^-1 = psi -> conj(M^-1) conj(psi)
    return {conjugated(invert(a.m, condition_limit, "inverse(antilinear)"))};
}

LinearOp similarity(const LinearOp& a, const LinearOp& h) {
    require_square_match(a.m.n, h.m.n, "similarity");
    return {right_divide(matmul(a.m, h.m), a.m, "similarity")};
}

LinearOp similarity(const AntilinearOp& a, const LinearOp& h) {
    require_square_match(a.m.n, h.m.n, "similarity");
    // a H a^-1 = M conj(H) M^-1 for antilinear a with matrix M.
    return {right_divide(matmul(a.m, conjugated(h.m)), a.m, "similarity")};
}

namespace {
HermiticityCheck hermiticity(const ComplexMatrix& m, const ComplexMatrix& madj, double tol) {
    if (tol < 0.0) throw Error("is_hermitian: tolerance must be >= 0");
    const double scale = std::max(1.0, max_abs_norm(m));
    const double resid = max_abs_diff_norm(m, madj) / scale;
    return {resid <= tol, resid};
}
}  // namespace

HermiticityCheck is_hermitian(const LinearOp& a, double tol) {
    return hermiticity(a.m, conj_transposed(a.m), tol);
}

HermiticityCheck is_hermitian(const AntilinearOp& a, double tol) {
    return hermiticity(a.m, transposed(a.m), tol);
}

std::vector<cplx> apply(const LinearOp& a, std::span<const cplx> psi) {
    return matvec(a.m, psi);
}

std::vector<cplx> apply(const AntilinearOp& a, std::span<const cplx> psi) {
    std::vector<cplx> conj_psi(psi.begin(), psi.end());
    for (auto& z : conj_psi) z = std::conj(z);
    return matvec(a.m, conj_psi);
}

}  // namespace ptlab
