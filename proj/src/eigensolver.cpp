#include "ptlab/eigensolver.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>
#include <string>

#include "ptlab/kernels.hpp"

// Dense eigensolver with two routes, both deterministic.
//
// Generic route: complex Householder reduction to Hessenberg form, then
// implicit single-shift QR (Wilkinson shifts, exceptional shifts on
// stalls) with Schur-vector accumulation, then triangular
// back-substitution for eigenvectors. EISPACK COMQR2 / LAPACK zhseqr
// lineage.
//
// Structured route: when the input satisfies R conj(H) R = H (the
// reflection-conjugation symmetry every PT-symmetric discretization here
// has), H commutes with an antiunitary involution and is unitarily
// similar to a real matrix in the paired basis
//   u_p = (e_p + e_{n-1-p})/sqrt2,  w_p = i (e_p - e_{n-1-p})/sqrt2.
// Real Hessenberg + Francis double-shift QR then delivers eigenvalues in
// exactly conjugate pairs (2x2 Schur blocks), so the computed spectrum is
// conjugate-closed bitwise -- a generic complex QR run loses that
// structure at the eigenvalue-condition level, which for near-defective
// PT spectra can be many orders above the pairing tolerance.

namespace ptlab {

namespace {

inline double abs1(cplx z) { return std::abs(z.real()) + std::abs(z.imag()); }

double norm_inf(const ComplexMatrix& m) {
    double worst = 0.0;
    for (int i = 0; i < m.n; ++i) {
        double row = 0.0;
        for (int j = 0; j < m.n; ++j) row += std::abs(m.at(i, j));
        if (row > worst) worst = row;
    }
    return worst;
}

// ---- complex route ---------------------------------------------------------

void hessenberg_reduce(ComplexMatrix& a, ComplexMatrix& q) {
    const int n = a.n;
    const bool par = kernels::parallel_enabled();
    std::vector<cplx> v(n);
    for (int k = 0; k + 2 < n; ++k) {
        double tail = 0.0;
        for (int i = k + 2; i < n; ++i) tail += std::norm(a.at(i, k));
        if (tail == 0.0) continue;

        const cplx alpha = a.at(k + 1, k);
        const double sigma = std::sqrt(std::norm(alpha) + tail);
        const double aa = std::abs(alpha);
        const cplx phase = aa == 0.0 ? cplx(1.0, 0.0) : alpha / aa;
        const cplx mu = -phase * sigma;

        const int m = n - k - 1;
        v[0] = alpha - mu;
        for (int i = 1; i < m; ++i) v[i] = a.at(k + 1 + i, k);
        double vnorm2 = 0.0;
        for (int i = 0; i < m; ++i) vnorm2 += std::norm(v[i]);
        const double beta = 2.0 / vnorm2;

#pragma omp parallel for schedule(static) if (par && n > 128)
        for (int j = k; j < n; ++j) {
            cplx w(0.0, 0.0);
            for (int i = 0; i < m; ++i) w += std::conj(v[i]) * a.at(k + 1 + i, j);
            w *= beta;
            for (int i = 0; i < m; ++i) a.at(k + 1 + i, j) -= v[i] * w;
        }
#pragma omp parallel for schedule(static) if (par && n > 128)
        for (int i = 0; i < n; ++i) {
            cplx w(0.0, 0.0);
            for (int j = 0; j < m; ++j) w += a.at(i, k + 1 + j) * v[j];
            w *= beta;
            for (int j = 0; j < m; ++j) a.at(i, k + 1 + j) -= w * std::conj(v[j]);
        }
#pragma omp parallel for schedule(static) if (par && n > 128)
        for (int i = 0; i < n; ++i) {
            cplx w(0.0, 0.0);
            for (int j = 0; j < m; ++j) w += q.at(i, k + 1 + j) * v[j];
            w *= beta;
            for (int j = 0; j < m; ++j) q.at(i, k + 1 + j) -= w * std::conj(v[j]);
        }

        a.at(k + 1, k) = mu;
        for (int i = k + 2; i < n; ++i) a.at(i, k) = cplx(0.0, 0.0);
    }
}

struct Rot {
    double c;
    cplx s;
};

// Plane rotation [[c, s], [-conj(s), c]] mapping (f, g) to (r, 0).
Rot make_rot(cplx f, cplx g) {
    const double ag = std::abs(g);
    if (ag == 0.0) return {1.0, cplx(0.0, 0.0)};
    const double af = std::abs(f);
    if (af == 0.0) return {0.0, std::conj(g) / ag};
    const double r = std::hypot(af, ag);
    return {af / r, (f / af) * (std::conj(g) / r)};
}

// Eigenvalue of [[a, b], [c, d]] closest to d, via the cancellation-free
// small-root form: the roots of x^2 - 2px - bc (x = mu - d, p = (a-d)/2)
// are p +/- sqrt(p^2 + bc), and the one nearer zero is -bc / (larger).
cplx wilkinson_shift(cplx a, cplx b, cplx c, cplx d) {
    const cplx p = 0.5 * (a - d);
    const cplx disc = std::sqrt(p * p + b * c);
    const cplx den1 = p + disc;
    const cplx den2 = p - disc;
    const cplx den = abs1(den1) >= abs1(den2) ? den1 : den2;
    if (abs1(den) == 0.0) return d;  // both roots coincide with d
    return d - (b * c) / den;
}

void schur_qr(ComplexMatrix& t, ComplexMatrix& q) {
    const int n = t.n;
    const double eps = DBL_EPSILON;
    const double hnorm = max_abs_norm(t);

    int hi = n - 1;
    int sweeps_here = 0;
    long total = 0;
    const long budget = 40L * std::max(n, 1);

    while (hi >= 0) {
        int lo = hi;
        while (lo > 0) {
            const double sub = abs1(t.at(lo, lo - 1));
            double tst = abs1(t.at(lo - 1, lo - 1)) + abs1(t.at(lo, lo));
            if (tst == 0.0) tst = hnorm;
            if (sub <= eps * tst) {
                t.at(lo, lo - 1) = cplx(0.0, 0.0);
                break;
            }
            --lo;
        }
        if (lo == hi) {
            --hi;
            sweeps_here = 0;
            continue;
        }

        if (++sweeps_here > 40 || ++total > budget) {
            std::vector<int> failed(hi - lo + 1);
            std::iota(failed.begin(), failed.end(), lo);
            throw ConvergenceError("QR iteration did not converge for rows " +
                                       std::to_string(lo) + ".." + std::to_string(hi),
                                   std::move(failed));
        }

        cplx shift;
        if (sweeps_here % 10 == 0) {
            shift = t.at(hi, hi) + 0.75 * std::abs(t.at(hi, hi - 1));
        } else {
            shift = wilkinson_shift(t.at(hi - 1, hi - 1), t.at(hi - 1, hi), t.at(hi, hi - 1),
                                    t.at(hi, hi));
        }

        cplx x = t.at(lo, lo) - shift;
        cplx y = t.at(lo + 1, lo);
        for (int k = lo; k < hi; ++k) {
            const Rot g = make_rot(x, y);
            if (k > lo) {
                t.at(k, k - 1) = g.c * x + g.s * y;
                t.at(k + 1, k - 1) = cplx(0.0, 0.0);
            }
            for (int j = k; j < n; ++j) {
                const cplx fp = t.at(k, j);
                const cplx fq = t.at(k + 1, j);
                t.at(k, j) = g.c * fp + g.s * fq;
                t.at(k + 1, j) = g.c * fq - std::conj(g.s) * fp;
            }
            const int imax = std::min(k + 2, hi);
            for (int i = 0; i <= imax; ++i) {
                const cplx fp = t.at(i, k);
                const cplx fq = t.at(i, k + 1);
                t.at(i, k) = g.c * fp + std::conj(g.s) * fq;
                t.at(i, k + 1) = g.c * fq - g.s * fp;
            }
            for (int i = 0; i < n; ++i) {
                const cplx fp = q.at(i, k);
                const cplx fq = q.at(i, k + 1);
                q.at(i, k) = g.c * fp + std::conj(g.s) * fq;
                q.at(i, k + 1) = g.c * fq - g.s * fp;
            }
            if (k < hi - 1) {
                x = t.at(k + 1, k);
                y = t.at(k + 2, k);
            }
        }
    }
}

// ---- real route (reflection-conjugation symmetric input) -------------------

struct RealMatrix {
    int n = 0;
    std::vector<double> a;
    explicit RealMatrix(int n) : n(n), a(std::size_t(n) * n, 0.0) {}
    double& at(int i, int j) { return a[std::size_t(i) * n + j]; }
    double at(int i, int j) const { return a[std::size_t(i) * n + j]; }
};

void real_hessenberg(RealMatrix& a, RealMatrix& q) {
    const int n = a.n;
    std::vector<double> v(n);
    for (int k = 0; k + 2 < n; ++k) {
        double tail = 0.0;
        for (int i = k + 2; i < n; ++i) tail += a.at(i, k) * a.at(i, k);
        if (tail == 0.0) continue;

        const double alpha = a.at(k + 1, k);
        const double sigma = std::sqrt(alpha * alpha + tail);
        const double mu = alpha >= 0.0 ? -sigma : sigma;

        const int m = n - k - 1;
        v[0] = alpha - mu;
        for (int i = 1; i < m; ++i) v[i] = a.at(k + 1 + i, k);
        double vnorm2 = 0.0;
        for (int i = 0; i < m; ++i) vnorm2 += v[i] * v[i];
        const double beta = 2.0 / vnorm2;

        for (int j = k; j < n; ++j) {
            double w = 0.0;
            for (int i = 0; i < m; ++i) w += v[i] * a.at(k + 1 + i, j);
            w *= beta;
            for (int i = 0; i < m; ++i) a.at(k + 1 + i, j) -= v[i] * w;
        }
        for (int i = 0; i < n; ++i) {
            double w = 0.0;
            for (int j = 0; j < m; ++j) w += a.at(i, k + 1 + j) * v[j];
            w *= beta;
            for (int j = 0; j < m; ++j) a.at(i, k + 1 + j) -= w * v[j];
        }
        for (int i = 0; i < n; ++i) {
            double w = 0.0;
            for (int j = 0; j < m; ++j) w += q.at(i, k + 1 + j) * v[j];
            w *= beta;
            for (int j = 0; j < m; ++j) q.at(i, k + 1 + j) -= w * v[j];
        }

        a.at(k + 1, k) = mu;
        for (int i = k + 2; i < n; ++i) a.at(i, k) = 0.0;
    }
}

// Francis double-shift QR to real quasi-triangular Schur form; 2x2 blocks
// with complex eigenvalue pairs are left on the diagonal.
void real_schur(RealMatrix& t, RealMatrix& z) {
    const int n = t.n;
    const double eps = DBL_EPSILON;
    double tnorm = 0.0;
    for (double v : t.a) tnorm = std::max(tnorm, std::abs(v));

    int hi = n - 1;
    int its = 0;
    long total = 0;
    const long budget = 40L * std::max(n, 1);

    while (hi >= 0) {
        int lo = hi;
        while (lo > 0) {
            double tst = std::abs(t.at(lo - 1, lo - 1)) + std::abs(t.at(lo, lo));
            if (tst == 0.0) tst = tnorm;
            if (std::abs(t.at(lo, lo - 1)) <= eps * tst) {
                t.at(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            --hi;
            its = 0;
            continue;
        }
        if (lo == hi - 1) {  // 2x2 block deflates as-is (standardized later)
            hi -= 2;
            its = 0;
            continue;
        }

        if (++its > 40 || ++total > budget) {
            std::vector<int> failed(hi - lo + 1);
            std::iota(failed.begin(), failed.end(), lo);
            throw ConvergenceError("real QR iteration did not converge for rows " +
                                       std::to_string(lo) + ".." + std::to_string(hi),
                                   std::move(failed));
        }

        double shift_sum, shift_prod;
        if (its % 12 == 0) {
            // ad hoc exceptional shifts against symmetry-induced cycles
            const double ss = std::abs(t.at(hi, hi - 1)) + std::abs(t.at(hi - 1, hi - 2));
            const double aa = 0.75 * ss + t.at(hi, hi);
            shift_sum = aa + aa;
            shift_prod = aa * aa + 0.4375 * ss * ss;
        } else {
            shift_sum = t.at(hi - 1, hi - 1) + t.at(hi, hi);
            shift_prod = t.at(hi - 1, hi - 1) * t.at(hi, hi) -
                         t.at(hi - 1, hi) * t.at(hi, hi - 1);
        }

        // first column of (T - s1)(T - s2) e1 within the window
        double x = t.at(lo, lo) * t.at(lo, lo) + t.at(lo, lo + 1) * t.at(lo + 1, lo) -
                   shift_sum * t.at(lo, lo) + shift_prod;
        double y = t.at(lo + 1, lo) * (t.at(lo, lo) + t.at(lo + 1, lo + 1) - shift_sum);
        double w = t.at(lo + 1, lo) * t.at(lo + 2, lo + 1);
        {
            const double s = std::abs(x) + std::abs(y) + std::abs(w);
            if (s != 0.0) {
                x /= s;
                y /= s;
                w /= s;
            }
        }

        for (int k = lo; k <= hi - 2; ++k) {
            const double sigma = std::sqrt(x * x + y * y + w * w);
            if (sigma != 0.0) {
                const double mu = x >= 0.0 ? -sigma : sigma;
                const double v0 = x - mu, v1 = y, v2 = w;
                const double vnorm2 = v0 * v0 + v1 * v1 + v2 * v2;
                const double beta = vnorm2 == 0.0 ? 0.0 : 2.0 / vnorm2;

                const int jstart = k == lo ? lo : k - 1;
                for (int j = jstart; j < n; ++j) {
                    double s = v0 * t.at(k, j) + v1 * t.at(k + 1, j) + v2 * t.at(k + 2, j);
                    s *= beta;
                    t.at(k, j) -= v0 * s;
                    t.at(k + 1, j) -= v1 * s;
                    t.at(k + 2, j) -= v2 * s;
                }
                if (k > lo) {
                    t.at(k + 1, k - 1) = 0.0;
                    t.at(k + 2, k - 1) = 0.0;
                }
                const int imax = std::min(k + 3, hi);
                for (int i = 0; i <= imax; ++i) {
                    double s = t.at(i, k) * v0 + t.at(i, k + 1) * v1 + t.at(i, k + 2) * v2;
                    s *= beta;
                    t.at(i, k) -= s * v0;
                    t.at(i, k + 1) -= s * v1;
                    t.at(i, k + 2) -= s * v2;
                }
                for (int i = 0; i < n; ++i) {
                    double s = z.at(i, k) * v0 + z.at(i, k + 1) * v1 + z.at(i, k + 2) * v2;
                    s *= beta;
                    z.at(i, k) -= s * v0;
                    z.at(i, k + 1) -= s * v1;
                    z.at(i, k + 2) -= s * v2;
                }
            }
            x = t.at(k + 1, k);
            y = t.at(k + 2, k);
            w = k + 3 <= hi ? t.at(k + 3, k) : 0.0;
        }

        // final 2-row rotation clears the remaining bulge entry
        const double r = std::hypot(x, y);
        if (r != 0.0) {
            const double cth = x / r, sth = y / r;
            for (int j = hi - 2; j < n; ++j) {
                const double f = t.at(hi - 1, j), g = t.at(hi, j);
                t.at(hi - 1, j) = cth * f + sth * g;
                t.at(hi, j) = cth * g - sth * f;
            }
            for (int i = 0; i <= hi; ++i) {
                const double f = t.at(i, hi - 1), g = t.at(i, hi);
                t.at(i, hi - 1) = cth * f + sth * g;
                t.at(i, hi) = cth * g - sth * f;
            }
            for (int i = 0; i < n; ++i) {
                const double f = z.at(i, hi - 1), g = z.at(i, hi);
                z.at(i, hi - 1) = cth * f + sth * g;
                z.at(i, hi) = cth * g - sth * f;
            }
        }
        t.at(hi, hi - 2) = 0.0;
    }
}

// Turns the real quasi-triangular Schur form into a complex triangular one.
// Each 2x2 block is diagonalized by a 2x2 unitary; complex pairs get
// bitwise-mirrored conjugate eigenvalues, which keeps the computed
// spectrum exactly conjugation-closed.
void quasi_to_triangular(const RealMatrix& tr, const RealMatrix& zr, ComplexMatrix& tc,
                         ComplexMatrix& qc) {
    const int n = tr.n;
    tc = ComplexMatrix(n);
    qc = ComplexMatrix(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            tc.at(i, j) = cplx(tr.at(i, j), 0.0);
            qc.at(i, j) = cplx(zr.at(i, j), 0.0);
        }

    int k = 0;
    while (k < n) {
        if (k == n - 1 || tc.at(k + 1, k) == cplx(0.0, 0.0)) {
            ++k;
            continue;
        }
        const double a = tr.at(k, k), b = tr.at(k, k + 1);
        const double c = tr.at(k + 1, k), d = tr.at(k + 1, k + 1);
        const double p = 0.5 * (a - d);
        const double disc2 = p * p + b * c;

        cplx lam1, lam2;
        if (disc2 >= 0.0) {
            const double sq = std::sqrt(disc2);
            const double den = p >= 0.0 ? p + sq : p - sq;
            const double x_small = den == 0.0 ? 0.0 : -(b * c) / den;
            lam1 = cplx(d + x_small, 0.0);
            lam2 = cplx(a + d - (d + x_small), 0.0);
        } else {
            const double m = 0.5 * (a + d);
            const double qv = std::sqrt(-disc2);
            lam1 = cplx(m, qv);
            lam2 = cplx(m, -qv);  // exact bitwise mirror
        }

        // unit eigenvector of the block for lam1
        cplx v0 = cplx(b, 0.0), v1 = lam1 - cplx(a, 0.0);
        const cplx w0 = lam1 - cplx(d, 0.0), w1 = cplx(c, 0.0);
        if (abs1(w0) + abs1(w1) > abs1(v0) + abs1(v1)) {
            v0 = w0;
            v1 = w1;
        }
        const double vn = std::sqrt(std::norm(v0) + std::norm(v1));
        v0 /= vn;
        v1 /= vn;

        // unitary Zb = [[v0, -conj(v1)], [v1, conj(v0)]]; T <- Zb^H T Zb
        for (int i = 0; i <= k + 1; ++i) {
            const cplx f = tc.at(i, k), g = tc.at(i, k + 1);
            tc.at(i, k) = f * v0 + g * v1;
            tc.at(i, k + 1) = -f * std::conj(v1) + g * std::conj(v0);
        }
        for (int j = k; j < n; ++j) {
            const cplx f = tc.at(k, j), g = tc.at(k + 1, j);
            tc.at(k, j) = std::conj(v0) * f + std::conj(v1) * g;
            tc.at(k + 1, j) = -v1 * f + v0 * g;
        }
        for (int i = 0; i < n; ++i) {
            const cplx f = qc.at(i, k), g = qc.at(i, k + 1);
            qc.at(i, k) = f * v0 + g * v1;
            qc.at(i, k + 1) = -f * std::conj(v1) + g * std::conj(v0);
        }
        tc.at(k + 1, k) = cplx(0.0, 0.0);
        tc.at(k, k) = lam1;
        tc.at(k + 1, k + 1) = lam2;
        k += 2;
    }
}

// max_abs(R conj(H) R - H) with R the index reflection.
double reflection_conjugation_defect(const ComplexMatrix& h) {
    const int n = h.n;
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double v = std::abs(std::conj(h.at(n - 1 - i, n - 1 - j)) - h.at(i, j));
            if (v > worst) worst = v;
        }
    return worst;
}

// Unitary change to the J-real paired basis (J = reflection + conjugation).
ComplexMatrix paired_basis(int n) {
    const int c = n / 2;
    const bool odd = n % 2 == 1;
    const double s = 1.0 / std::sqrt(2.0);
    ComplexMatrix u(n);
    for (int p = 0; p < c; ++p) {
        u.at(p, p) = cplx(s, 0.0);
        u.at(n - 1 - p, p) = cplx(s, 0.0);
        const int col = c + (odd ? 1 : 0) + p;
        u.at(p, col) = cplx(0.0, s);
        u.at(n - 1 - p, col) = cplx(0.0, -s);
    }
    if (odd) u.at(c, c) = cplx(1.0, 0.0);
    return u;
}

// ---- shared packaging -------------------------------------------------------

ComplexMatrix triangular_eigenvectors(const ComplexMatrix& t) {
    const int n = t.n;
    const double tnorm = max_abs_norm(t);
    const double smin = std::max(DBL_EPSILON * tnorm, 1e-300);
    ComplexMatrix y(n);
    std::vector<cplx> col(n);
    for (int k = 0; k < n; ++k) {
        const cplx lambda = t.at(k, k);
        std::fill(col.begin(), col.begin() + k + 1, cplx(0.0, 0.0));
        col[k] = cplx(1.0, 0.0);
        for (int j = k - 1; j >= 0; --j) {
            cplx s(0.0, 0.0);
            for (int l = j + 1; l <= k; ++l) s += t.at(j, l) * col[l];
            cplx d = t.at(j, j) - lambda;
            if (abs1(d) < smin) d = cplx(smin, 0.0);
            col[j] = -s / d;
            const double mag = abs1(col[j]);
            if (mag > 1e200) {
                const double inv = 1.0 / mag;
                for (int l = j; l <= k; ++l) col[l] *= inv;
            }
        }
        for (int i = 0; i <= k; ++i) y.at(i, k) = col[i];
    }
    return y;
}

Spectrum package_spectrum(const ComplexMatrix& h, const ComplexMatrix& t, const ComplexMatrix& q,
                          double tol) {
    const int n = h.n;
    ComplexMatrix y = triangular_eigenvectors(t);
    ComplexMatrix v(n);
    kernels::matmul(q.a.data(), y.a.data(), v.a.data(), n);

    for (int k = 0; k < n; ++k) {
        double nrm2 = 0.0;
        for (int i = 0; i < n; ++i) nrm2 += std::norm(v.at(i, k));
        const double inv = 1.0 / std::sqrt(nrm2);
        for (int i = 0; i < n; ++i) v.at(i, k) *= inv;
    }

    ComplexMatrix w(n);
    kernels::matmul(h.a.data(), v.a.data(), w.a.data(), n);

    Spectrum s;
    s.matrix_norm = max_abs_norm(h);
    s.pairs.resize(n);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const cplx la = t.at(a, a), lb = t.at(b, b);
        if (la.real() != lb.real()) return la.real() < lb.real();
        if (la.imag() != lb.imag()) return la.imag() < lb.imag();
        return a < b;
    });

    std::vector<int> bad;
    const double bound = tol * std::max(1.0, s.matrix_norm);
    for (int out = 0; out < n; ++out) {
        const int k = order[out];
        EigenPair& p = s.pairs[out];
        p.value = t.at(k, k);
        p.vector.resize(n);
        double r2 = 0.0;
        for (int i = 0; i < n; ++i) {
            p.vector[i] = v.at(i, k);
            r2 += std::norm(w.at(i, k) - p.value * v.at(i, k));
        }
        p.residual = std::sqrt(r2);
        if (!(p.residual <= bound)) bad.push_back(out);
    }
    if (!bad.empty())
        throw ConvergenceError(
            "eigendecompose: " + std::to_string(bad.size()) +
                " eigenpair residual(s) exceed tol * max(1, ||H||); first offending index " +
                std::to_string(bad.front()),
            std::move(bad));

    ComplexMatrix vc = v;
    std::vector<int> piv(n);
    if (!kernels::lu_factor(vc.a.data(), piv.data(), n)) {
        s.basis_condition = INFINITY;
        s.basis_ill_conditioned = true;
    } else {
        ComplexMatrix inv = ComplexMatrix::identity(n);
        kernels::lu_solve_matrix(vc.a.data(), piv.data(), inv.a.data(), n);
        s.basis_condition = norm_inf(v) * norm_inf(inv);
        s.basis_ill_conditioned = !(s.basis_condition <= 1e12);
    }
    return s;
}

}  // namespace

Spectrum eigendecompose(const ComplexMatrix& h, double tol) {
    const int n = h.n;
    if (n < 1) throw Error("eigendecompose: empty matrix");
    if (n > kMaxEigenDim)
        throw Error("eigendecompose: dimension " + std::to_string(n) + " exceeds cap " +
                    std::to_string(kMaxEigenDim));
    if (!all_finite(h)) throw NumericError("eigendecompose: non-finite entries");

    const double scale = std::max(1.0, max_abs_norm(h));
    if (reflection_conjugation_defect(h) <= 1e-13 * scale) {
        // structured route
        const ComplexMatrix u = paired_basis(n);
        const ComplexMatrix hu = matmul(h, u);
        const ComplexMatrix hr_cplx = matmul(conj_transposed(u), hu);
        RealMatrix hr(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) hr.at(i, j) = hr_cplx.at(i, j).real();

        RealMatrix zr(n);
        for (int i = 0; i < n; ++i) zr.at(i, i) = 1.0;
        real_hessenberg(hr, zr);
        real_schur(hr, zr);

        ComplexMatrix tc, qc;
        quasi_to_triangular(hr, zr, tc, qc);
        const ComplexMatrix q_total = matmul(u, qc);
        return package_spectrum(h, tc, q_total, tol);
    }

    ComplexMatrix t = h;
    ComplexMatrix q = ComplexMatrix::identity(n);
    hessenberg_reduce(t, q);
    schur_qr(t, q);
    return package_spectrum(h, t, q, tol);
}

PairingReport conjugate_pair_matching(const Spectrum& s, double tol) {
    const int n = static_cast<int>(s.pairs.size());
    PairingReport rep;
    rep.tolerance_abs = tol * std::max(1.0, s.matrix_norm);
    std::vector<bool> taken(n, false);
    for (int i = 0; i < n; ++i) {
        if (taken[i]) continue;
        const cplx li = s.pairs[i].value;
        if (std::abs(li.imag()) <= rep.tolerance_abs) {
            rep.real_indices.push_back(i);
            taken[i] = true;
            continue;
        }
        int best = -1;
        double best_dist = INFINITY;
        for (int j = 0; j < n; ++j) {
            if (j == i || taken[j]) continue;
            const double d = std::abs(s.pairs[j].value - std::conj(li));
            if (d < best_dist) {
                best_dist = d;
                best = j;
            }
        }
        if (best >= 0 && best_dist <= rep.tolerance_abs) {
            rep.conjugate_pairs.emplace_back(i, best);
            taken[i] = taken[best] = true;
        } else {
            rep.unmatched.push_back(i);
            taken[i] = true;
        }
    }
    return rep;
}

}  // namespace ptlab
