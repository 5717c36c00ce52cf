#pragma once

// Dense complex linear algebra kit: matrices, Kronecker products, Hermitian
// eigendecomposition, general real eigenvalues, and real polynomial root
// finding via companion matrices.  Self-contained on purpose; sized for the
// small dense operators this library manipulates (dimension up to a few
// thousand).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bellviol {

using cdouble = std::complex<double>;

// ---------------------------------------------------------------------------
// ComplexMatrix: dense row-major complex matrix.
// ---------------------------------------------------------------------------

struct ComplexMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<cdouble> entries;  // row-major, entries.size() == rows * cols

    ComplexMatrix() = default;
    ComplexMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c) {}

    static ComplexMatrix identity(std::size_t d) {
        ComplexMatrix m(d, d);
        for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
        return m;
    }

    cdouble& operator()(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
    const cdouble& operator()(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }

    bool square() const { return rows == cols; }

    double max_abs() const {
        double m = 0.0;
        for (const auto& z : entries) m = std::max(m, std::abs(z));
        return m;
    }

    // Largest deviation from Hermitian symmetry, max_{ij} |m_ij - conj(m_ji)|.
    double hermitian_defect() const {
        double d = 0.0;
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = i; j < cols; ++j)
                d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return d;
    }

    bool is_hermitian(double tol = 1e-12) const {
        return square() && hermitian_defect() <= tol * std::max(1.0, max_abs());
    }

    cdouble trace() const {
        cdouble t = 0.0;
        for (std::size_t i = 0; i < std::min(rows, cols); ++i) t += (*this)(i, i);
        return t;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix m(cols, rows);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }
};

inline ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw std::invalid_argument("matrix add: shape mismatch");
    ComplexMatrix c(a.rows, a.cols);
    for (std::size_t k = 0; k < c.entries.size(); ++k) c.entries[k] = a.entries[k] + b.entries[k];
    return c;
}

inline ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw std::invalid_argument("matrix sub: shape mismatch");
    ComplexMatrix c(a.rows, a.cols);
    for (std::size_t k = 0; k < c.entries.size(); ++k) c.entries[k] = a.entries[k] - b.entries[k];
    return c;
}

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("matrix mul: shape mismatch");
    ComplexMatrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            const cdouble aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

inline ComplexMatrix operator*(cdouble s, const ComplexMatrix& a) {
    ComplexMatrix c(a.rows, a.cols);
    for (std::size_t k = 0; k < c.entries.size(); ++k) c.entries[k] = s * a.entries[k];
    return c;
}

inline std::vector<cdouble> operator*(const ComplexMatrix& a, const std::vector<cdouble>& v) {
    if (a.cols != v.size()) throw std::invalid_argument("matrix-vector mul: shape mismatch");
    std::vector<cdouble> out(a.rows, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) {
        cdouble s = 0.0;
        for (std::size_t j = 0; j < a.cols; ++j) s += a(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

// Kronecker product; the left factor supplies the high-order index bits.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix c(a.rows * b.rows, a.cols * b.cols);
    for (std::size_t ia = 0; ia < a.rows; ++ia)
        for (std::size_t ja = 0; ja < a.cols; ++ja) {
            const cdouble f = a(ia, ja);
            if (f == 0.0) continue;
            for (std::size_t ib = 0; ib < b.rows; ++ib)
                for (std::size_t jb = 0; jb < b.cols; ++jb)
                    c(ia * b.rows + ib, ja * b.cols + jb) = f * b(ib, jb);
        }
    return c;
}

// Conjugate-linear in the first argument.
inline cdouble vec_dot(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vec_dot: size mismatch");
    cdouble s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

inline double vec_norm(const std::vector<cdouble>& a) {
    double s = 0.0;
    for (const auto& z : a) s += std::norm(z);
    return std::sqrt(s);
}

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::string(buf);
}

// ---------------------------------------------------------------------------
// Real symmetric path: Householder tridiagonalization + implicit QL.
// ---------------------------------------------------------------------------

// Reduces the symmetric matrix `a` (row-major, destroyed) to tridiagonal form
// T = Q^T A Q.  On return diag/sub hold T; if q is non-null it receives the
// accumulated orthogonal Q (columns = the tridiagonal basis).
inline void householder_tridiag(std::size_t n, std::vector<double>& a,
                                std::vector<double>& diag, std::vector<double>& sub,
                                std::vector<double>* q) {
    diag.assign(n, 0.0);
    sub.assign(n > 1 ? n - 1 : 0, 0.0);
    if (q) {
        q->assign(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) (*q)[i * n + i] = 1.0;
    }
    std::vector<double> v(n, 0.0), p(n, 0.0), w(n, 0.0);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double scale = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) scale += std::abs(a[i * n + k]);
        if (scale == 0.0) continue;  // column already in tridiagonal form
        double norm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            const double t = a[i * n + k];
            norm2 += t * t;
        }
        const double nrm = std::sqrt(norm2);
        const double alpha = (a[(k + 1) * n + k] > 0.0) ? -nrm : nrm;
        for (std::size_t i = k + 1; i < n; ++i) v[i] = a[i * n + k];
        v[k + 1] -= alpha;
        double vn2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vn2 += v[i] * v[i];
        const double vn = std::sqrt(vn2);
        if (vn == 0.0) continue;
        for (std::size_t i = k + 1; i < n; ++i) v[i] /= vn;
        // p = 2 A v on the trailing block; w = p - (v.p) v; A -= v w^T + w v^T
        for (std::size_t i = k + 1; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) s += a[i * n + j] * v[j];
            p[i] = 2.0 * s;
        }
        double kc = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) kc += v[i] * p[i];
        for (std::size_t i = k + 1; i < n; ++i) w[i] = p[i] - kc * v[i];
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a[i * n + j] -= v[i] * w[j] + w[i] * v[j];
        a[(k + 1) * n + k] = alpha;
        a[k * n + (k + 1)] = alpha;
        for (std::size_t i = k + 2; i < n; ++i) {
            a[i * n + k] = 0.0;
            a[k * n + i] = 0.0;
        }
        if (q) {
            for (std::size_t r = 0; r < n; ++r) {
                double dot = 0.0;
                for (std::size_t i = k + 1; i < n; ++i) dot += (*q)[r * n + i] * v[i];
                dot *= 2.0;
                for (std::size_t i = k + 1; i < n; ++i) (*q)[r * n + i] -= dot * v[i];
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) diag[i] = a[i * n + i];
    for (std::size_t i = 0; i + 1 < n; ++i) sub[i] = a[(i + 1) * n + i];
}

// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix.
// d: diagonal (becomes the eigenvalues); e: couplings, e[i] links d[i], d[i+1]
// (e must have length n, e[n-1] ignored).  If z is non-null (n x n row-major),
// the rotations are accumulated into its columns.
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, std::size_t n,
                           double* z) {
    if (n <= 1) return;
    e[n - 1] = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    for (int l = 0; l < static_cast<int>(n); ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < static_cast<int>(n) - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 60) throw std::runtime_error("tridiagonal_ql: too many iterations");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, pp = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= pp;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - pp;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    pp = s * r;
                    d[i + 1] = g + pp;
                    g = c * r - b;
                    if (z) {
                        for (std::size_t k = 0; k < n; ++k) {
                            f = z[k * n + i + 1];
                            z[k * n + i + 1] = s * z[k * n + i] + c * f;
                            z[k * n + i] = c * z[k * n + i] - s * f;
                        }
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= pp;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

// Eigenvalues (and optionally eigenvectors as columns of q) of a real
// symmetric matrix given in row-major storage.  Ascending order is NOT
// applied here; callers sort.
inline void real_symmetric_eigen(std::size_t n, std::vector<double> a,
                                 std::vector<double>& values, std::vector<double>* q) {
    std::vector<double> diag, sub;
    householder_tridiag(n, a, diag, sub, q);
    std::vector<double> e(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) e[i] = sub[i];
    tridiagonal_ql(diag, e, n, q ? q->data() : nullptr);
    values = std::move(diag);
}

// ---------------------------------------------------------------------------
// Complex Hermitian path: cyclic Jacobi with phased plane rotations.
// ---------------------------------------------------------------------------

inline double offdiag_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// Diagonalizes the Hermitian matrix `a` in place; accumulates the unitary into
// v when non-null.  The (p,q) rotation first removes the phase of a_pq, then
// applies the classical symmetric Jacobi rotation.
inline void hermitian_jacobi(ComplexMatrix& a, ComplexMatrix* v) {
    const std::size_t n = a.rows;
    if (v) *v = ComplexMatrix::identity(n);
    const double scale = std::max(1.0, a.max_abs());
    for (int sweep = 0; sweep < 100; ++sweep) {
        if (offdiag_norm(a) <= 1e-14 * scale * n) return;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cdouble apq = a(p, q);
                const double beta = std::abs(apq);
                if (beta <= 1e-300) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                const cdouble phase = apq / beta;  // e^{i phi}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * beta);
                // small-magnitude root of t^2 - 2 tau t - 1 = 0
                const double sgn = (tau >= 0.0) ? 1.0 : -1.0;
                const double t = -sgn / (std::abs(tau) + std::hypot(tau, 1.0));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // columns: col_p' = c col_p + s conj(phase) col_q
                //          col_q' = -s phase col_p + c col_q
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const cdouble akp = a(k, p);
                    const cdouble akq = a(k, q);
                    const cdouble nkp = c * akp + s * std::conj(phase) * akq;
                    const cdouble nkq = -s * phase * akp + c * akq;
                    a(k, p) = nkp;
                    a(p, k) = std::conj(nkp);
                    a(k, q) = nkq;
                    a(q, k) = std::conj(nkq);
                }
                const double npp = c * c * app + s * s * aqq + 2.0 * c * s * beta;
                const double nqq = s * s * app + c * c * aqq - 2.0 * c * s * beta;
                a(p, p) = npp;
                a(q, q) = nqq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                if (v) {
                    for (std::size_t k = 0; k < n; ++k) {
                        const cdouble vkp = (*v)(k, p);
                        const cdouble vkq = (*v)(k, q);
                        (*v)(k, p) = c * vkp + s * std::conj(phase) * vkq;
                        (*v)(k, q) = -s * phase * vkp + c * vkq;
                    }
                }
            }
        }
    }
    throw std::runtime_error("hermitian_jacobi: failed to converge");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition.
// ---------------------------------------------------------------------------

struct EigenDecomposition {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // orthonormal columns, eigenvectors(:,k) <-> eigenvalues[k]
};

namespace detail {

inline void require_hermitian(const ComplexMatrix& h, double tol, const char* who) {
    if (!h.square() || h.rows == 0)
        throw std::invalid_argument(std::string(who) + ": matrix must be square and nonempty");
    const double defect = h.hermitian_defect();
    const double bound = tol * std::max(1.0, h.max_abs());
    if (defect > bound)
        throw std::invalid_argument(std::string(who) + ": matrix is not Hermitian (asymmetry " +
                                    format_double(defect) + " exceeds " + format_double(bound) + ")");
}

inline bool effectively_real(const ComplexMatrix& h) {
    const double bound = 1e-14 * std::max(1.0, h.max_abs());
    for (const auto& z : h.entries)
        if (std::abs(z.imag()) > bound) return false;
    return true;
}

template <typename Swap>
inline void sort_ascending_with(std::vector<double>& values, Swap&& apply_perm) {
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> sorted(values.size());
    for (std::size_t k = 0; k < idx.size(); ++k) sorted[k] = values[idx[k]];
    values = std::move(sorted);
    apply_perm(idx);
}

}  // namespace detail

inline EigenDecomposition hermitian_eigen(const ComplexMatrix& h, double tol = 1e-12) {
    detail::require_hermitian(h, tol, "hermitian_eigen");
    const std::size_t n = h.rows;
    // symmetrized working copy
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));

    EigenDecomposition out;
    if (detail::effectively_real(a)) {
        std::vector<double> ra(n * n);
        for (std::size_t k = 0; k < n * n; ++k) ra[k] = a.entries[k].real();
        std::vector<double> values, q;
        detail::real_symmetric_eigen(n, std::move(ra), values, &q);
        out.eigenvalues = std::move(values);
        out.eigenvectors = ComplexMatrix(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out.eigenvectors(i, j) = q[i * n + j];
    } else {
        ComplexMatrix v;
        detail::hermitian_jacobi(a, &v);
        out.eigenvalues.resize(n);
        for (std::size_t i = 0; i < n; ++i) out.eigenvalues[i] = a(i, i).real();
        out.eigenvectors = std::move(v);
    }
    detail::sort_ascending_with(out.eigenvalues, [&](const std::vector<std::size_t>& idx) {
        ComplexMatrix sorted(n, n);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i) sorted(i, k) = out.eigenvectors(i, idx[k]);
        out.eigenvectors = std::move(sorted);
    });
    return out;
}

// Eigenvalues only (ascending); skips the eigenvector accumulation.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h, double tol = 1e-12) {
    detail::require_hermitian(h, tol, "hermitian_eigenvalues");
    const std::size_t n = h.rows;
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));
    std::vector<double> values;
    if (detail::effectively_real(a)) {
        std::vector<double> ra(n * n);
        for (std::size_t k = 0; k < n * n; ++k) ra[k] = a.entries[k].real();
        detail::real_symmetric_eigen(n, std::move(ra), values, nullptr);
    } else {
        detail::hermitian_jacobi(a, nullptr);
        values.resize(n);
        for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i).real();
    }
    std::sort(values.begin(), values.end());
    return values;
}

// ---------------------------------------------------------------------------
// General real eigenvalues (balanced Hessenberg + Francis double-shift QR).
// Used for the reduced operator blocks, which live in non-orthogonal bases
// and need not be symmetric, and for polynomial companion matrices.
// ---------------------------------------------------------------------------

namespace detail {

inline void balance_real(std::size_t n, std::vector<double>& a) {
    const double radix = 2.0, sqrdx = radix * radix;
    bool done = false;
    while (!done) {
        done = true;
        for (std::size_t i = 0; i < n; ++i) {
            double r = 0.0, c = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) {
                    c += std::abs(a[j * n + i]);
                    r += std::abs(a[i * n + j]);
                }
            if (c != 0.0 && r != 0.0) {
                double g = r / radix, f = 1.0;
                const double s = c + r;
                while (c < g) {
                    f *= radix;
                    c *= sqrdx;
                }
                g = r * radix;
                while (c > g) {
                    f /= radix;
                    c /= sqrdx;
                }
                if ((c + r) / f < 0.95 * s) {
                    done = false;
                    g = 1.0 / f;
                    for (std::size_t j = 0; j < n; ++j) a[i * n + j] *= g;
                    for (std::size_t j = 0; j < n; ++j) a[j * n + i] *= f;
                }
            }
        }
    }
}

// Reduce to upper Hessenberg form by stabilized elimination.
inline void hessenberg_reduce(std::size_t n, std::vector<double>& a) {
    for (std::size_t m = 1; m + 1 < n; ++m) {
        double x = 0.0;
        std::size_t i = m;
        for (std::size_t j = m; j < n; ++j) {
            if (std::abs(a[j * n + (m - 1)]) > std::abs(x)) {
                x = a[j * n + (m - 1)];
                i = j;
            }
        }
        if (i != m) {
            for (std::size_t j = m - 1; j < n; ++j) std::swap(a[i * n + j], a[m * n + j]);
            for (std::size_t j = 0; j < n; ++j) std::swap(a[j * n + i], a[j * n + m]);
        }
        if (x != 0.0) {
            for (std::size_t r = m + 1; r < n; ++r) {
                double y = a[r * n + (m - 1)];
                if (y != 0.0) {
                    y /= x;
                    a[r * n + (m - 1)] = y;
                    for (std::size_t j = m; j < n; ++j) a[r * n + j] -= y * a[m * n + j];
                    for (std::size_t j = 0; j < n; ++j) a[j * n + m] += y * a[j * n + r];
                }
            }
        }
    }
    // clear the stored multipliers; hqr assumes a clean Hessenberg matrix
    for (std::size_t i = 2; i < n; ++i)
        for (std::size_t j = 0; j + 1 < i; ++j) a[i * n + j] = 0.0;
}

// Francis double-shift QR on an upper Hessenberg matrix (destroys a).
inline void hqr_eigenvalues(std::size_t dim, std::vector<double>& a,
                            std::vector<cdouble>& roots) {
    const int n = static_cast<int>(dim);
    auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * dim + j]; };
    roots.clear();
    if (n == 0) return;

    double anorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(at(i, j));
    if (anorm == 0.0) anorm = 1.0;

    int nn = n - 1;
    double t = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    while (nn >= 0) {
        int its = 0;
        int l;
        do {
            for (l = nn; l >= 1; --l) {
                double s = std::abs(at(l - 1, l - 1)) + std::abs(at(l, l));
                if (s == 0.0) s = anorm;
                if (std::abs(at(l, l - 1)) <= eps * s) {
                    at(l, l - 1) = 0.0;
                    break;
                }
            }
            double x = at(nn, nn);
            if (l == nn) {
                roots.emplace_back(x + t, 0.0);
                --nn;
            } else {
                double y = at(nn - 1, nn - 1);
                double w = at(nn, nn - 1) * at(nn - 1, nn);
                if (l == nn - 1) {
                    double p = 0.5 * (y - x);
                    double q = p * p + w;
                    double z = std::sqrt(std::abs(q));
                    x += t;
                    if (q >= 0.0) {
                        z = p + std::copysign(z, p);
                        double r1 = x + z;
                        double r2 = (z != 0.0) ? x - w / z : x + z;
                        roots.emplace_back(r1, 0.0);
                        roots.emplace_back(r2, 0.0);
                    } else {
                        roots.emplace_back(x + p, z);
                        roots.emplace_back(x + p, -z);
                    }
                    nn -= 2;
                } else {
                    if (its == 60) throw std::runtime_error("hqr: too many iterations");
                    if (its != 0 && its % 10 == 0) {  // exceptional shift
                        t += x;
                        for (int i = 0; i <= nn; ++i) at(i, i) -= x;
                        const double s = std::abs(at(nn, nn - 1)) + std::abs(at(nn - 1, nn - 2));
                        y = x = 0.75 * s;
                        w = -0.4375 * s * s;
                    }
                    ++its;
                    int m;
                    double p = 0.0, q = 0.0, r = 0.0;
                    for (m = nn - 2; m >= l; --m) {
                        const double z = at(m, m);
                        const double rr = x - z;
                        const double ss = y - z;
                        p = (rr * ss - w) / at(m + 1, m) + at(m, m + 1);
                        q = at(m + 1, m + 1) - z - rr - ss;
                        r = at(m + 2, m + 1);
                        const double s = std::abs(p) + std::abs(q) + std::abs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if (m == l) break;
                        const double u = std::abs(at(m, m - 1)) * (std::abs(q) + std::abs(r));
                        const double v = std::abs(p) * (std::abs(at(m - 1, m - 1)) + std::abs(z) +
                                                        std::abs(at(m + 1, m + 1)));
                        if (u <= eps * v) break;
                    }
                    for (int i = m + 2; i <= nn; ++i) {
                        at(i, i - 2) = 0.0;
                        if (i != m + 2) at(i, i - 3) = 0.0;
                    }
                    for (int k = m; k <= nn - 1; ++k) {
                        if (k != m) {
                            p = at(k, k - 1);
                            q = at(k + 1, k - 1);
                            r = (k != nn - 1) ? at(k + 2, k - 1) : 0.0;
                            x = std::abs(p) + std::abs(q) + std::abs(r);
                            if (x != 0.0) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        const double s = std::copysign(std::sqrt(p * p + q * q + r * r), p);
                        if (s != 0.0) {
                            if (k == m) {
                                if (l != m) at(k, k - 1) = -at(k, k - 1);
                            } else {
                                at(k, k - 1) = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            const double z = r / s;
                            q /= p;
                            r /= p;
                            for (int j = k; j <= nn; ++j) {
                                double pp = at(k, j) + q * at(k + 1, j);
                                if (k != nn - 1) {
                                    pp += r * at(k + 2, j);
                                    at(k + 2, j) -= pp * z;
                                }
                                at(k + 1, j) -= pp * y;
                                at(k, j) -= pp * x;
                            }
                            const int mmin = (nn < k + 3) ? nn : k + 3;
                            for (int i = l; i <= mmin; ++i) {
                                double pp = x * at(i, k) + y * at(i, k + 1);
                                if (k != nn - 1) {
                                    pp += z * at(i, k + 2);
                                    at(i, k + 2) -= pp * r;
                                }
                                at(i, k + 1) -= pp * q;
                                at(i, k) -= pp;
                            }
                        }
                    }
                }
            }
        } while (l < nn - 1 && nn >= 0);
    }
}

}  // namespace detail

// Eigenvalues of a general real square matrix (input may be stored complex but
// must have negligible imaginary parts).
inline std::vector<cdouble> real_eigenvalues(const ComplexMatrix& m) {
    if (!m.square() || m.rows == 0)
        throw std::invalid_argument("real_eigenvalues: matrix must be square and nonempty");
    const std::size_t n = m.rows;
    const double bound = 1e-12 * std::max(1.0, m.max_abs());
    std::vector<double> a(n * n);
    for (std::size_t k = 0; k < n * n; ++k) {
        if (std::abs(m.entries[k].imag()) > bound)
            throw std::invalid_argument("real_eigenvalues: matrix has non-negligible imaginary parts");
        a[k] = m.entries[k].real();
    }
    detail::balance_real(n, a);
    detail::hessenberg_reduce(n, a);
    std::vector<cdouble> roots;
    detail::hqr_eigenvalues(n, a, roots);
    std::sort(roots.begin(), roots.end(), [](const cdouble& x, const cdouble& y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
    return roots;
}

// ---------------------------------------------------------------------------
// Real polynomials and companion-matrix root finding.
// ---------------------------------------------------------------------------

struct RealPolynomial {
    std::vector<double> coefficients;  // ascending: c0 + c1 x + c2 x^2 + ...

    RealPolynomial() = default;
    explicit RealPolynomial(std::vector<double> c) : coefficients(std::move(c)) { trim(); }

    // Drops trailing coefficients small relative to the largest one.
    void trim() {
        double m = 0.0;
        for (double c : coefficients) m = std::max(m, std::abs(c));
        const double bound = 1e-14 * std::max(1.0, m);
        while (coefficients.size() > 1 && std::abs(coefficients.back()) <= bound)
            coefficients.pop_back();
    }

    int degree() const {
        return coefficients.empty() ? -1 : static_cast<int>(coefficients.size()) - 1;
    }

    double operator()(double x) const {
        double v = 0.0;
        for (std::size_t k = coefficients.size(); k-- > 0;) v = v * x + coefficients[k];
        return v;
    }

    cdouble operator()(cdouble x) const {
        cdouble v = 0.0;
        for (std::size_t k = coefficients.size(); k-- > 0;) v = v * x + coefficients[k];
        return v;
    }

    RealPolynomial derivative() const {
        if (coefficients.size() <= 1) return RealPolynomial({0.0});
        std::vector<double> d(coefficients.size() - 1);
        for (std::size_t k = 1; k < coefficients.size(); ++k)
            d[k - 1] = static_cast<double>(k) * coefficients[k];
        return RealPolynomial(std::move(d));
    }

    double coefficient_scale() const {
        double s = 0.0;
        for (double c : coefficients) s += std::abs(c);
        return s;
    }
};

inline RealPolynomial operator*(const RealPolynomial& a, const RealPolynomial& b) {
    if (a.coefficients.empty() || b.coefficients.empty()) return RealPolynomial({0.0});
    std::vector<double> c(a.coefficients.size() + b.coefficients.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.coefficients.size(); ++i)
        for (std::size_t j = 0; j < b.coefficients.size(); ++j)
            c[i + j] += a.coefficients[i] * b.coefficients[j];
    return RealPolynomial(std::move(c));
}

// All complex roots of p, by eigenvalues of the balanced companion matrix with
// a short complex Newton polish.  Canonical path for every characteristic
// polynomial in the library; closed-form quadratics are used only for
// degree <= 2.
inline std::vector<cdouble> poly_roots(const RealPolynomial& p) {
    const int deg = p.degree();
    if (deg < 1) throw std::invalid_argument("poly_roots: polynomial degree must be >= 1");
    const auto& c = p.coefficients;
    std::vector<cdouble> roots;
    if (deg == 1) {
        roots.emplace_back(-c[0] / c[1], 0.0);
        return roots;
    }
    if (deg == 2) {
        const double a = c[2], b = c[1], c0 = c[0];
        const double disc = b * b - 4.0 * a * c0;
        if (disc >= 0.0) {
            const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
            double r1, r2;
            if (q != 0.0) {
                r1 = q / a;
                r2 = c0 / q;
            } else {
                r1 = 0.0;
                r2 = 0.0;
            }
            roots.emplace_back(r1, 0.0);
            roots.emplace_back(r2, 0.0);
        } else {
            const double re = -b / (2.0 * a), im = std::sqrt(-disc) / (2.0 * a);
            roots.emplace_back(re, im);
            roots.emplace_back(re, -im);
        }
        return roots;
    }
    // monic companion matrix: subdiagonal ones, last column -c_i / c_deg
    const std::size_t d = static_cast<std::size_t>(deg);
    std::vector<double> comp(d * d, 0.0);
    for (std::size_t i = 0; i + 1 < d; ++i) comp[(i + 1) * d + i] = 1.0;
    for (std::size_t i = 0; i < d; ++i) comp[i * d + (d - 1)] = -c[i] / c[d];
    detail::balance_real(d, comp);
    detail::hqr_eigenvalues(d, comp, roots);

    // Newton polish (accept only improving steps)
    const RealPolynomial dp = p.derivative();
    const double scale = p.coefficient_scale();
    for (auto& r : roots) {
        for (int it = 0; it < 4; ++it) {
            const cdouble pv = p(r);
            if (std::abs(pv) <= 1e-15 * scale) break;
            const cdouble dv = dp(r);
            if (std::abs(dv) < 1e-300) break;
            const cdouble rn = r - pv / dv;
            if (std::abs(p(rn)) < std::abs(pv))
                r = rn;
            else
                break;
        }
    }
    std::sort(roots.begin(), roots.end(), [](const cdouble& x, const cdouble& y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
    return roots;
}

// Largest real root (roots with |imag| <= imag_tol count as real).
inline double max_real_root(const RealPolynomial& p, double imag_tol = 1e-9) {
    const auto roots = poly_roots(p);
    bool found = false;
    double best = 0.0;
    for (const auto& r : roots) {
        if (std::abs(r.imag()) <= imag_tol) {
            if (!found || r.real() > best) best = r.real();
            found = true;
        }
    }
    if (!found) throw std::runtime_error("max_real_root: no real root within imaginary tolerance");
    return best;
}

// ---------------------------------------------------------------------------
// Lanczos iteration for the largest eigenpair of a real symmetric operator,
// given only its matrix-vector action.  Full reorthogonalization; small dense
// fallback quality at a fraction of the cost for large dimensions.
// ---------------------------------------------------------------------------

struct LanczosResult {
    double value = 0.0;
    std::vector<double> vector;
    int iterations = 0;
    bool converged = false;
};

inline LanczosResult lanczos_largest(std::size_t dim,
                                     const std::function<void(const double*, double*)>& apply,
                                     const std::vector<double>& start, double tol = 1e-11,
                                     int max_iter = 150) {
    if (start.size() != dim) throw std::invalid_argument("lanczos_largest: start vector has wrong size");
    double snorm = 0.0;
    for (double v : start) snorm += v * v;
    snorm = std::sqrt(snorm);
    if (snorm == 0.0) throw std::invalid_argument("lanczos_largest: start vector is zero");

    std::vector<std::vector<double>> basis;
    basis.reserve(static_cast<std::size_t>(max_iter) + 1);
    std::vector<double> alpha, beta;
    std::vector<double> v(dim), w(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = start[i] / snorm;
    basis.push_back(v);

    LanczosResult res;
    auto ritz_top = [&](double& value, std::vector<double>& tvec, double& resid) {
        const std::size_t m = alpha.size();
        std::vector<double> d = alpha, e(m, 0.0);
        for (std::size_t i = 0; i + 1 < m; ++i) e[i] = beta[i];
        std::vector<double> z(m * m, 0.0);
        for (std::size_t i = 0; i < m; ++i) z[i * m + i] = 1.0;
        detail::tridiagonal_ql(d, e, m, z.data());
        std::size_t top = 0;
        for (std::size_t i = 1; i < m; ++i)
            if (d[i] > d[top]) top = i;
        value = d[top];
        tvec.resize(m);
        for (std::size_t i = 0; i < m; ++i) tvec[i] = z[i * m + top];
        // residual bound |beta_m * s_m|; beta has m entries unless breakdown cut it short
        const double blast = (beta.size() == m) ? beta.back() : 0.0;
        resid = std::abs(blast * tvec[m - 1]);
    };

    std::vector<double> tvec;
    bool breakdown = false;
    for (int j = 0; j < max_iter; ++j) {
        apply(basis[static_cast<std::size_t>(j)].data(), w.data());
        if (j > 0) {
            const double b = beta[static_cast<std::size_t>(j) - 1];
            const auto& prev = basis[static_cast<std::size_t>(j) - 1];
            for (std::size_t i = 0; i < dim; ++i) w[i] -= b * prev[i];
        }
        double a = 0.0;
        const auto& cur = basis[static_cast<std::size_t>(j)];
        for (std::size_t i = 0; i < dim; ++i) a += cur[i] * w[i];
        alpha.push_back(a);
        for (std::size_t i = 0; i < dim; ++i) w[i] -= a * cur[i];
        // full reorthogonalization, twice for safety
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& u : basis) {
                double dot = 0.0;
                for (std::size_t i = 0; i < dim; ++i) dot += u[i] * w[i];
                if (dot != 0.0)
                    for (std::size_t i = 0; i < dim; ++i) w[i] -= dot * u[i];
            }
        }
        double b = 0.0;
        for (double x : w) b += x * x;
        b = std::sqrt(b);
        res.iterations = j + 1;
        if (b <= 1e-13) {
            breakdown = true;  // exact invariant subspace captured
            break;
        }
        beta.push_back(b);
        if (j + 1 < max_iter) {
            std::vector<double> next(dim);
            for (std::size_t i = 0; i < dim; ++i) next[i] = w[i] / b;
            basis.push_back(std::move(next));
        }
        if ((j + 1) % 5 == 0 || j + 1 == max_iter) {
            double value, resid;
            ritz_top(value, tvec, resid);
            if (resid <= tol * std::max(1.0, std::abs(value))) {
                res.converged = true;
                res.value = value;
                break;
            }
        }
    }
    double value, resid;
    ritz_top(value, tvec, resid);
    res.value = value;
    if (breakdown) res.converged = true;
    if (!res.converged) res.converged = resid <= 10.0 * tol * std::max(1.0, std::abs(value));
    // Ritz vector
    res.vector.assign(dim, 0.0);
    const std::size_t m = std::min(tvec.size(), basis.size());
    for (std::size_t k = 0; k < m; ++k) {
        const double s = tvec[k];
        const auto& u = basis[k];
        for (std::size_t i = 0; i < dim; ++i) res.vector[i] += s * u[i];
    }
    double nrm = 0.0;
    for (double x : res.vector) nrm += x * x;
    nrm = std::sqrt(nrm);
    if (nrm > 0.0)
        for (double& x : res.vector) x /= nrm;
    return res;
}

}  // namespace bellviol
