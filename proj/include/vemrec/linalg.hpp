/// \file linalg.hpp
/// \brief Small dense matrices, Householder least squares and a Jacobi
///        eigensolver for the element-local and patch-local problems.
#ifndef VEMREC_LINALG_HPP
#define VEMREC_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "vemrec/common.hpp"

namespace vemrec {

// Row-major dense matrix; sized for element and patch problems (N <= a few
// hundred rows), not for global systems.
struct DenseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    DenseMatrix() = default;
    DenseMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

    static DenseMatrix identity(int n) {
        DenseMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
};

inline DenseMatrix operator*(const DenseMatrix& x, const DenseMatrix& y) {
    require(x.cols == y.rows, "DenseMatrix multiply: shape mismatch");
    DenseMatrix z(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const double xv = x(i, k);
            if (xv == 0.0) continue;
            for (int j = 0; j < y.cols; ++j) z(i, j) += xv * y(k, j);
        }
    return z;
}

inline DenseMatrix operator-(const DenseMatrix& x, const DenseMatrix& y) {
    require(x.rows == y.rows && x.cols == y.cols, "DenseMatrix subtract: shape mismatch");
    DenseMatrix z(x.rows, x.cols);
    for (std::size_t i = 0; i < z.a.size(); ++i) z.a[i] = x.a[i] - y.a[i];
    return z;
}

// Least squares min ||A x - b||_2 via Householder QR. A must have full column
// rank (rows >= cols); the caller screens rank beforehand.
inline std::vector<double> solve_least_squares(DenseMatrix A, std::vector<double> b) {
    const int m = A.rows, n = A.cols;
    require(m >= n && static_cast<int>(b.size()) == m, "least_squares: shape mismatch");
    for (int k = 0; k < n; ++k) {
        double alpha = 0.0;
        for (int i = k; i < m; ++i) alpha += A(i, k) * A(i, k);
        alpha = std::sqrt(alpha);
        if (alpha == 0.0) throw Error("least_squares: rank-deficient column");
        if (A(k, k) > 0.0) alpha = -alpha;
        std::vector<double> v(static_cast<std::size_t>(m - k), 0.0);
        v[0] = A(k, k) - alpha;
        for (int i = k + 1; i < m; ++i) v[static_cast<std::size_t>(i - k)] = A(i, k);
        double vtv = 0.0;
        for (double vi : v) vtv += vi * vi;
        if (vtv == 0.0) throw Error("least_squares: degenerate reflector");
        // apply H = I - 2 v v^T / (v^T v) to remaining columns and to b
        for (int j = k; j < n; ++j) {
            double s = 0.0;
            for (int i = k; i < m; ++i) s += v[static_cast<std::size_t>(i - k)] * A(i, j);
            s *= 2.0 / vtv;
            for (int i = k; i < m; ++i) A(i, j) -= s * v[static_cast<std::size_t>(i - k)];
        }
        double s = 0.0;
        for (int i = k; i < m; ++i) s += v[static_cast<std::size_t>(i - k)] * b[static_cast<std::size_t>(i)];
        s *= 2.0 / vtv;
        for (int i = k; i < m; ++i) b[static_cast<std::size_t>(i)] -= s * v[static_cast<std::size_t>(i - k)];
    }
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) s -= A(i, j) * x[static_cast<std::size_t>(j)];
        const double rii = A(i, i);
        if (rii == 0.0) throw Error("least_squares: singular R");
        x[static_cast<std::size_t>(i)] = s / rii;
    }
    return x;
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
inline std::vector<double> symmetric_eigenvalues(DenseMatrix s, int max_sweeps = 64) {
    const int n = s.rows;
    require(n == s.cols, "symmetric_eigenvalues: matrix not square");
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += s(p, q) * s(p, q);
        if (off <= 1e-300) break;
        double diag = 0.0;
        for (int p = 0; p < n; ++p) diag += s(p, p) * s(p, p);
        if (off <= 1e-30 * std::max(diag, 1e-300)) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (s(p, q) == 0.0) continue;
                const double theta = (s(q, q) - s(p, p)) / (2.0 * s(p, q));
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double snv = t * c;
                for (int k = 0; k < n; ++k) {
                    const double skp = s(k, p), skq = s(k, q);
                    s(k, p) = c * skp - snv * skq;
                    s(k, q) = snv * skp + c * skq;
                }
                for (int k = 0; k < n; ++k) {
                    const double spk = s(p, k), sqk = s(q, k);
                    s(p, k) = c * spk - snv * sqk;
                    s(q, k) = snv * spk + c * sqk;
                }
            }
        }
    }
    std::vector<double> ev(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = s(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

// 2-norm condition number estimate of a rectangular matrix from the
// eigenvalues of A^T A. Returns +inf when numerically rank deficient.
inline double condition_estimate(const DenseMatrix& A) {
    DenseMatrix ata(A.cols, A.cols);
    for (int i = 0; i < A.cols; ++i)
        for (int j = i; j < A.cols; ++j) {
            double s = 0.0;
            for (int k = 0; k < A.rows; ++k) s += A(k, i) * A(k, j);
            ata(i, j) = s;
            ata(j, i) = s;
        }
    const auto ev = symmetric_eigenvalues(ata);
    const double lmax = ev.back();
    const double lmin = ev.front();
    if (lmax <= 0.0) return std::numeric_limits<double>::infinity();
    if (lmin <= lmax * 1e-308) return std::numeric_limits<double>::infinity();
    return std::sqrt(lmax / lmin);
}

} // namespace vemrec

#endif
