#include "qem/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qem/errors.hpp"

namespace qem {

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

double trace(const Matrix& m) {
    double s = 0.0;
    const int n = std::min(m.rows, m.cols);
    for (int i = 0; i < n; ++i) s += m(i, i);
    return s;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        d = std::max(d, std::abs(a.data[i] - b.data[i]));
    return d;
}

namespace {

double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

}  // namespace

std::vector<double> jacobi_eigenvalues(Matrix a, double off_tol, int max_sweeps) {
    if (a.rows != a.cols) throw std::invalid_argument("jacobi_eigenvalues: matrix not square");
    const int n = a.rows;
    if (n == 0) return {};
    if (n == 1) return {a(0, 0)};

    bool converged = off_diagonal_norm(a) < off_tol;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) < 1e-300) {
                    a(p, q) = a(q, p) = 0.0;
                    continue;
                }
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                // smaller-magnitude root of t^2 + 2 theta t - 1 = 0
                double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0) t = -t;
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                const double app = a(p, p), aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = a(q, p) = 0.0;
                for (int i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = a(p, i) = aip - s * (aiq + tau * aip);
                    a(i, q) = a(q, i) = aiq + s * (aip - tau * aiq);
                }
            }
        }
        converged = off_diagonal_norm(a) < off_tol;
    }
    if (!converged) throw numerical_error("jacobi_eigenvalues: no convergence within sweep cap");

    std::vector<double> eig(n);
    for (int i = 0; i < n; ++i) eig[i] = a(i, i);
    std::sort(eig.begin(), eig.end(), std::greater<double>());
    return eig;
}

double shannon_entropy_bits(std::span<const double> p, double clip_tol) {
    double h = 0.0;
    for (double x : p) {
        if (x < 0.0) {
            if (x < -clip_tol)
                throw numerical_error("shannon_entropy_bits: entry below -clip_tol");
            continue;  // clipped to 0
        }
        if (x > 0.0) h -= x * std::log2(x);
    }
    return h;
}

}  // namespace qem
