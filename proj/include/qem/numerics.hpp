// numerics.hpp
// Small dense matrices, a symmetric eigensolver and entropy helpers.
// Everything here works at desk scale (dimensions up to a few thousand).

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qem {

struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }

    static Matrix identity(int n);
};

double trace(const Matrix& m);
double max_abs_diff(const Matrix& a, const Matrix& b);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations. Converged
// when the off-diagonal Frobenius norm drops below off_tol; throws
// numerical_error if that does not happen within max_sweeps sweeps.
// Returns the spectrum sorted in descending order.
std::vector<double> jacobi_eigenvalues(Matrix a, double off_tol = 1e-13, int max_sweeps = 100);

// Shannon entropy in bits with the 0 log 0 = 0 convention. Entries in
// [-clip_tol, 0) count as 0; anything below -clip_tol throws numerical_error.
double shannon_entropy_bits(std::span<const double> p, double clip_tol = 1e-10);

}  // namespace qem
