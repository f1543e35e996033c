#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccd {

/// Error thrown when an elimination hits a numerically singular pivot.
class SingularSystemError : public std::runtime_error {
public:
    SingularSystemError(const std::string& what, std::size_t pivot_index)
        : std::runtime_error(what), pivot_index_(pivot_index) {}

    std::size_t pivot_index() const { return pivot_index_; }

private:
    std::size_t pivot_index_;
};

/// Dense row-major matrix, sized at construction.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Solves A x = b in place by LU with partial pivoting and row equilibration.
/// A is overwritten. Throws SingularSystemError if a scaled pivot falls below
/// `pivot_tol` times the equilibrated row scale.
std::vector<double> solve_dense(Matrix a, std::vector<double> b, double pivot_tol = 1e-14);

/// Least-squares solution of the normal equations (A^T A + lambda I) x = -A^T r.
/// Used for Gauss-Newton / Levenberg-Marquardt steps.
std::vector<double> solve_normal_equations(const Matrix& a, const std::vector<double>& r,
                                           double lambda);

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues ascending; `vectors`, if non-null, receives the matching
/// eigenvectors as columns.
std::vector<double> jacobi_eigenvalues(Matrix sym, Matrix* vectors = nullptr,
                                       int max_sweeps = 64);

/// 2-norm condition estimate of a rectangular matrix via eigenvalues of A^T A.
double condition_estimate(const Matrix& a);

/// m x n matrix-vector product.
std::vector<double> matvec(const Matrix& a, const std::vector<double>& x);

double norm_inf(const std::vector<double>& v);
double norm2(const std::vector<double>& v);

}  // namespace ccd
