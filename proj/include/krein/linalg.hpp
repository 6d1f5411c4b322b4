#pragma once

#include <cstddef>
#include <vector>

namespace krein {

// Dense square matrix, row-major.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), a_(n * n, fill) {}

    static Matrix identity(std::size_t n);

    std::size_t size() const { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    double max_abs() const;
    double asymmetry() const;  // max |a_ij - a_ji|
    Matrix transpose() const;
    Matrix operator*(const Matrix& o) const;
    std::vector<double> operator*(const std::vector<double>& v) const;

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

struct EigenSystem {
    std::vector<double> values;  // ascending
    Matrix vectors;              // column k is the k-th eigenvector
    std::vector<double> vector(std::size_t k) const;
};

// Cyclic Jacobi. Throws SymmetryError when asymmetry > 1e-12 * max(1, |M|).
EigenSystem eig_sym(const Matrix& m);

// Flip sign so the largest-magnitude entry is positive (first one on ties).
void fix_sign(std::vector<double>& v);

double dot(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace krein
