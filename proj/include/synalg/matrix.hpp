#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace synalg {

// Dense square real matrix with value semantics, row-major storage.
// This is the enveloping space in which all products are formed; the
// symmetric elements of the algebra live in SymmetricElement (linalg.hpp).
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> d);

    std::size_t dim() const noexcept { return n_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    Matrix& operator*=(double s);

    Matrix transpose() const;

    double trace() const;
    double frobenius_norm() const;
    double max_abs() const;

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, double s) { return a *= s; }
    friend Matrix operator*(double s, Matrix a) { return a *= s; }
    friend Matrix operator-(Matrix a) { return a *= -1.0; }
    friend Matrix operator*(const Matrix& a, const Matrix& b); // matrix product

    friend bool operator==(const Matrix& a, const Matrix& b) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

// Rank-one matrix v vᵀ.
Matrix outer(std::span<const double> v);

// Column j of m as a vector.
std::vector<double> column(const Matrix& m, std::size_t j);

// max_ij |a_ij - b_ij|; dimensions must agree.
double max_abs_diff(const Matrix& a, const Matrix& b);

// Throws std::invalid_argument unless both operands share dimension n = m.
void require_same_dim(const Matrix& a, const Matrix& b, const char* where);

} // namespace synalg
