#pragma once

#include <functional>
#include <span>
#include <vector>

#include "synalg/matrix.hpp"

namespace synalg {

// ====================== Tolerances ======================
//
// All predicates in the library are tolerance-relative; exact real-number
// identities are tested as residual bounds scaled by the operand norms.
struct ToleranceConfig {
    double rank_eps = 1e-9;     // eigenvalue magnitude below which a direction
                                // does not count towards a carrier / rank
    double comm_eps = 1e-8;     // operator-norm bound for commutation tests
    double psd_eps = 1e-9;      // allowed negative eigenvalue magnitude in order checks
    double eig_off_eps = 1e-13; // eigensolver off-diagonal convergence target

    // Throws std::invalid_argument unless every threshold is strictly
    // positive and rank_eps < 0.5.
    void validate() const;
};

// ====================== Symmetric elements ======================
//
// A value in the algebra: a real symmetric n x n matrix. Symmetry is enforced
// exactly on construction (entries are averaged with their transposes), so
// downstream code may rely on a(i,j) == a(j,i) bit for bit.
class SymmetricElement {
public:
    SymmetricElement() = default;

    static SymmetricElement symmetrized(const Matrix& m); // (m + mᵀ)/2
    static SymmetricElement zero(std::size_t n);
    static SymmetricElement identity(std::size_t n);
    static SymmetricElement diagonal(std::span<const double> d);

    const Matrix& mat() const noexcept { return m_; }
    operator const Matrix&() const noexcept { return m_; }

    std::size_t dim() const noexcept { return m_.dim(); }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

    double trace() const { return m_.trace(); }
    double frobenius_norm() const { return m_.frobenius_norm(); }

    friend SymmetricElement operator+(const SymmetricElement& a, const SymmetricElement& b);
    friend SymmetricElement operator-(const SymmetricElement& a, const SymmetricElement& b);
    friend SymmetricElement operator*(double s, const SymmetricElement& a);
    friend SymmetricElement operator-(const SymmetricElement& a);

private:
    struct exact_tag {};
    SymmetricElement(Matrix m, exact_tag) : m_(std::move(m)) {}

    Matrix m_;
};

// Shorthand for SymmetricElement::symmetrized; used to re-enter the algebra
// after a product formed in the enveloping matrix space.
SymmetricElement sym(const Matrix& m);

// ====================== Eigendecomposition ======================

struct EigenDecomposition {
    std::vector<double> eigenvalues; // ascending
    Matrix eigenvectors;             // orthonormal columns, column j pairs with eigenvalues[j]
};

// Full eigendecomposition by cyclic Jacobi rotations. Deterministic: fixed
// row-major sweep order, eigenvalues sorted ascending (stable), and the first
// nonzero component of every eigenvector is made positive. Converges when the
// off-diagonal Frobenius norm drops below eig_off_eps * ||a||_F; throws
// numerical_failure if that has not happened after 100 sweeps.
EigenDecomposition sym_eigen(const SymmetricElement& a, const ToleranceConfig& tol = {});

// Q diag(values) Qᵀ for an eigenbasis Q; inverse of sym_eigen up to roundoff.
SymmetricElement from_eigenpairs(std::span<const double> values, const Matrix& q);

// Q f(diag) Qᵀ. Throws std::domain_error if f returns a non-finite value on
// any eigenvalue.
SymmetricElement apply_scalar_function(const SymmetricElement& a,
                                       const std::function<double(double)>& f,
                                       const ToleranceConfig& tol = {});

// ====================== Order and commutation ======================

// Loewner order test: true iff min eigenvalue of (b - a) >= -psd_eps * (1 + ||b - a||).
bool psd_leq(const SymmetricElement& a, const SymmetricElement& b,
             const ToleranceConfig& tol = {});

// true iff ||ab - ba|| <= comm_eps * (1 + ||a||_F ||b||_F), operator norm.
bool commutes(const SymmetricElement& a, const SymmetricElement& b,
              const ToleranceConfig& tol = {});

// Operator-norm residual ||ab - ba||; the quantity commutes() thresholds.
double commutation_residual(const SymmetricElement& a, const SymmetricElement& b,
                            const ToleranceConfig& tol = {});

// Spectral norm sqrt(lambda_max(mᵀm)), valid for any square matrix.
double operator_norm(const Matrix& m, const ToleranceConfig& tol = {});

// ====================== Joint null spaces ======================
//
// Orthonormal basis of the common null space of a family of positive
// summands (orthoprojections or unit dyads): the directions v with w·v = 0
// for every member w. Candidate directions are read off the small
// eigenvalues of the summed operator, but the accept/reject decision uses
// the per-member residual max_w ||w·v||, which is linear in the angle
// between v and the members' ranges. An eigenvalue-only decision squares
// that angle, so configurations whose angle is near sqrt(rank_eps) would be
// misclassified; the residual test moves the ambiguous window down to
// rank_eps itself.
std::vector<std::vector<double>> joint_null_basis(std::span<const Matrix> summands,
                                                  const ToleranceConfig& tol = {});

} // namespace synalg
