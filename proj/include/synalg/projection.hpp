#pragma once

#include <span>
#include <vector>

#include "synalg/linalg.hpp"

namespace synalg {

// Idempotent symmetric element (p = p²). Validation eigendecomposes, snaps
// eigenvalues to {0,1} when they are within the rank tolerance, rebuilds the
// matrix from the snapped spectrum, and records the rank; anything further
// from {0,1} is rejected as an invariant violation.
class Projection {
public:
    Projection() = default;

    static Projection checked(const SymmetricElement& a, const ToleranceConfig& tol = {});

    static Projection zero(std::size_t n);
    static Projection identity(std::size_t n);
    // Rank-one projection onto the line spanned by v (normalized internally).
    static Projection onto_line(std::span<const double> v);
    // Span of the listed eigenvector columns of q; trusted orthonormal input.
    static Projection span_of_columns(const Matrix& q, const std::vector<std::size_t>& cols);

    const SymmetricElement& element() const noexcept { return e_; }
    const Matrix& mat() const noexcept { return e_.mat(); }
    operator const Matrix&() const noexcept { return e_.mat(); }

    std::size_t dim() const noexcept { return e_.dim(); }
    std::size_t rank() const noexcept { return rank_; }
    bool is_zero() const noexcept { return rank_ == 0; }
    bool is_identity() const noexcept { return rank_ == dim(); }

    // Orthocomplement 1 - p; exact entrywise subtraction.
    Projection ortho() const;

private:
    Projection(SymmetricElement e, std::size_t rank) : e_(std::move(e)), rank_(rank) {}

    SymmetricElement e_;
    std::size_t rank_ = 0;

    friend Projection trusted_projection(SymmetricElement e, std::size_t rank);
};

// Internal constructor for projections that are exact by construction
// (carriers, spans of orthonormal columns, complements).
Projection trusted_projection(SymmetricElement e, std::size_t rank);

// Rank equality plus entrywise agreement within tol_abs.
bool projections_equal(const Projection& a, const Projection& b, double tol_abs = 1e-8);

} // namespace synalg
