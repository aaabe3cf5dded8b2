#pragma once

#include <vector>

#include "synalg/element.hpp"

namespace synalg {

// Symmetric element with spectrum in [0,1]. Validation clamps eigenvalues
// within psd_eps of the interval back onto it and rebuilds; anything further
// out is rejected.
class Effect {
public:
    Effect() = default;

    static Effect checked(const SymmetricElement& a, const ToleranceConfig& tol = {});
    static Effect from(const Projection& p);
    static Effect zero(std::size_t n);
    static Effect identity(std::size_t n);

    const SymmetricElement& element() const noexcept { return e_; }
    const Matrix& mat() const noexcept { return e_.mat(); }
    operator const Matrix&() const noexcept { return e_.mat(); }
    std::size_t dim() const noexcept { return e_.dim(); }

private:
    explicit Effect(SymmetricElement e) : e_(std::move(e)) {}

    SymmetricElement e_;

    friend Effect trusted_effect(SymmetricElement e);
};

// Internal constructor for effects exact by construction (complements,
// projections reinterpreted as effects).
Effect trusted_effect(SymmetricElement e);

// e⊥ = 1 - e; entrywise exact.
Effect orthosupplement(const Effect& e);

// z: the largest projection below e (its eigenvalue-1 eigenspace);
// t: the largest projection below e⊥ (the eigenvalue-0 eigenspace of e).
// Computed through the support-projection route z = (e⊥°)⊥, t = (e°)⊥,
// cross-checked against a direct eigenvalue reading.
struct SubprojectionPair {
    Projection z;
    Projection t;
};

SubprojectionPair largest_subprojections(const Effect& e, const ToleranceConfig& tol = {});

// True iff no nonzero projection lies below e (z = 0).
bool is_projection_free(const Effect& e, const ToleranceConfig& tol = {});

// qaq for a commuting with q. Throws std::invalid_argument if the
// commutation precondition fails.
SymmetricElement restrict_to_corner(const SymmetricElement& a, const Projection& q,
                                    const ToleranceConfig& tol = {});

// ====================== Corner coordinates ======================
//
// An orthonormal basis of range(q), used to transport computations into the
// corner algebra qAq as full rank(q)-dimensional problems.
struct CornerBasis {
    std::size_t ambient_dim = 0;
    std::vector<std::vector<double>> columns; // rank(q) orthonormal vectors
};

CornerBasis corner_basis(const Projection& q, const ToleranceConfig& tol = {});

// BᵀaB: the rank(q)-dimensional matrix of a in corner coordinates.
SymmetricElement compress(const SymmetricElement& a, const CornerBasis& basis);

// B c Bᵀ: embed a corner-coordinate element back into the ambient space.
SymmetricElement lift(const SymmetricElement& c, const CornerBasis& basis);

} // namespace synalg
