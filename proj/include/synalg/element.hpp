#pragma once

#include <vector>

#include "synalg/projection.hpp"

namespace synalg {

// ====================== Element calculus ======================
//
// Functional-calculus derived objects of a single symmetric element: support
// projection, square root, absolute value, signum, polar decomposition, and
// the finite family of spectral cut projections.

// Support projection a°: smallest projection with a°a = a; the span of
// eigenvectors whose eigenvalue magnitude exceeds rank_eps * (1 + ||a||).
Projection carrier(const SymmetricElement& a, const ToleranceConfig& tol = {});

// Square root of a positive semidefinite element. Eigenvalues in
// [-psd_eps*(1+||a||), 0) are clamped to zero; anything lower throws
// std::domain_error.
SymmetricElement sqrt_psd(const SymmetricElement& a, const ToleranceConfig& tol = {});

// |a| = (a²)^{1/2}, computed spectrally.
SymmetricElement abs_value(const SymmetricElement& a, const ToleranceConfig& tol = {});

// a⁺ = (|a| + a)/2; eigenvalues below the rank threshold count as zero.
SymmetricElement positive_part(const SymmetricElement& a, const ToleranceConfig& tol = {});

// t with t³ = t: eigenvalue signs on the support of a, zero elsewhere.
// Satisfies t² = a° and a = |a| t = t |a|.
struct PartialSymmetry {
    SymmetricElement element;
    Projection support; // t²
};

PartialSymmetry signum(const SymmetricElement& a, const ToleranceConfig& tol = {});

// Involutive symmetric element u² = 1.
struct Symmetry {
    SymmetricElement element;

    static Symmetry checked(const SymmetricElement& u, const ToleranceConfig& tol = {});

    const Matrix& mat() const noexcept { return element.mat(); }
    operator const Matrix&() const noexcept { return element.mat(); }
    std::size_t dim() const noexcept { return element.dim(); }
};

// u = t + (1 - t²): extends a partial symmetry to a symmetry by acting as the
// identity off its support. Validates that t is a partial symmetry
// (spectrum within tolerance of {-1, 0, 1}).
Symmetry canonical_extension(const SymmetricElement& t, const ToleranceConfig& tol = {});

// a = |a| u = u |a| with u the canonical extension of signum(a).
struct PolarDecomposition {
    SymmetricElement abs;
    Symmetry u;
};

PolarDecomposition polar_decompose(const SymmetricElement& a, const ToleranceConfig& tol = {});

// Finite ascending family of spectral cut projections. cuts[i] projects onto
// the eigenspaces with eigenvalue <= thresholds[i]; thresholds are the
// distinct eigenvalues after merging gaps below 2*rank_eps*(1+||a||), each
// represented by its group maximum. The cut family is recomputed internally
// through the support-projection formula 1 - ((a - lambda)⁺)° and the two
// routes must agree, else invariant_violation is thrown.
struct SpectralResolution {
    std::vector<double> thresholds;
    std::vector<Projection> cuts;
};

SpectralResolution spectral_resolution(const SymmetricElement& a,
                                       const ToleranceConfig& tol = {});

// Splitting of a along a projection: a = pap + (pap⊥ + p⊥ap) + p⊥ap⊥.
struct PeirceDecomposition {
    SymmetricElement diag_p;      // pap
    SymmetricElement off_diag;    // pap⊥ + p⊥ap
    SymmetricElement diag_p_perp; // p⊥ap⊥
};

PeirceDecomposition peirce_decompose(const SymmetricElement& a, const Projection& p,
                                     const ToleranceConfig& tol = {});

} // namespace synalg
