#pragma once

#include <optional>
#include <span>

#include "synalg/cbs.hpp"

namespace synalg {

// ====================== Closed-form infima against atoms ======================

// For an atom p, pep = alpha * p; returns alpha in [0,1].
double atom_mean(const Effect& e, const Projection& p, const ToleranceConfig& tol = {});

// e ∧ p⊥ for an atom p. When alpha = 0 (below rank_eps) the infimum is e
// itself (e is then already below p⊥); otherwise it is e - alpha⁻¹ epe,
// cross-checked against the equivalent form (s² - alpha⁻¹ b²) p⊥.
struct AtomInfimumRecord {
    enum class Branch { alpha_zero, general };

    Branch branch = Branch::general;
    double alpha = 0.0;
    std::optional<SymmetricElement> a_element; // alpha⁻¹ (pep⊥ + p⊥ep), general branch only
    Effect infimum;
};

AtomInfimumRecord inf_with_atom_complement(const Effect& e, const Projection& p,
                                           const ToleranceConfig& tol = {});

// Successive atom folds e ∧ a₁⊥ ∧ a₂⊥ ∧ ... for a fixed list of pairwise
// orthogonal atoms; the result does not depend on the order.
Effect fold_atom_infima(const Effect& e, std::span<const Projection> atoms,
                        const ToleranceConfig& tol = {});

// e ∧ q for an arbitrary projection q, via atom folds over an eigenbasis of q⊥.
Effect inf_with_projection(const Effect& e, const Projection& q,
                           const ToleranceConfig& tol = {});

// Largest beta with beta * w <= e for an atom w, found by bisection on the
// minimum eigenvalue of e - beta w; accurate to 1e-12. Serves as an
// independent reference for the closed forms.
double atom_lower_bound_oracle(const Effect& e, const Projection& w,
                               const ToleranceConfig& tol = {});

} // namespace synalg
