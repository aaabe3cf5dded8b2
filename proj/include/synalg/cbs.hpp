#pragma once

#include "synalg/effect.hpp"
#include "synalg/lattice.hpp"

namespace synalg {

// ====================== Cosine-sine decomposition of an effect ======================
//
// Every effect e splits against a projection p as e = c²p + bk + s²p⊥ with
//   c = (pep + p⊥e⊥p⊥)^{1/2}      (cosine)
//   s = (pe⊥p + p⊥ep⊥)^{1/2}      (sine)
//   j = (p(e-e²)p + p⊥(e-e²)p⊥)^{1/2}
//   b = |pep⊥ + p⊥ep|, k the symmetry in the polar splitting of that
//       off-diagonal part (extended canonically off its support).
// The record carries everything the downstream commutator and infimum
// computations need. `unit` is the identity for a full decomposition and the
// corner projection q for records produced by restrict_cbs; complements in
// the record's identities are taken relative to it.

struct CBSDecomposition {
    Projection unit;
    Projection p;
    Effect e;
    Effect c, s, j, b;
    Symmetry k; // canonical ambient extension: acts as the identity outside the unit
    Projection z, t;
    Projection carrier_c, carrier_s, carrier_j, carrier_b;
    SymmetricElement offdiag; // pep⊥ + p⊥ep
};

struct CosineSinePair {
    Effect c, s;
};

CosineSinePair cosine_sine(const Projection& p, const Effect& e,
                           const ToleranceConfig& tol = {});

// The diagonal square root j with j² = p(e-e²)p + p⊥(e-e²)p⊥; vanishes
// exactly when e is a projection.
Effect j_effect(const Projection& p, const Effect& e, const ToleranceConfig& tol = {});

// b = |pep⊥ + p⊥ep| along with the symmetry k satisfying bk = kb = pep⊥ + p⊥ep.
// b is cross-checked against the alternative root (c²s² - j²)^{1/2}.
struct CommutatorEffect {
    Effect b;
    Symmetry k;
};

CommutatorEffect commutator_effect(const Projection& p, const Effect& e,
                                   const ToleranceConfig& tol = {});

// Full decomposition with internal verification of the reconstruction
// identity and of the off-diagonal polar identities; throws
// invariant_violation when a residual exceeds 1e-10 * (1 + ||e||).
CBSDecomposition cbs_decompose(const Projection& p, const Effect& e,
                               const ToleranceConfig& tol = {});

// Support projections of c, s, j and cs expressed through the lattice:
//   c° = (p ∨ z⊥) ∧ (p⊥ ∨ t⊥),   s° = (p ∨ t⊥) ∧ (p⊥ ∨ z⊥),
//   j° = (p ∨ (t⊥∧z⊥)) ∧ (p⊥ ∨ (t⊥∧z⊥)),   (cs)° = c° ∧ s°,
// cross-checked against the directly computed carriers.
struct CBSCarriers {
    Projection c, s, j, cs;
};

CBSCarriers cbs_carriers(const CBSDecomposition& d, const ToleranceConfig& tol = {});

// For an atom p not commuting with e: v = kpk is an atom orthogonal to p,
// b° = p + v has rank two, and b = beta * b° for a single 0 < beta <= 1.
struct AtomStructure {
    Projection v;
    double beta = 0.0;
    Projection b_carrier;
};

AtomStructure atom_structure(const CBSDecomposition& d, const ToleranceConfig& tol = {});

// Decomposition of (pq, eq) inside the corner algebra qAq for a projection q
// commuting with both p and e. Computed from scratch in corner coordinates,
// lifted back, and cross-checked against the componentwise restriction.
CBSDecomposition restrict_cbs(const CBSDecomposition& d, const Projection& q,
                              const ToleranceConfig& tol = {});

} // namespace synalg
