#pragma once

#include <span>

#include "synalg/element.hpp"

namespace synalg {

// ====================== Projection lattice ======================
//
// The join of two projections is the complement of their joint null space
// (computed by joint_null_basis, whose degeneracy decision is linear in the
// angle between the subspaces); the meet follows by De Morgan.

Projection join(const Projection& p, const Projection& q, const ToleranceConfig& tol = {});
Projection meet(const Projection& p, const Projection& q, const ToleranceConfig& tol = {});

// 1 - p.
Projection ortho(const Projection& p);

// x^⊥ relative to a unit projection: unit - x. Caller guarantees x <= unit.
Projection complement_in(const Projection& unit, const Projection& x);

// Lattice order p <= q; coincides with the Loewner order on projections.
bool proj_leq(const Projection& p, const Projection& q, const ToleranceConfig& tol = {});

bool is_atom(const Projection& p);

// True iff u p u = q (and hence u q u = p) within tolerance.
bool exchanged_by(const Projection& p, const Projection& q, const Symmetry& u,
                  const ToleranceConfig& tol = {});

// (p∨q) ∧ (p∨q⊥) ∧ (p⊥∨q) ∧ (p⊥∨q⊥); zero exactly when p and q commute.
Projection marsden_commutator(const Projection& p, const Projection& q,
                              const ToleranceConfig& tol = {});

// Commutator of a finite set: the meet over all sign vectors d of
// join_i f_i^{d_i}, where f^{+} = f and f^{-} = f⊥. Trivial members (zero or
// identity) are dropped first; the empty and singleton cases give zero.
// Throws resource_limit_exceeded when more than 12 nontrivial members remain.
Projection finite_set_commutator(std::span<const Projection> f,
                                 const ToleranceConfig& tol = {});

} // namespace synalg
