#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "synalg/cbs.hpp"

namespace synalg {

// ====================== Pair commutator of a projection and an effect ======================
//
// [p,e] is the finite-set commutator of {p} together with the spectral cut
// projections of e: the smallest projection r such that r commutes with p and
// with e and the compressions p∧r⊥, e∧r⊥ commute with each other. It splits
// the space into a corner where p and e commute and a corner where they are
// totally noncompatible.

Projection pair_commutator(const Projection& p, const Effect& e,
                           const ToleranceConfig& tol = {});

// Same projection by a different algorithm: the smallest subspace containing
// the range of the off-diagonal part of e that is invariant under p and e.
// Throws numerical_failure if the closure does not stabilize.
Projection pair_commutator_via_closure(const Projection& p, const Effect& e,
                                       const ToleranceConfig& tol = {});

// Projection onto the smallest subspace containing the seed vectors that is
// invariant under both p and e; it commutes with both.
Projection reducing_subspace_closure(std::span<const std::vector<double>> seeds,
                                     const Projection& p, const Effect& e,
                                     const ToleranceConfig& tol = {});

// Verifies that r commutes with p and e, that the compressions beyond r
// commute, and that r is dominated by no strictly smaller projection from a
// candidate family (the computed commutator, the cosine/sine carriers and
// their meet, and joins of r with sampled commuting projections).
bool characterization_check(const Projection& p, const Effect& e, const Projection& r,
                            const ToleranceConfig& tol = {},
                            std::uint64_t sample_seed = 0x5eedf00dULL);

struct PairCommutatorReport {
    Projection r;         // [p,e]
    Projection b_carrier; // b°
    Projection cs_meet;   // c° ∧ s°
    bool chain_ok = false;
    bool totally_noncompatible = false; // r = 1
    bool generic_position = false;      // b° = 1 (strictly stronger)
    Projection p_r;                     // p ∧ r
    Effect e_r;                         // e compressed to r
    Projection p_r_perp;
    Effect e_r_perp;
};

// Establishes b <= b° <= [p,e] <= c°∧s° (Loewner for the first step, lattice
// order for the rest) and the equivalence b° = [p,e] iff e commutes with b°;
// any failure throws invariant_violation.
PairCommutatorReport inequality_chain(const Projection& p, const Effect& e,
                                      const ToleranceConfig& tol = {});

struct SplitReport {
    PairCommutatorReport report;
    double commuting_corner_residual = 0.0; // ||b|| of the r⊥ corner decomposition
    bool noncompat_corner_is_unit = false;  // corner commutator inside rAr equals r
};

// Verifies the two-sided splitting: the r⊥ corner pair commutes (its
// off-diagonal effect vanishes) and the r corner pair is totally
// noncompatible. Throws invariant_violation when either side fails.
SplitReport split_by_commutator(const Projection& p, const Effect& e,
                                const ToleranceConfig& tol = {});

} // namespace synalg
