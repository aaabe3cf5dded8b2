#include "synalg/cbs.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "synalg/errors.hpp"

namespace synalg {

namespace {

void check_pair_dims(const Projection& p, const Effect& e, const char* where) {
    require_same_dim(p.mat(), e.mat(), where);
}

SymmetricElement diagonal_part(const SymmetricElement& a, const Projection& p) {
    const Matrix& pm = p.mat();
    const Matrix pc = p.ortho().mat();
    return sym(pm * a.mat() * pm + pc * a.mat() * pc);
}

SymmetricElement off_diagonal_part(const SymmetricElement& a, const Projection& p) {
    const Matrix& pm = p.mat();
    const Matrix pc = p.ortho().mat();
    return sym(pm * a.mat() * pc + pc * a.mat() * pm);
}

} // namespace

CosineSinePair cosine_sine(const Projection& p, const Effect& e, const ToleranceConfig& tol) {
    check_pair_dims(p, e, "cosine_sine");
    const SymmetricElement ec = orthosupplement(e).element();
    const Matrix& pm = p.mat();
    const Matrix pc = p.ortho().mat();
    const SymmetricElement c2 = sym(pm * e.mat() * pm + pc * ec.mat() * pc);
    const SymmetricElement s2 = sym(pm * ec.mat() * pm + pc * e.mat() * pc);
    return CosineSinePair{Effect::checked(sqrt_psd(c2, tol), tol),
                          Effect::checked(sqrt_psd(s2, tol), tol)};
}

Effect j_effect(const Projection& p, const Effect& e, const ToleranceConfig& tol) {
    check_pair_dims(p, e, "j_effect");
    const SymmetricElement defect = sym(e.mat() - e.mat() * e.mat()); // e - e²
    return Effect::checked(sqrt_psd(diagonal_part(defect, p), tol), tol);
}

CommutatorEffect commutator_effect(const Projection& p, const Effect& e,
                                   const ToleranceConfig& tol) {
    check_pair_dims(p, e, "commutator_effect");
    const SymmetricElement off = off_diagonal_part(e.element(), p);
    const SymmetricElement b_abs = abs_value(off, tol);

    // alternative route: b² must equal c²s² - j². Comparing the squares keeps
    // the agreement test first-order even when both sides are tiny, where a
    // square root would amplify cancellation noise to its own square root.
    const CosineSinePair cs = cosine_sine(p, e, tol);
    const SymmetricElement c2 = sym(cs.c.mat() * cs.c.mat());
    const SymmetricElement s2 = sym(cs.s.mat() * cs.s.mat());
    const SymmetricElement defect = sym(e.mat() - e.mat() * e.mat());
    const SymmetricElement j2 = diagonal_part(defect, p);
    const SymmetricElement b_alt_sq = sym(c2.mat() * s2.mat()) - j2;

    const double scale = 1.0 + e.element().frobenius_norm();
    if (max_abs_diff(sym(b_abs.mat() * b_abs.mat()).mat(), b_alt_sq.mat()) > 1e-8 * scale)
        throw invariant_violation("commutator_effect: |off-diagonal|² and c²s² - j² disagree");

    const PartialSymmetry sgn = signum(off, tol);
    const Symmetry k = canonical_extension(sgn.element, tol);

    const double polar_gap = std::max(max_abs_diff((b_abs.mat() * k.mat()), off.mat()),
                                      max_abs_diff((k.mat() * b_abs.mat()), off.mat()));
    if (polar_gap > 1e-8 * scale)
        throw invariant_violation("commutator_effect: polar identity bk = kb = off-diagonal fails");

    return CommutatorEffect{Effect::checked(b_abs, tol), k};
}

CBSDecomposition cbs_decompose(const Projection& p, const Effect& e, const ToleranceConfig& tol) {
    check_pair_dims(p, e, "cbs_decompose");
    const std::size_t n = p.dim();

    CBSDecomposition d;
    d.unit = Projection::identity(n);
    d.p = p;
    d.e = e;

    const CosineSinePair cs = cosine_sine(p, e, tol);
    d.c = cs.c;
    d.s = cs.s;
    d.j = j_effect(p, e, tol);
    const CommutatorEffect ce = commutator_effect(p, e, tol);
    d.b = ce.b;
    d.k = ce.k;
    d.offdiag = off_diagonal_part(e.element(), p);

    const SubprojectionPair zt = largest_subprojections(e, tol);
    d.z = zt.z;
    d.t = zt.t;

    // Carriers of c, s, j are read off their squares: the square root inflates
    // exact zeros of c², s², j² (≈1e-16 noise) to ≈1e-8, past the rank
    // threshold, while carrier(x²) = carrier(x) for positive x.
    d.carrier_c = carrier(sym(d.c.mat() * d.c.mat()), tol);
    d.carrier_s = carrier(sym(d.s.mat() * d.s.mat()), tol);
    d.carrier_j = carrier(sym(d.j.mat() * d.j.mat()), tol);
    d.carrier_b = carrier(d.b.element(), tol);

    // reconstruction: e = c²p + bk + s²p⊥
    const Matrix& pm = p.mat();
    const Matrix pc = p.ortho().mat();
    const Matrix recon = d.c.mat() * d.c.mat() * pm + d.b.mat() * d.k.mat() +
                         d.s.mat() * d.s.mat() * pc;
    const double scale = 1.0 + e.element().frobenius_norm();
    const double resid = (sym(recon) - e.element()).frobenius_norm();
    if (resid > 1e-10 * scale)
        throw invariant_violation("cbs_decompose: reconstruction residual " +
                                  std::to_string(resid) + " exceeds 1e-10 * (1 + ||e||)");

    // b annihilates pk - kp⊥
    const Matrix balance = d.b.mat() * (pm * d.k.mat() - d.k.mat() * pc);
    if (sym(balance).frobenius_norm() > 1e-8 * scale)
        throw invariant_violation("cbs_decompose: b (pk - kp⊥) is not zero");

    return d;
}

CBSCarriers cbs_carriers(const CBSDecomposition& d, const ToleranceConfig& tol) {
    const Projection pperp = complement_in(d.unit, d.p);
    const Projection zperp = complement_in(d.unit, d.z);
    const Projection tperp = complement_in(d.unit, d.t);

    CBSCarriers out;
    out.c = meet(join(d.p, zperp, tol), join(pperp, tperp, tol), tol);
    out.s = meet(join(d.p, tperp, tol), join(pperp, zperp, tol), tol);
    const Projection tz = meet(tperp, zperp, tol);
    out.j = meet(join(d.p, tz, tol), join(pperp, tz, tol), tol);
    out.cs = meet(out.c, out.s, tol);

    if (!projections_equal(out.c, d.carrier_c, 1e-8) ||
        !projections_equal(out.s, d.carrier_s, 1e-8) ||
        !projections_equal(out.j, d.carrier_j, 1e-8))
        throw invariant_violation("cbs_carriers: lattice formulas disagree with direct carriers");

    const Matrix cs_mat = sym(d.c.mat() * d.s.mat()).mat();
    const Projection cs_direct = carrier(sym(cs_mat * cs_mat), tol);
    if (!projections_equal(out.cs, cs_direct, 1e-8))
        throw invariant_violation("cbs_carriers: (cs)° disagrees with c° ∧ s°");
    return out;
}

AtomStructure atom_structure(const CBSDecomposition& d, const ToleranceConfig& tol) {
    if (d.p.rank() != 1)
        throw std::invalid_argument("atom_structure: p is not an atom");
    if (d.carrier_b.rank() == 0)
        throw std::invalid_argument("atom_structure: p and e commute; no off-diagonal structure");

    AtomStructure out;
    out.v = Projection::checked(sym(d.k.mat() * d.p.mat() * d.k.mat()), tol);
    out.b_carrier = d.carrier_b;

    const double ortho_gap = (d.p.mat() * out.v.mat()).max_abs();
    if (ortho_gap > 1e-8)
        throw invariant_violation("atom_structure: kpk is not orthogonal to p");

    const Projection pv = trusted_projection(d.p.element() + out.v.element(), 2);
    if (d.carrier_b.rank() != 2 || !projections_equal(d.carrier_b, pv, 1e-7))
        throw invariant_violation("atom_structure: b° is not the rank-two sum p + kpk");

    const EigenDecomposition ed = sym_eigen(d.b.element(), tol);
    out.beta = ed.eigenvalues.back();
    if (!(out.beta > 0.0) || out.beta > 1.0 + tol.psd_eps)
        throw invariant_violation("atom_structure: top eigenvalue of b outside (0,1]");
    const double flat_gap = max_abs_diff(d.b.mat(), (out.beta * pv.element()).mat());
    if (flat_gap > 1e-8 * (1.0 + out.beta))
        throw invariant_violation("atom_structure: b is not a scalar multiple of b°");
    return out;
}

CBSDecomposition restrict_cbs(const CBSDecomposition& d, const Projection& q,
                              const ToleranceConfig& tol) {
    require_same_dim(d.p.mat(), q.mat(), "restrict_cbs");
    if (!psd_leq(q.element(), d.unit.element(), tol))
        throw std::invalid_argument("restrict_cbs: corner projection exceeds the record's unit");
    if (!commutes(q.element(), d.p.element(), tol) || !commutes(q.element(), d.e.element(), tol))
        throw std::invalid_argument("restrict_cbs: corner projection must commute with p and e");

    const std::size_t n = q.dim();
    if (q.rank() == 0) {
        CBSDecomposition zero;
        zero.unit = q;
        zero.p = Projection::zero(n);
        zero.e = Effect::zero(n);
        zero.c = Effect::zero(n);
        zero.s = Effect::zero(n);
        zero.j = Effect::zero(n);
        zero.b = Effect::zero(n);
        zero.k = Symmetry{SymmetricElement::identity(n)};
        zero.z = Projection::zero(n);
        zero.t = Projection::zero(n);
        zero.carrier_c = Projection::zero(n);
        zero.carrier_s = Projection::zero(n);
        zero.carrier_j = Projection::zero(n);
        zero.carrier_b = Projection::zero(n);
        zero.offdiag = SymmetricElement::zero(n);
        return zero;
    }

    const CornerBasis basis = corner_basis(q, tol);
    const Projection pc = Projection::checked(compress(d.p.element(), basis), tol);
    const Effect ec = Effect::checked(compress(d.e.element(), basis), tol);
    const CBSDecomposition inner = cbs_decompose(pc, ec, tol);

    CBSDecomposition out;
    out.unit = q;
    out.p = trusted_projection(lift(inner.p.element(), basis), inner.p.rank());
    out.e = trusted_effect(lift(inner.e.element(), basis));
    out.c = trusted_effect(lift(inner.c.element(), basis));
    out.s = trusted_effect(lift(inner.s.element(), basis));
    out.j = trusted_effect(lift(inner.j.element(), basis));
    out.b = trusted_effect(lift(inner.b.element(), basis));
    out.k = Symmetry::checked(sym(lift(inner.k.element, basis).mat() + q.ortho().mat()), tol);
    out.z = trusted_projection(lift(inner.z.element(), basis), inner.z.rank());
    out.t = trusted_projection(lift(inner.t.element(), basis), inner.t.rank());
    out.carrier_c = trusted_projection(lift(inner.carrier_c.element(), basis), inner.carrier_c.rank());
    out.carrier_s = trusted_projection(lift(inner.carrier_s.element(), basis), inner.carrier_s.rank());
    out.carrier_j = trusted_projection(lift(inner.carrier_j.element(), basis), inner.carrier_j.rank());
    out.carrier_b = trusted_projection(lift(inner.carrier_b.element(), basis), inner.carrier_b.rank());
    out.offdiag = lift(inner.offdiag, basis);

    // componentwise restriction must reproduce the from-scratch corner values
    const double scale = 1.0 + d.e.element().frobenius_norm();
    auto check_component = [&](const SymmetricElement& lifted, const SymmetricElement& ambient,
                               const char* name) {
        const SymmetricElement restricted = sym(q.mat() * ambient.mat() * q.mat());
        if (max_abs_diff(lifted.mat(), restricted.mat()) > 1e-8 * scale)
            throw invariant_violation(std::string("restrict_cbs: corner ") + name +
                                      " differs from the componentwise restriction");
    };
    // The square-root components c, s, j, b are compared through their
    // squares: near a zero eigenvalue the square root is only 1/2-Hoelder,
    // so roundoff-level differences between the two routes can inflate to
    // sqrt(machine epsilon) at the root level while the squares stay within
    // an ordinary Lipschitz bound.
    auto check_component_squared = [&](const SymmetricElement& lifted,
                                       const SymmetricElement& ambient, const char* name) {
        const SymmetricElement restricted = sym(q.mat() * ambient.mat() * q.mat());
        const SymmetricElement lhs = sym(lifted.mat() * lifted.mat());
        const SymmetricElement rhs = sym(restricted.mat() * restricted.mat());
        if (max_abs_diff(lhs.mat(), rhs.mat()) > 1e-8 * scale)
            throw invariant_violation(std::string("restrict_cbs: corner ") + name +
                                      " differs from the componentwise restriction");
    };
    check_component(out.p.element(), d.p.element(), "p");
    check_component(out.e.element(), d.e.element(), "e");
    check_component_squared(out.c.element(), d.c.element(), "c");
    check_component_squared(out.s.element(), d.s.element(), "s");
    check_component_squared(out.j.element(), d.j.element(), "j");
    check_component_squared(out.b.element(), d.b.element(), "b");

    if (!projections_equal(out.z, meet(d.z, q, tol), 1e-7) ||
        !projections_equal(out.t, meet(d.t, q, tol), 1e-7))
        throw invariant_violation("restrict_cbs: corner z/t differ from z∧q, t∧q");

    return out;
}

} // namespace synalg
