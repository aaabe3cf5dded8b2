#include "synalg/commutator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "synalg/errors.hpp"
#include "synalg/random_pairs.hpp"

namespace synalg {

namespace {

SymmetricElement off_diagonal_of(const Effect& e, const Projection& p) {
    const Matrix& pm = p.mat();
    const Matrix pc = p.ortho().mat();
    return sym(pm * e.mat() * pc + pc * e.mat() * pm);
}

// Modified Gram-Schmidt (two passes) against the current basis; returns true
// and appends when a genuinely new direction remains.
bool absorb_direction(std::vector<std::vector<double>>& basis, std::vector<double> w) {
    constexpr double accept = 1e-7;
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& u : basis) {
            double dot = 0.0;
            for (std::size_t i = 0; i < w.size(); ++i) dot += u[i] * w[i];
            for (std::size_t i = 0; i < w.size(); ++i) w[i] -= dot * u[i];
        }
    }
    double norm2 = 0.0;
    for (double x : w) norm2 += x * x;
    const double norm = std::sqrt(norm2);
    if (norm <= accept) return false;
    for (double& x : w) x /= norm;
    basis.push_back(std::move(w));
    return true;
}

std::vector<double> apply_matrix(const Matrix& m, const std::vector<double>& v) {
    std::vector<double> w(m.dim(), 0.0);
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j) w[i] += m(i, j) * v[j];
    return w;
}

Projection projection_from_basis(const std::vector<std::vector<double>>& basis, std::size_t n) {
    Matrix m(n);
    for (const auto& u : basis)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) += u[i] * u[j];
    return trusted_projection(SymmetricElement::symmetrized(m), basis.size());
}

} // namespace

Projection pair_commutator(const Projection& p, const Effect& e, const ToleranceConfig& tol) {
    require_same_dim(p.mat(), e.mat(), "pair_commutator");
    const SpectralResolution sr = spectral_resolution(e.element(), tol);
    std::vector<Projection> family;
    family.reserve(sr.cuts.size() + 1);
    family.push_back(p);
    for (const Projection& cut : sr.cuts) family.push_back(cut);
    return finite_set_commutator(family, tol);
}

Projection reducing_subspace_closure(std::span<const std::vector<double>> seeds,
                                     const Projection& p, const Effect& e,
                                     const ToleranceConfig& tol) {
    (void)tol;
    require_same_dim(p.mat(), e.mat(), "reducing_subspace_closure");
    const std::size_t n = p.dim();

    std::vector<std::vector<double>> basis;
    for (const auto& s : seeds) {
        if (s.size() != n)
            throw std::invalid_argument("reducing_subspace_closure: seed vector has wrong dimension");
        absorb_direction(basis, s);
    }
    if (basis.empty()) return Projection::zero(n);

    std::size_t frontier_begin = 0;
    for (std::size_t round = 0; round <= n; ++round) {
        const std::size_t frontier_end = basis.size();
        if (frontier_begin == frontier_end) break;
        for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
            absorb_direction(basis, apply_matrix(p.mat(), basis[i]));
            absorb_direction(basis, apply_matrix(e.mat(), basis[i]));
        }
        frontier_begin = frontier_end;
        if (basis.size() == n) break;
        if (round == n && basis.size() > frontier_end)
            throw numerical_failure("reducing_subspace_closure: closure did not stabilize",
                                    static_cast<double>(basis.size()));
    }
    return projection_from_basis(basis, n);
}

Projection pair_commutator_via_closure(const Projection& p, const Effect& e,
                                       const ToleranceConfig& tol) {
    require_same_dim(p.mat(), e.mat(), "pair_commutator_via_closure");
    const SymmetricElement off = off_diagonal_of(e, p);
    const EigenDecomposition ed = sym_eigen(off, tol);
    const double thr = tol.rank_eps * (1.0 + off.frobenius_norm());

    std::vector<std::vector<double>> seeds;
    for (std::size_t i = 0; i < ed.eigenvalues.size(); ++i)
        if (std::fabs(ed.eigenvalues[i]) > thr) seeds.push_back(column(ed.eigenvectors, i));
    if (seeds.empty()) return Projection::zero(p.dim());
    return reducing_subspace_closure(seeds, p, e, tol);
}

bool characterization_check(const Projection& p, const Effect& e, const Projection& r,
                            const ToleranceConfig& tol, std::uint64_t sample_seed) {
    require_same_dim(p.mat(), r.mat(), "characterization_check");

    auto satisfies = [&](const Projection& v) {
        if (!commutes(v.element(), p.element(), tol)) return false;
        if (!commutes(v.element(), e.element(), tol)) return false;
        const Projection vc = v.ortho();
        const Projection p_beyond = meet(p, vc, tol);
        const SymmetricElement e_beyond = sym(e.mat() * vc.mat()); // e ∧ v⊥ for commuting v⊥
        return commutes(p_beyond.element(), e_beyond, tol);
    };

    if (!satisfies(r)) return false;

    const CBSDecomposition d = cbs_decompose(p, e, tol);
    const CBSCarriers cars = cbs_carriers(d, tol);
    std::vector<Projection> candidates{pair_commutator(p, e, tol), cars.c, cars.s, cars.cs};

    Rng rng(derive_seed(sample_seed, 0x636f6dULL, p.dim(), r.rank()));
    for (int i = 0; i < 3; ++i) {
        const std::vector<double> v = random_unit_vector(rng, p.dim());
        const std::vector<std::vector<double>> seeds{v};
        const Projection w = reducing_subspace_closure(seeds, p, e, tol);
        candidates.push_back(join(r, w, tol));
    }

    for (const Projection& v : candidates)
        if (satisfies(v) && !proj_leq(r, v, tol)) return false;
    return true;
}

PairCommutatorReport inequality_chain(const Projection& p, const Effect& e,
                                      const ToleranceConfig& tol) {
    const std::size_t n = p.dim();
    const CBSDecomposition d = cbs_decompose(p, e, tol);
    const CBSCarriers cars = cbs_carriers(d, tol);

    PairCommutatorReport rep;
    rep.r = pair_commutator(p, e, tol);
    rep.b_carrier = d.carrier_b;
    rep.cs_meet = cars.cs;

    if (!psd_leq(d.b.element(), d.carrier_b.element(), tol))
        throw invariant_violation("inequality_chain: b is not below its own carrier");
    if (!proj_leq(d.carrier_b, rep.r, tol))
        throw invariant_violation("inequality_chain: b° is not below the pair commutator");
    if (!proj_leq(rep.r, rep.cs_meet, tol))
        throw invariant_violation("inequality_chain: pair commutator is not below c° ∧ s°");
    rep.chain_ok = true;

    const bool equal = projections_equal(rep.b_carrier, rep.r, 1e-7);
    const bool comm = commutes(e.element(), rep.b_carrier.element(), tol);
    if (equal != comm)
        throw invariant_violation(
            "inequality_chain: b° = [p,e] must hold exactly when e commutes with b°");

    rep.totally_noncompatible = rep.r.rank() == n;
    rep.generic_position = rep.b_carrier.rank() == n;

    const Projection rc = rep.r.ortho();
    rep.p_r = Projection::checked(sym(rep.r.mat() * p.mat() * rep.r.mat()), tol);
    rep.e_r = Effect::checked(sym(rep.r.mat() * e.mat() * rep.r.mat()), tol);
    rep.p_r_perp = Projection::checked(sym(rc.mat() * p.mat() * rc.mat()), tol);
    rep.e_r_perp = Effect::checked(sym(rc.mat() * e.mat() * rc.mat()), tol);
    return rep;
}

SplitReport split_by_commutator(const Projection& p, const Effect& e,
                                const ToleranceConfig& tol) {
    SplitReport out;
    out.report = inequality_chain(p, e, tol);
    const Projection& r = out.report.r;

    const CBSDecomposition d = cbs_decompose(p, e, tol);
    const double scale = 1.0 + e.element().frobenius_norm();

    // commuting corner: the off-diagonal effect of the r⊥ restriction vanishes
    const CBSDecomposition corner = restrict_cbs(d, r.ortho(), tol);
    out.commuting_corner_residual = corner.b.element().frobenius_norm();
    if (out.commuting_corner_residual > 1e-9 * scale)
        throw invariant_violation("split_by_commutator: r⊥ corner pair fails to commute (||b|| = " +
                                  std::to_string(out.commuting_corner_residual) + ")");

    // noncompatible corner: inside rAr the corner pair has full commutator
    if (r.rank() == 0) {
        out.noncompat_corner_is_unit = true; // vacuous
    } else {
        const CornerBasis basis = corner_basis(r, tol);
        const Projection pc = Projection::checked(compress(p.element(), basis), tol);
        const Effect ec = Effect::checked(compress(e.element(), basis), tol);
        const Projection rc = pair_commutator(pc, ec, tol);
        out.noncompat_corner_is_unit = rc.rank() == r.rank();
        if (!out.noncompat_corner_is_unit)
            throw invariant_violation(
                "split_by_commutator: corner pair inside rAr is not totally noncompatible");
    }
    return out;
}

} // namespace synalg
