#include "synalg/infimum.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "synalg/errors.hpp"

namespace synalg {

double atom_mean(const Effect& e, const Projection& p, const ToleranceConfig& tol) {
    require_same_dim(e.mat(), p.mat(), "atom_mean");
    if (!is_atom(p)) throw std::invalid_argument("atom_mean: p is not an atom");

    const EigenDecomposition ed = sym_eigen(p.element(), tol);
    const std::vector<double> v = column(ed.eigenvectors, p.dim() - 1); // eigenvalue-1 direction
    double alpha = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) alpha += v[i] * e.mat()(i, j) * v[j];

    const double slack = tol.psd_eps * (1.0 + e.element().frobenius_norm());
    if (alpha < -slack || alpha > 1.0 + slack)
        throw invariant_violation("atom_mean: p e p gives a mean outside [0,1]");
    alpha = std::min(1.0, std::max(0.0, alpha));

    const Matrix pep = p.mat() * e.mat() * p.mat();
    if (max_abs_diff(pep, (alpha * p.element()).mat()) > 1e-10 * (1.0 + e.element().frobenius_norm()))
        throw invariant_violation("atom_mean: p e p is not a scalar multiple of p");
    return alpha;
}

AtomInfimumRecord inf_with_atom_complement(const Effect& e, const Projection& p,
                                           const ToleranceConfig& tol) {
    AtomInfimumRecord rec;
    rec.alpha = atom_mean(e, p, tol);
    const double scale = 1.0 + e.element().frobenius_norm();

    if (rec.alpha < tol.rank_eps) {
        rec.branch = AtomInfimumRecord::Branch::alpha_zero;
        if (!psd_leq(e.element(), p.ortho().element(), tol))
            throw invariant_violation("inf_with_atom_complement: zero mean but e is not below p⊥");
        rec.infimum = e;
        return rec;
    }

    rec.branch = AtomInfimumRecord::Branch::general;
    const double inv = 1.0 / rec.alpha;
    const SymmetricElement closed = sym(e.mat() - inv * (e.mat() * p.mat() * e.mat()));

    // equivalent route through the cosine-sine data: (s² - alpha⁻¹ b²) p⊥
    const CosineSinePair cs = cosine_sine(p, e, tol);
    const CommutatorEffect ce = commutator_effect(p, e, tol);
    const SymmetricElement s2 = sym(cs.s.mat() * cs.s.mat());
    const SymmetricElement b2 = sym(ce.b.mat() * ce.b.mat());
    const Matrix pc = p.ortho().mat();
    const SymmetricElement alt = sym((s2.mat() - inv * b2.mat()) * pc);
    if (max_abs_diff(closed.mat(), alt.mat()) > 1e-8 * scale)
        throw invariant_violation(
            "inf_with_atom_complement: e - alpha⁻¹epe and (s² - alpha⁻¹b²)p⊥ disagree");

    rec.infimum = Effect::checked(closed, tol);
    if (!psd_leq(rec.infimum.element(), e.element(), tol) ||
        !psd_leq(rec.infimum.element(), p.ortho().element(), tol))
        throw invariant_violation("inf_with_atom_complement: result is not a lower bound");

    const Matrix off = p.mat() * e.mat() * pc + pc * e.mat() * p.mat();
    rec.a_element = sym(inv * off);
    return rec;
}

Effect fold_atom_infima(const Effect& e, std::span<const Projection> atoms,
                        const ToleranceConfig& tol) {
    Effect f = e;
    for (const Projection& a : atoms) f = inf_with_atom_complement(f, a, tol).infimum;
    return f;
}

Effect inf_with_projection(const Effect& e, const Projection& q, const ToleranceConfig& tol) {
    require_same_dim(e.mat(), q.mat(), "inf_with_projection");
    if (q.is_identity()) return e;

    const Projection qc = q.ortho();
    const EigenDecomposition ed = sym_eigen(qc.element(), tol);
    std::vector<Projection> atoms;
    for (std::size_t i = q.dim() - qc.rank(); i < q.dim(); ++i) {
        const std::vector<double> v = column(ed.eigenvectors, i);
        atoms.push_back(Projection::onto_line(v));
    }

    const Effect f = fold_atom_infima(e, atoms, tol);
    if (!psd_leq(f.element(), q.element(), tol) || !psd_leq(f.element(), e.element(), tol))
        throw invariant_violation("inf_with_projection: fold result is not a lower bound of e and q");
    return f;
}

double atom_lower_bound_oracle(const Effect& e, const Projection& w, const ToleranceConfig& tol) {
    require_same_dim(e.mat(), w.mat(), "atom_lower_bound_oracle");
    if (!is_atom(w)) throw std::invalid_argument("atom_lower_bound_oracle: w is not an atom");

    const double floor = -1e-13 * (1.0 + e.element().frobenius_norm());
    auto admissible = [&](double beta) {
        const EigenDecomposition ed = sym_eigen(e.element() - beta * w.element(), tol);
        return ed.eigenvalues.front() >= floor;
    };

    if (admissible(1.0)) return 1.0;
    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 50; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (admissible(mid) ? lo : hi) = mid;
    }
    return lo;
}

} // namespace synalg
