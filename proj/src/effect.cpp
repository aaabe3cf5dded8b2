#include "synalg/effect.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "synalg/errors.hpp"

namespace synalg {

Effect trusted_effect(SymmetricElement e) { return Effect(std::move(e)); }

Effect Effect::checked(const SymmetricElement& a, const ToleranceConfig& tol) {
    const EigenDecomposition ed = sym_eigen(a, tol);
    const double slack = tol.psd_eps * (1.0 + a.frobenius_norm());
    std::vector<double> clamped(ed.eigenvalues.size());
    for (std::size_t i = 0; i < clamped.size(); ++i) {
        const double lam = ed.eigenvalues[i];
        if (lam < -slack)
            throw invariant_violation("Effect: eigenvalue " + std::to_string(lam) +
                                      " below 0 beyond tolerance");
        if (lam > 1.0 + slack)
            throw invariant_violation("Effect: eigenvalue " + std::to_string(lam) +
                                      " above 1 beyond tolerance");
        clamped[i] = std::min(1.0, std::max(0.0, lam));
    }
    return Effect(from_eigenpairs(clamped, ed.eigenvectors));
}

Effect Effect::from(const Projection& p) { return Effect(p.element()); }

Effect Effect::zero(std::size_t n) { return Effect(SymmetricElement::zero(n)); }

Effect Effect::identity(std::size_t n) { return Effect(SymmetricElement::identity(n)); }

Effect orthosupplement(const Effect& e) {
    return trusted_effect(SymmetricElement::identity(e.dim()) - e.element());
}

SubprojectionPair largest_subprojections(const Effect& e, const ToleranceConfig& tol) {
    // support-projection route (authoritative)
    const Projection z = carrier(orthosupplement(e).element(), tol).ortho();
    const Projection t = carrier(e.element(), tol).ortho();

    // direct eigenvalue reading
    const EigenDecomposition ed = sym_eigen(e.element(), tol);
    const double snap = tol.rank_eps * (1.0 + e.element().frobenius_norm());
    std::vector<std::size_t> ones_cols, zeros_cols;
    for (std::size_t i = 0; i < ed.eigenvalues.size(); ++i) {
        if (ed.eigenvalues[i] >= 1.0 - snap) ones_cols.push_back(i);
        if (ed.eigenvalues[i] <= snap) zeros_cols.push_back(i);
    }
    const Projection z_direct = Projection::span_of_columns(ed.eigenvectors, ones_cols);
    const Projection t_direct = Projection::span_of_columns(ed.eigenvectors, zeros_cols);

    if (!projections_equal(z, z_direct, 1e-8) || !projections_equal(t, t_direct, 1e-8))
        throw invariant_violation(
            "largest_subprojections: support-projection route and eigenvalue reading disagree");
    return SubprojectionPair{z, t};
}

bool is_projection_free(const Effect& e, const ToleranceConfig& tol) {
    return largest_subprojections(e, tol).z.rank() == 0;
}

SymmetricElement restrict_to_corner(const SymmetricElement& a, const Projection& q,
                                    const ToleranceConfig& tol) {
    require_same_dim(a.mat(), q.mat(), "restrict_to_corner");
    if (!commutes(a, q.element(), tol))
        throw std::invalid_argument("restrict_to_corner: element does not commute with the corner projection");
    return sym(q.mat() * a.mat() * q.mat());
}

CornerBasis corner_basis(const Projection& q, const ToleranceConfig& tol) {
    const EigenDecomposition ed = sym_eigen(q.element(), tol);
    CornerBasis basis;
    basis.ambient_dim = q.dim();
    // eigenvalues ascending: the rank(q) trailing columns span range(q)
    for (std::size_t i = q.dim() - q.rank(); i < q.dim(); ++i)
        basis.columns.push_back(column(ed.eigenvectors, i));
    return basis;
}

SymmetricElement compress(const SymmetricElement& a, const CornerBasis& basis) {
    const std::size_t m = basis.columns.size();
    if (m == 0) throw std::invalid_argument("compress: empty corner basis");
    Matrix c(m);
    for (std::size_t r = 0; r < m; ++r) {
        // w = a * column r
        std::vector<double> w(basis.ambient_dim, 0.0);
        for (std::size_t i = 0; i < basis.ambient_dim; ++i)
            for (std::size_t j = 0; j < basis.ambient_dim; ++j)
                w[i] += a(i, j) * basis.columns[r][j];
        for (std::size_t s = 0; s < m; ++s) {
            double dot = 0.0;
            for (std::size_t i = 0; i < basis.ambient_dim; ++i)
                dot += basis.columns[s][i] * w[i];
            c(s, r) = dot;
        }
    }
    return SymmetricElement::symmetrized(c);
}

SymmetricElement lift(const SymmetricElement& c, const CornerBasis& basis) {
    const std::size_t m = basis.columns.size();
    if (c.dim() != m)
        throw std::invalid_argument("lift: corner element dimension does not match basis");
    Matrix a(basis.ambient_dim);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t s = 0; s < m; ++s) {
            const double crs = c(r, s);
            if (crs == 0.0) continue;
            for (std::size_t i = 0; i < basis.ambient_dim; ++i) {
                const double bri = basis.columns[r][i];
                if (bri == 0.0) continue;
                for (std::size_t j = 0; j < basis.ambient_dim; ++j)
                    a(i, j) += crs * bri * basis.columns[s][j];
            }
        }
    }
    return SymmetricElement::symmetrized(a);
}

} // namespace synalg
