#include "synalg/element.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "synalg/errors.hpp"

namespace synalg {

Projection carrier(const SymmetricElement& a, const ToleranceConfig& tol) {
    const EigenDecomposition ed = sym_eigen(a, tol);
    const double thr = tol.rank_eps * (1.0 + a.frobenius_norm());
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < ed.eigenvalues.size(); ++i)
        if (std::fabs(ed.eigenvalues[i]) > thr) cols.push_back(i);
    return Projection::span_of_columns(ed.eigenvectors, cols);
}

SymmetricElement sqrt_psd(const SymmetricElement& a, const ToleranceConfig& tol) {
    const EigenDecomposition ed = sym_eigen(a, tol);
    const double floor = -tol.psd_eps * (1.0 + a.frobenius_norm());
    std::vector<double> roots(ed.eigenvalues.size());
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const double lam = ed.eigenvalues[i];
        if (lam < floor)
            throw std::domain_error("sqrt_psd: eigenvalue " + std::to_string(lam) +
                                    " below the positivity tolerance");
        roots[i] = lam > 0.0 ? std::sqrt(lam) : 0.0;
    }
    return from_eigenpairs(roots, ed.eigenvectors);
}

SymmetricElement abs_value(const SymmetricElement& a, const ToleranceConfig& tol) {
    const EigenDecomposition ed = sym_eigen(a, tol);
    std::vector<double> mags(ed.eigenvalues.size());
    for (std::size_t i = 0; i < mags.size(); ++i) mags[i] = std::fabs(ed.eigenvalues[i]);
    return from_eigenpairs(mags, ed.eigenvectors);
}

SymmetricElement positive_part(const SymmetricElement& a, const ToleranceConfig& tol) {
    const EigenDecomposition ed = sym_eigen(a, tol);
    const double thr = tol.rank_eps * (1.0 + a.frobenius_norm());
    std::vector<double> pos(ed.eigenvalues.size());
    for (std::size_t i = 0; i < pos.size(); ++i)
        pos[i] = ed.eigenvalues[i] > thr ? ed.eigenvalues[i] : 0.0;
    return from_eigenpairs(pos, ed.eigenvectors);
}

PartialSymmetry signum(const SymmetricElement& a, const ToleranceConfig& tol) {
    const EigenDecomposition ed = sym_eigen(a, tol);
    const double thr = tol.rank_eps * (1.0 + a.frobenius_norm());
    std::vector<double> signs(ed.eigenvalues.size());
    std::vector<std::size_t> support_cols;
    for (std::size_t i = 0; i < signs.size(); ++i) {
        if (ed.eigenvalues[i] > thr) {
            signs[i] = 1.0;
            support_cols.push_back(i);
        } else if (ed.eigenvalues[i] < -thr) {
            signs[i] = -1.0;
            support_cols.push_back(i);
        }
    }
    return PartialSymmetry{from_eigenpairs(signs, ed.eigenvectors),
                           Projection::span_of_columns(ed.eigenvectors, support_cols)};
}

Symmetry Symmetry::checked(const SymmetricElement& u, const ToleranceConfig& tol) {
    const Matrix sq = u.mat() * u.mat();
    const double gap = max_abs_diff(sq, Matrix::identity(u.dim()));
    if (gap > tol.comm_eps * (1.0 + u.frobenius_norm()))
        throw invariant_violation("Symmetry: u*u differs from the identity by " +
                                  std::to_string(gap));
    return Symmetry{u};
}

Symmetry canonical_extension(const SymmetricElement& t, const ToleranceConfig& tol) {
    const EigenDecomposition ed = sym_eigen(t, tol);
    const double snap = tol.rank_eps * (1.0 + t.frobenius_norm());
    std::vector<double> ext(ed.eigenvalues.size());
    for (std::size_t i = 0; i < ext.size(); ++i) {
        const double lam = ed.eigenvalues[i];
        if (std::fabs(lam) <= snap)
            ext[i] = 1.0; // identity off the support
        else if (std::fabs(lam - 1.0) <= snap)
            ext[i] = 1.0;
        else if (std::fabs(lam + 1.0) <= snap)
            ext[i] = -1.0;
        else
            throw std::invalid_argument("canonical_extension: spectrum entry " +
                                        std::to_string(lam) +
                                        " is not within tolerance of {-1,0,1}");
    }
    return Symmetry{from_eigenpairs(ext, ed.eigenvectors)};
}

PolarDecomposition polar_decompose(const SymmetricElement& a, const ToleranceConfig& tol) {
    const EigenDecomposition ed = sym_eigen(a, tol);
    const double thr = tol.rank_eps * (1.0 + a.frobenius_norm());
    std::vector<double> mags(ed.eigenvalues.size());
    std::vector<double> ext(ed.eigenvalues.size());
    for (std::size_t i = 0; i < mags.size(); ++i) {
        const double lam = ed.eigenvalues[i];
        mags[i] = std::fabs(lam);
        ext[i] = lam < -thr ? -1.0 : 1.0;
    }
    return PolarDecomposition{from_eigenpairs(mags, ed.eigenvectors),
                              Symmetry{from_eigenpairs(ext, ed.eigenvectors)}};
}

SpectralResolution spectral_resolution(const SymmetricElement& a, const ToleranceConfig& tol) {
    const EigenDecomposition ed = sym_eigen(a, tol);
    const std::size_t n = a.dim();
    const double merge_gap = 2.0 * tol.rank_eps * (1.0 + a.frobenius_norm());

    SpectralResolution res;
    std::vector<std::size_t> cumulative;
    std::size_t i = 0;
    while (i < n) {
        // group eigenvalues whose adjacent gaps stay below the merge threshold
        std::size_t j = i;
        while (j + 1 < n && ed.eigenvalues[j + 1] - ed.eigenvalues[j] < merge_gap) ++j;
        for (std::size_t c = i; c <= j; ++c) cumulative.push_back(c);
        res.thresholds.push_back(ed.eigenvalues[j]); // group maximum
        res.cuts.push_back(Projection::span_of_columns(ed.eigenvectors, cumulative));
        i = j + 1;
    }

    // Cross-check every cut against 1 - ((a - lambda)⁺)°.
    const SymmetricElement one = SymmetricElement::identity(n);
    for (std::size_t g = 0; g < res.thresholds.size(); ++g) {
        const SymmetricElement shifted = a - res.thresholds[g] * one;
        const Projection alt = carrier(positive_part(shifted, tol), tol).ortho();
        if (!projections_equal(res.cuts[g], alt, 1e-8))
            throw invariant_violation(
                "spectral_resolution: eigenspace cut and support-projection formula disagree "
                "at threshold " + std::to_string(res.thresholds[g]));
    }
    return res;
}

PeirceDecomposition peirce_decompose(const SymmetricElement& a, const Projection& p,
                                     const ToleranceConfig& tol) {
    (void)tol;
    require_same_dim(a.mat(), p.mat(), "peirce_decompose");
    const Matrix& pm = p.mat();
    const Matrix pc = p.ortho().mat();
    return PeirceDecomposition{sym(pm * a.mat() * pm),
                               sym(pm * a.mat() * pc + pc * a.mat() * pm),
                               sym(pc * a.mat() * pc)};
}

} // namespace synalg
