#include "synalg/projection.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "synalg/errors.hpp"

namespace synalg {

Projection trusted_projection(SymmetricElement e, std::size_t rank) {
    return Projection(std::move(e), rank);
}

Projection Projection::checked(const SymmetricElement& a, const ToleranceConfig& tol) {
    const EigenDecomposition ed = sym_eigen(a, tol);
    const double snap = tol.rank_eps * (1.0 + a.frobenius_norm());

    std::vector<std::size_t> ones;
    for (std::size_t i = 0; i < ed.eigenvalues.size(); ++i) {
        const double lam = ed.eigenvalues[i];
        if (std::fabs(lam) <= snap) continue;
        if (std::fabs(lam - 1.0) <= snap) {
            ones.push_back(i);
            continue;
        }
        throw invariant_violation("Projection: spectrum entry " + std::to_string(lam) +
                                  " is not within tolerance of {0,1}");
    }

    Projection p = span_of_columns(ed.eigenvectors, ones);
    const double trace_gap = std::fabs(p.e_.trace() - static_cast<double>(p.rank_));
    if (trace_gap >= 0.01)
        throw invariant_violation("Projection: trace " + std::to_string(p.e_.trace()) +
                                  " is not near the rank " + std::to_string(p.rank_));
    return p;
}

Projection Projection::zero(std::size_t n) {
    return Projection(SymmetricElement::zero(n), 0);
}

Projection Projection::identity(std::size_t n) {
    return Projection(SymmetricElement::identity(n), n);
}

Projection Projection::onto_line(std::span<const double> v) {
    double norm2 = 0.0;
    for (double x : v) norm2 += x * x;
    if (!(norm2 > 0.0))
        throw std::invalid_argument("Projection::onto_line: zero vector");
    Matrix m = outer(v);
    m *= 1.0 / norm2;
    return Projection(SymmetricElement::symmetrized(m), 1);
}

Projection Projection::span_of_columns(const Matrix& q, const std::vector<std::size_t>& cols) {
    Matrix m(q.dim());
    for (std::size_t c : cols) {
        for (std::size_t i = 0; i < q.dim(); ++i)
            for (std::size_t j = 0; j < q.dim(); ++j) m(i, j) += q(i, c) * q(j, c);
    }
    return Projection(SymmetricElement::symmetrized(m), cols.size());
}

Projection Projection::ortho() const {
    Matrix m = Matrix::identity(dim());
    m -= e_.mat();
    return Projection(SymmetricElement::symmetrized(m), dim() - rank_);
}

bool projections_equal(const Projection& a, const Projection& b, double tol_abs) {
    if (a.dim() != b.dim() || a.rank() != b.rank()) return false;
    return max_abs_diff(a.mat(), b.mat()) <= tol_abs;
}

} // namespace synalg
