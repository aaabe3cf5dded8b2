#include "synalg/lattice.hpp"

#include <array>
#include <string>
#include <vector>

#include "synalg/errors.hpp"

namespace synalg {

namespace {

// Projection onto the orthogonal complement of the span of an orthonormal set.
Projection co_span_projection(const std::vector<std::vector<double>>& null_basis,
                              std::size_t n) {
    Matrix m = Matrix::identity(n);
    for (const auto& v : null_basis)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) -= v[i] * v[j];
    return trusted_projection(SymmetricElement::symmetrized(m), n - null_basis.size());
}

Matrix dyad(const std::vector<double>& v) {
    Matrix d(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) d(i, j) = v[i] * v[j];
    return d;
}

} // namespace

Projection join(const Projection& p, const Projection& q, const ToleranceConfig& tol) {
    require_same_dim(p.mat(), q.mat(), "join");
    const std::array<Matrix, 2> members{p.mat(), q.mat()};
    return co_span_projection(joint_null_basis(members, tol), p.dim());
}

Projection meet(const Projection& p, const Projection& q, const ToleranceConfig& tol) {
    require_same_dim(p.mat(), q.mat(), "meet");
    return join(p.ortho(), q.ortho(), tol).ortho();
}

Projection ortho(const Projection& p) { return p.ortho(); }

Projection complement_in(const Projection& unit, const Projection& x) {
    require_same_dim(unit.mat(), x.mat(), "complement_in");
    if (x.rank() > unit.rank())
        throw std::invalid_argument("complement_in: rank exceeds the unit's rank");
    return trusted_projection(unit.element() - x.element(), unit.rank() - x.rank());
}

bool proj_leq(const Projection& p, const Projection& q, const ToleranceConfig& tol) {
    return psd_leq(p.element(), q.element(), tol);
}

bool is_atom(const Projection& p) { return p.rank() == 1; }

bool exchanged_by(const Projection& p, const Projection& q, const Symmetry& u,
                  const ToleranceConfig& tol) {
    require_same_dim(p.mat(), q.mat(), "exchanged_by");
    require_same_dim(p.mat(), u.mat(), "exchanged_by");
    const SymmetricElement conj = sym(u.mat() * p.mat() * u.mat());
    const double scale = 1.0 + p.element().frobenius_norm();
    return max_abs_diff(conj.mat(), q.mat()) <= tol.comm_eps * scale;
}

Projection marsden_commutator(const Projection& p, const Projection& q,
                              const ToleranceConfig& tol) {
    require_same_dim(p.mat(), q.mat(), "marsden_commutator");
    const Projection pc = p.ortho(), qc = q.ortho();
    const Projection a = meet(join(p, q, tol), join(p, qc, tol), tol);
    const Projection b = meet(join(pc, q, tol), join(pc, qc, tol), tol);
    return meet(a, b, tol);
}

Projection finite_set_commutator(std::span<const Projection> f, const ToleranceConfig& tol) {
    std::vector<Projection> members;
    for (const Projection& w : f) {
        if (!members.empty()) require_same_dim(members.front().mat(), w.mat(), "finite_set_commutator");
        if (w.rank() == 0 || w.rank() == w.dim()) continue; // trivial members drop out
        members.push_back(w);
    }
    if (f.empty()) throw std::invalid_argument("finite_set_commutator: empty input has no dimension");
    const std::size_t n = f.front().dim();
    if (members.empty()) return Projection::zero(n);
    if (members.size() > 12)
        throw resource_limit_exceeded("finite_set_commutator: " + std::to_string(members.size()) +
                                      " nontrivial members exceed the enumeration cap of 12");

    // The meet over all sign vectors is taken by De Morgan: every leaf join
    // contributes the directions orthogonal to it, and the commutator is the
    // complement of their collected span. Both the leaf and the final rank
    // decisions go through joint_null_basis, whose per-member residual test
    // stays reliable when a leaf join is only marginally non-degenerate.
    std::vector<Matrix> pos, neg;
    pos.reserve(members.size());
    neg.reserve(members.size());
    for (const Projection& w : members) {
        pos.push_back(w.mat());
        neg.push_back(w.ortho().mat());
    }

    std::vector<Matrix> chosen(members.size(), Matrix(n));
    std::vector<Matrix> complement_dyads;

    auto recurse = [&](auto&& self, std::size_t level) -> void {
        if (level == members.size()) {
            for (const auto& v : joint_null_basis(chosen, tol))
                complement_dyads.push_back(dyad(v));
            return;
        }
        chosen[level] = pos[level];
        self(self, level + 1);
        chosen[level] = neg[level];
        self(self, level + 1);
    };
    recurse(recurse, 0);

    if (complement_dyads.empty()) return Projection::identity(n);

    const std::vector<std::vector<double>> r_basis = joint_null_basis(complement_dyads, tol);
    Matrix m(n);
    for (const auto& u : r_basis)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) += u[i] * u[j];
    return trusted_projection(SymmetricElement::symmetrized(m), r_basis.size());
}

} // namespace synalg
