#include "synalg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "synalg/errors.hpp"

namespace synalg {

void ToleranceConfig::validate() const {
    auto positive = [](double x, const char* name) {
        if (!(x > 0.0))
            throw std::invalid_argument(std::string("ToleranceConfig: ") + name +
                                        " must be strictly positive");
    };
    positive(rank_eps, "rank_eps");
    positive(comm_eps, "comm_eps");
    positive(psd_eps, "psd_eps");
    positive(eig_off_eps, "eig_off_eps");
    if (!(rank_eps < 0.5))
        throw std::invalid_argument("ToleranceConfig: rank_eps must be < 0.5");
}

SymmetricElement SymmetricElement::symmetrized(const Matrix& m) {
    Matrix s(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i) {
        s(i, i) = m(i, i);
        for (std::size_t j = i + 1; j < m.dim(); ++j) {
            const double v = 0.5 * (m(i, j) + m(j, i));
            s(i, j) = v;
            s(j, i) = v;
        }
    }
    return SymmetricElement(std::move(s), exact_tag{});
}

SymmetricElement SymmetricElement::zero(std::size_t n) {
    return SymmetricElement(Matrix(n), exact_tag{});
}

SymmetricElement SymmetricElement::identity(std::size_t n) {
    return SymmetricElement(Matrix::identity(n), exact_tag{});
}

SymmetricElement SymmetricElement::diagonal(std::span<const double> d) {
    return SymmetricElement(Matrix::diagonal(d), exact_tag{});
}

SymmetricElement operator+(const SymmetricElement& a, const SymmetricElement& b) {
    return SymmetricElement(a.m_ + b.m_, SymmetricElement::exact_tag{});
}

SymmetricElement operator-(const SymmetricElement& a, const SymmetricElement& b) {
    return SymmetricElement(a.m_ - b.m_, SymmetricElement::exact_tag{});
}

SymmetricElement operator*(double s, const SymmetricElement& a) {
    return SymmetricElement(s * a.m_, SymmetricElement::exact_tag{});
}

SymmetricElement operator-(const SymmetricElement& a) {
    return SymmetricElement(-a.m_, SymmetricElement::exact_tag{});
}

SymmetricElement sym(const Matrix& m) { return SymmetricElement::symmetrized(m); }

// ====================== Jacobi eigensolver ======================

namespace {

double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = i + 1; j < a.dim(); ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
}

// One Jacobi rotation annihilating a(p,q); updates a (kept symmetric) and
// accumulates the rotation into the columns p, q of v.
void jacobi_rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
    const double apq = a(p, q);
    if (apq == 0.0) return;

    const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
    double t;
    if (std::fabs(theta) > 1e150) {
        t = 1.0 / (2.0 * theta); // avoid theta*theta overflow
    } else {
        t = 1.0 / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
    }
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    const std::size_t n = a.dim();
    const double app = a(p, p), aqq = a(q, q);
    a(p, p) = app - t * apq;
    a(q, q) = aqq + t * apq;
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == p || i == q) continue;
        const double aip = a(i, p), aiq = a(i, q);
        a(i, p) = c * aip - s * aiq;
        a(p, i) = a(i, p);
        a(i, q) = s * aip + c * aiq;
        a(q, i) = a(i, q);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double vip = v(i, p), viq = v(i, q);
        v(i, p) = c * vip - s * viq;
        v(i, q) = s * vip + c * viq;
    }
}

// Flip eigenvector signs so the first component of magnitude above the noise
// floor is positive; makes the decomposition deterministic.
void fix_column_signs(Matrix& q) {
    const std::size_t n = q.dim();
    for (std::size_t j = 0; j < n; ++j) {
        double lead = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::fabs(q(i, j)) > 1e-10) {
                lead = q(i, j);
                break;
            }
        }
        if (lead < 0.0)
            for (std::size_t i = 0; i < n; ++i) q(i, j) = -q(i, j);
    }
}

} // namespace

EigenDecomposition sym_eigen(const SymmetricElement& a, const ToleranceConfig& tol) {
    tol.validate();
    const std::size_t n = a.dim();
    if (n == 0) throw std::invalid_argument("sym_eigen: empty matrix");

    Matrix work = a.mat();
    Matrix v = Matrix::identity(n);
    const double norm = work.frobenius_norm();
    const double target = tol.eig_off_eps * norm;

    if (norm > 0.0) {
        constexpr int max_sweeps = 100;
        bool converged = false;
        for (int sweep = 0; sweep < max_sweeps; ++sweep) {
            if (off_diagonal_norm(work) <= target) {
                converged = true;
                break;
            }
            for (std::size_t p = 0; p + 1 < n; ++p)
                for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(work, v, p, q);
        }
        if (!converged && off_diagonal_norm(work) > target)
            throw numerical_failure("sym_eigen: Jacobi sweeps did not converge",
                                    off_diagonal_norm(work));
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return work(i, i) < work(j, j);
    });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = Matrix(n);
    for (std::size_t j = 0; j < n; ++j) {
        out.eigenvalues[j] = work(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, order[j]);
    }
    fix_column_signs(out.eigenvectors);
    return out;
}

SymmetricElement from_eigenpairs(std::span<const double> values, const Matrix& q) {
    if (values.size() != q.dim())
        throw std::invalid_argument("from_eigenpairs: value count does not match dimension");
    const std::size_t n = q.dim();
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += values[k] * q(i, k) * q(j, k);
            m(i, j) = s;
            m(j, i) = s;
        }
    }
    return SymmetricElement::symmetrized(m);
}

SymmetricElement apply_scalar_function(const SymmetricElement& a,
                                       const std::function<double(double)>& f,
                                       const ToleranceConfig& tol) {
    const EigenDecomposition ed = sym_eigen(a, tol);
    std::vector<double> mapped(ed.eigenvalues.size());
    for (std::size_t i = 0; i < mapped.size(); ++i) {
        mapped[i] = f(ed.eigenvalues[i]);
        if (!std::isfinite(mapped[i]))
            throw std::domain_error("apply_scalar_function: function not defined at eigenvalue " +
                                    std::to_string(ed.eigenvalues[i]));
    }
    return from_eigenpairs(mapped, ed.eigenvectors);
}

bool psd_leq(const SymmetricElement& a, const SymmetricElement& b,
             const ToleranceConfig& tol) {
    require_same_dim(a.mat(), b.mat(), "psd_leq");
    const EigenDecomposition ed = sym_eigen(b - a, tol);
    const double lo = ed.eigenvalues.front();
    const double hi = ed.eigenvalues.back();
    const double scale = 1.0 + std::max(std::fabs(lo), std::fabs(hi));
    return lo >= -tol.psd_eps * scale;
}

double operator_norm(const Matrix& m, const ToleranceConfig& tol) {
    if (m.dim() == 0) return 0.0;
    const SymmetricElement gram = sym(m.transpose() * m);
    const EigenDecomposition ed = sym_eigen(gram, tol);
    return std::sqrt(std::max(0.0, ed.eigenvalues.back()));
}

double commutation_residual(const SymmetricElement& a, const SymmetricElement& b,
                            const ToleranceConfig& tol) {
    require_same_dim(a.mat(), b.mat(), "commutation_residual");
    return operator_norm(a.mat() * b.mat() - b.mat() * a.mat(), tol);
}

bool commutes(const SymmetricElement& a, const SymmetricElement& b,
              const ToleranceConfig& tol) {
    const double scale = 1.0 + a.frobenius_norm() * b.frobenius_norm();
    return commutation_residual(a, b, tol) <= tol.comm_eps * scale;
}

std::vector<std::vector<double>> joint_null_basis(std::span<const Matrix> summands,
                                                  const ToleranceConfig& tol) {
    if (summands.empty())
        throw std::invalid_argument("joint_null_basis: empty family has no dimension");
    const std::size_t n = summands.front().dim();
    Matrix s(n);
    for (const Matrix& w : summands) {
        if (w.dim() != n) throw std::invalid_argument("joint_null_basis: dimension mismatch");
        s += w;
    }
    const EigenDecomposition ed = sym_eigen(SymmetricElement::symmetrized(s), tol);
    const double lam_max = std::fabs(ed.eigenvalues.back());
    // Generous candidate cutoff: a true common-null direction has eigenvalue
    // at the roundoff floor, while any accepted direction must satisfy
    // lambda = sum ||w v||^2 <= (#members) * fine^2, far below this cutoff.
    const double coarse = 1e-6 * (1.0 + lam_max);
    const double fine = 2.0 * tol.rank_eps;
    std::vector<std::vector<double>> basis;
    for (std::size_t i = 0; i < n && ed.eigenvalues[i] <= coarse; ++i) {
        const std::vector<double> v = column(ed.eigenvectors, i);
        double rho = 0.0;
        for (const Matrix& w : summands) {
            double norm2 = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                double acc = 0.0;
                for (std::size_t c = 0; c < n; ++c) acc += w(r, c) * v[c];
                norm2 += acc * acc;
            }
            rho = std::max(rho, std::sqrt(norm2));
        }
        if (rho <= fine) basis.push_back(v);
    }
    return basis;
}

} // namespace synalg
