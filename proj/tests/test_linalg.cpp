#include "doctest.h"

#include <cmath>
#include <vector>

#include "support/oracles.hpp"
#include "synalg/errors.hpp"
#include "synalg/linalg.hpp"
#include "synalg/projection.hpp"

using namespace synalg;

namespace {

Matrix mat2(double a, double b, double c, double d) {
    Matrix m(2);
    m(0, 0) = a;
    m(0, 1) = b;
    m(1, 0) = c;
    m(1, 1) = d;
    return m;
}

SymmetricElement diag3(double a, double b, double c) {
    const std::vector<double> d{a, b, c};
    return SymmetricElement::diagonal(d);
}

} // namespace

TEST_SUITE("linalg") {

TEST_CASE("matrix arithmetic and norms") {
    const Matrix id = Matrix::identity(3);
    CHECK(id.trace() == 3.0);
    CHECK(id.frobenius_norm() == doctest::Approx(std::sqrt(3.0)));

    const std::vector<double> d{1.0, -2.0, 0.5};
    const Matrix dg = Matrix::diagonal(d);
    CHECK(dg(1, 1) == -2.0);
    CHECK(dg.max_abs() == 2.0);

    const std::vector<double> v{3.0, 4.0};
    const Matrix vv = outer(v);
    CHECK(vv(0, 1) == 12.0);
    CHECK(vv.transpose() == vv);
    CHECK(column(vv, 1) == std::vector<double>{12.0, 16.0});

    const Matrix prod = mat2(0, 1, 1, 0) * mat2(1, 0, 0, 2);
    CHECK(prod == mat2(0, 2, 1, 0));
    CHECK(max_abs_diff(prod, mat2(0, 2, 1, 0)) == 0.0);
    CHECK_THROWS_AS(require_same_dim(Matrix(2), Matrix(3), "test"), std::invalid_argument);
}

TEST_CASE("symmetric elements enforce exact symmetry") {
    Matrix m(2);
    m(0, 1) = 1.0;
    m(1, 0) = 3.0;
    const SymmetricElement a = sym(m);
    CHECK(a(0, 1) == a(1, 0));
    CHECK(a(0, 1) == 2.0);
    CHECK(SymmetricElement::identity(2).mat() == Matrix::identity(2));
    CHECK(SymmetricElement::zero(2).mat() == Matrix(2));
}

TEST_CASE("tolerance validation") {
    ToleranceConfig tol;
    CHECK_NOTHROW(tol.validate());
    tol.rank_eps = 0.0;
    CHECK_THROWS_AS(tol.validate(), std::invalid_argument);
    tol.rank_eps = 0.6;
    CHECK_THROWS_AS(tol.validate(), std::invalid_argument);
    tol = {};
    tol.comm_eps = -1e-9;
    CHECK_THROWS_AS(tol.validate(), std::invalid_argument);
}

TEST_CASE("eigendecomposition: frozen diagonal case") {
    const EigenDecomposition ed = sym_eigen(diag3(3.0, 1.0, 2.0));
    REQUIRE(ed.eigenvalues.size() == 3);
    CHECK(ed.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ed.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(ed.eigenvalues[2] == doctest::Approx(3.0).epsilon(1e-14));
    // ascending order pairs eigenvalue 1 with basis vector e2, etc.
    CHECK(ed.eigenvectors(1, 0) == doctest::Approx(1.0));
    CHECK(ed.eigenvectors(2, 1) == doctest::Approx(1.0));
    CHECK(ed.eigenvectors(0, 2) == doctest::Approx(1.0));
}

TEST_CASE("eigendecomposition: frozen off-diagonal case") {
    const SymmetricElement x = sym(mat2(0, 1, 1, 0));
    const EigenDecomposition ed = sym_eigen(x);
    CHECK(ed.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(ed.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
    const double r = 1.0 / std::sqrt(2.0);
    // sign convention: first nonzero component positive
    CHECK(ed.eigenvectors(0, 0) == doctest::Approx(r));
    CHECK(ed.eigenvectors(1, 0) == doctest::Approx(-r));
    CHECK(ed.eigenvectors(0, 1) == doctest::Approx(r));
    CHECK(ed.eigenvectors(1, 1) == doctest::Approx(r));
}

TEST_CASE("eigendecomposition reconstructs, stays orthonormal, repeats bitwise") {
    Matrix m(3);
    m(0, 0) = 2.0;
    m(0, 1) = m(1, 0) = 1.0;
    m(1, 1) = 3.0;
    m(2, 2) = -1.0;
    m(1, 2) = m(2, 1) = 0.5;
    const SymmetricElement a = sym(m);
    const EigenDecomposition ed = sym_eigen(a);
    const SymmetricElement back = from_eigenpairs(ed.eigenvalues, ed.eigenvectors);
    CHECK(max_abs_diff(back.mat(), a.mat()) < 1e-13);

    // orthonormality of the eigenvector basis
    const Matrix gram = ed.eigenvectors.transpose() * ed.eigenvectors;
    CHECK(max_abs_diff(gram, Matrix::identity(3)) < 1e-14);

    // bitwise determinism
    const EigenDecomposition ed2 = sym_eigen(a);
    CHECK(ed.eigenvalues == ed2.eigenvalues);
    CHECK(ed.eigenvectors == ed2.eigenvectors);
}

TEST_CASE("scalar functional calculus") {
    const SymmetricElement a = diag3(1.0, 2.0, 3.0);
    const SymmetricElement sq = apply_scalar_function(a, [](double x) { return x * x; });
    CHECK(max_abs_diff(sq.mat(), diag3(1.0, 4.0, 9.0).mat()) < 1e-14);

    const SymmetricElement neg = diag3(-1.0, 1.0, 4.0);
    CHECK_THROWS_AS(apply_scalar_function(neg, [](double x) { return std::sqrt(x); }),
                    std::domain_error);
}

TEST_CASE("Loewner order") {
    const SymmetricElement zero2 = SymmetricElement::zero(2);
    const SymmetricElement pos = sym(mat2(1, 0, 0, 0));
    CHECK(psd_leq(zero2, pos));
    CHECK(!psd_leq(pos, zero2));
    // tolerance slack: a <= a - tiny still passes
    const SymmetricElement nudged =
        sym(mat2(1.0 - 1e-12, 0, 0, -1e-12));
    CHECK(psd_leq(pos, nudged));
    // incomparable pair: neither direction
    const SymmetricElement other = sym(mat2(0, 0, 0, 1));
    CHECK(!psd_leq(pos, other));
    CHECK(!psd_leq(other, pos));
}

TEST_CASE("commutation residual is the operator norm of the bracket") {
    const SymmetricElement x = sym(mat2(0, 1, 1, 0));
    const SymmetricElement d = sym(mat2(1, 0, 0, 0));
    // xd - dx has singular values 1, so the residual is exactly 1
    CHECK(commutation_residual(x, d) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(!commutes(x, d));
    CHECK(commutes(d, sym(mat2(2, 0, 0, 5))));
}

TEST_CASE("operator norm") {
    const std::vector<double> d{3.0, -4.0};
    CHECK(operator_norm(Matrix::diagonal(d)) == doctest::Approx(4.0).epsilon(1e-12));
    const std::vector<double> v{3.0, 4.0};
    CHECK(operator_norm(outer(v)) == doctest::Approx(25.0).epsilon(1e-12));
}

TEST_CASE("joint null basis: exact cases") {
    const std::vector<double> e1{1.0, 0.0, 0.0};
    const std::vector<double> e2{0.0, 1.0, 0.0};
    const std::vector<Matrix> members{outer(e1), outer(e2)};
    const auto basis = joint_null_basis(members);
    REQUIRE(basis.size() == 1);
    CHECK(basis[0][0] == doctest::Approx(0.0));
    CHECK(basis[0][1] == doctest::Approx(0.0));
    CHECK(basis[0][2] == doctest::Approx(1.0));

    const std::vector<Matrix> full{Matrix::identity(3)};
    CHECK(joint_null_basis(full).empty());

    const std::vector<Matrix> none{Matrix(3)};
    CHECK(joint_null_basis(none).size() == 3);

    CHECK_THROWS_AS(joint_null_basis({}), std::invalid_argument);
}

TEST_CASE("joint null basis resolves near-parallel ranges at angle level") {
    // Two lines at angle 1e-5: the summed operator has an eigenvalue of
    // order 1e-10 (the squared angle, below rank_eps), but the union still
    // spans the plane and the joint null space must come back empty.
    const double theta = 1e-5;
    const std::vector<double> u{1.0, 0.0};
    const std::vector<double> w{std::cos(theta), std::sin(theta)};
    const std::vector<Matrix> members{outer(u), outer(w)};
    CHECK(joint_null_basis(members).empty());

    // the same pair with an exactly repeated line keeps its true null space
    const std::vector<Matrix> repeated{outer(u), outer(u)};
    REQUIRE(joint_null_basis(repeated).size() == 1);
}

TEST_CASE("square root oracle agrees with the spectral route") {
    Matrix m(3);
    m(0, 0) = 2.0;
    m(0, 1) = m(1, 0) = 0.7;
    m(1, 1) = 1.5;
    m(2, 2) = 0.25;
    const SymmetricElement a = sym(m); // strictly positive definite
    const SymmetricElement lib = apply_scalar_function(a, [](double x) {
        return std::sqrt(std::max(0.0, x));
    });
    const Matrix ns = synalg::testing::newton_schulz_sqrt(a.mat());
    CHECK(max_abs_diff(lib.mat(), ns) < 1e-10);
}

} // TEST_SUITE
