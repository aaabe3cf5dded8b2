#include "doctest.h"

#include <cmath>
#include <vector>

#include "synalg/effect.hpp"
#include "synalg/errors.hpp"
#include "synalg/lattice.hpp"
#include "synalg/random_pairs.hpp"

using namespace synalg;

namespace {

SymmetricElement diag(std::vector<double> d) { return SymmetricElement::diagonal(d); }

} // namespace

TEST_SUITE("effects") {

TEST_CASE("effect validation clamps and rejects") {
    CHECK_NOTHROW(Effect::checked(diag({0.0, 0.5, 1.0})));
    const Effect clamped = Effect::checked(diag({-1e-12, 1.0 + 1e-12}));
    CHECK(psd_leq(SymmetricElement::zero(2), clamped.element()));
    CHECK(psd_leq(clamped.element(), SymmetricElement::identity(2)));
    CHECK_THROWS_AS(Effect::checked(diag({1.5, 0.0})), invariant_violation);
    CHECK_THROWS_AS(Effect::checked(diag({-0.2, 0.0})), invariant_violation);

    const Projection p = Projection::identity(3);
    CHECK(max_abs_diff(Effect::from(p).mat(), Matrix::identity(3)) == 0.0);
    CHECK(Effect::zero(2).mat() == Matrix(2));
}

TEST_CASE("orthosupplement") {
    const Effect e = Effect::checked(diag({0.3, 0.7}));
    const Effect ec = orthosupplement(e);
    CHECK(max_abs_diff(ec.mat() + e.mat(), Matrix::identity(2)) < 1e-15);
    CHECK(max_abs_diff(orthosupplement(ec).mat(), e.mat()) < 1e-15);
}

TEST_CASE("largest subprojections: frozen case") {
    const Effect e = Effect::checked(diag({1.0, 1.0, 0.5, 0.0}));
    const SubprojectionPair sp = largest_subprojections(e);
    CHECK(sp.z.rank() == 2);
    CHECK(max_abs_diff(sp.z.mat(), diag({1.0, 1.0, 0.0, 0.0}).mat()) < 1e-12);
    CHECK(sp.t.rank() == 1);
    CHECK(max_abs_diff(sp.t.mat(), diag({0.0, 0.0, 0.0, 1.0}).mat()) < 1e-12);
    CHECK(!is_projection_free(e));

    const Effect interior = Effect::checked(diag({0.3, 0.7}));
    const SubprojectionPair sp2 = largest_subprojections(interior);
    CHECK(sp2.z.rank() == 0);
    CHECK(sp2.t.rank() == 0);
    CHECK(is_projection_free(interior));
}

TEST_CASE("subprojection structure on random effects") {
    Rng rng(9001);
    for (int i = 0; i < 20; ++i) {
        const std::size_t n = 4;
        const Effect e = rng.bernoulli(0.5) ? random_projection_effect(rng, n)
                                            : random_effect(rng, n);
        const SubprojectionPair sp = largest_subprojections(e);
        // z <= e <= 1 - t, and z is orthogonal to t
        CHECK(psd_leq(sp.z.element(), e.element()));
        CHECK(psd_leq(e.element(), ortho(sp.t).element()));
        CHECK((sp.z.mat() * sp.t.mat()).max_abs() < 1e-12);
        // the carrier identity (e - z)-carrier = e-carrier - z
        const Projection lhs = carrier(e.element() - sp.z.element());
        const Projection rhs =
            complement_in(carrier(e.element()), sp.z);
        CHECK(projections_equal(lhs, rhs, 1e-8));
    }
}

TEST_CASE("largest subprojection difference identity: frozen case") {
    const Effect e = Effect::checked(diag({1.0, 0.5, 0.0}));
    const SubprojectionPair sp = largest_subprojections(e);
    const SymmetricElement diff = e.element() - sp.z.element();
    const Projection c = carrier(diff);
    CHECK(max_abs_diff(c.mat(), diag({0.0, 1.0, 0.0}).mat()) < 1e-12);
    // e - e^2 = (e - z) - (e - z)^2
    const SymmetricElement lhs = e.element() - sym(e.mat() * e.mat());
    const SymmetricElement rhs = diff - sym(diff.mat() * diff.mat());
    CHECK(max_abs_diff(lhs.mat(), rhs.mat()) < 1e-14);
}

TEST_CASE("corner restriction of commuting elements") {
    const SymmetricElement a = diag({1.0, 2.0, 3.0});
    const std::vector<double> d110{1.0, 1.0, 0.0};
    const Projection q = Projection::checked(SymmetricElement::diagonal(d110));
    const SymmetricElement corner = restrict_to_corner(a, q);
    CHECK(max_abs_diff(corner.mat(), diag({1.0, 2.0, 0.0}).mat()) < 1e-14);

    const std::vector<double> v{1.0, 1.0};
    const Projection slanted = Projection::onto_line(v);
    CHECK_THROWS_AS(restrict_to_corner(SymmetricElement::diagonal(std::vector<double>{1.0, 2.0}),
                                       slanted),
                    std::invalid_argument);
}

TEST_CASE("corner coordinates round-trip") {
    Rng rng(9002);
    for (int i = 0; i < 15; ++i) {
        const std::size_t n = 5;
        const Projection q = random_projection(rng, n);
        const CornerBasis basis = corner_basis(q);
        CHECK(basis.ambient_dim == n);
        REQUIRE(basis.columns.size() == q.rank());
        // columns are orthonormal and span range(q)
        for (std::size_t a2 = 0; a2 < basis.columns.size(); ++a2)
            for (std::size_t b2 = 0; b2 <= a2; ++b2) {
                double dot = 0.0;
                for (std::size_t k = 0; k < n; ++k)
                    dot += basis.columns[a2][k] * basis.columns[b2][k];
                CHECK(std::fabs(dot - (a2 == b2 ? 1.0 : 0.0)) < 1e-12);
            }

        // compress then lift reproduces qaq for any element
        const SymmetricElement a = random_symmetric(rng, n);
        const SymmetricElement back = lift(compress(a, basis), basis);
        const SymmetricElement qaq = sym(q.mat() * a.mat() * q.mat());
        CHECK(max_abs_diff(back.mat(), qaq.mat()) < 1e-12);
        CHECK(compress(a, basis).dim() == q.rank());
    }
}

} // TEST_SUITE
