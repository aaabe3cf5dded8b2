#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "synalg/infimum.hpp"
#include "synalg/random_pairs.hpp"
#include "support/oracles.hpp"

using namespace synalg;

namespace {

Effect diag_effect(std::vector<double> d) {
    return Effect::checked(SymmetricElement::diagonal(d));
}

} // namespace

TEST_SUITE("infimum") {

TEST_CASE("diagonal-line instance: closed-form infimum entries") {
    // p onto (1,1,1)/sqrt(3), e = diag(1/4, 1/2, 3/4): alpha = 1/2 and the
    // infimum with p⊥ has exact rational entries.
    const Projection p = Projection::onto_line(std::vector<double>{1.0, 1.0, 1.0});
    const Effect e = diag_effect({0.25, 0.5, 0.75});

    CHECK(atom_mean(e, p) == doctest::Approx(0.5).epsilon(1e-12));

    const AtomInfimumRecord rec = inf_with_atom_complement(e, p);
    CHECK(rec.branch == AtomInfimumRecord::Branch::general);
    CHECK(rec.alpha == doctest::Approx(0.5).epsilon(1e-12));
    REQUIRE(rec.a_element.has_value());

    const Matrix& m = rec.infimum.mat();
    CHECK(m(0, 0) == doctest::Approx(5.0 / 24.0).epsilon(1e-12));
    CHECK(m(1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(m(2, 2) == doctest::Approx(3.0 / 8.0).epsilon(1e-12));
    CHECK(m(0, 1) == doctest::Approx(-1.0 / 12.0).epsilon(1e-12));
    CHECK(m(0, 2) == doctest::Approx(-1.0 / 8.0).epsilon(1e-12));
    CHECK(m(1, 2) == doctest::Approx(-1.0 / 4.0).epsilon(1e-12));
    CHECK(rec.infimum.element().trace() == doctest::Approx(11.0 / 12.0).epsilon(1e-12));

    // a = alpha⁻¹(pep⊥ + p⊥ep) satisfies alpha² a² = b² and (ap)² = 0
    const CBSDecomposition d = cbs_decompose(p, e);
    const Matrix a = rec.a_element->mat();
    const Matrix b2 = sym(d.b.mat() * d.b.mat()).mat();
    CHECK(max_abs_diff(rec.alpha * rec.alpha * (a * a), b2) < 1e-12);
    const Matrix ap = a * p.mat();
    CHECK((ap * ap).frobenius_norm() < 1e-12);
}

TEST_CASE("orthogonal atom: the infimum is e itself") {
    const Effect e = diag_effect({0.0, 0.5});
    const Projection p = Projection::onto_line(std::vector<double>{1.0, 0.0});
    const AtomInfimumRecord rec = inf_with_atom_complement(e, p);
    CHECK(rec.branch == AtomInfimumRecord::Branch::alpha_zero);
    CHECK(rec.alpha < 1e-9);
    CHECK_FALSE(rec.a_element.has_value());
    CHECK(max_abs_diff(rec.infimum.mat(), e.mat()) < 1e-12);
}

TEST_CASE("bisection oracle on hand-checked instances") {
    // e = diag(1/2, 1/4), w onto (1,1)/sqrt(2): largest beta with beta w <= e
    // is 1 / (wᵀ e⁻¹ w) = 1 / (2 + 4)/2 = 1/3
    const Effect e = diag_effect({0.5, 0.25});
    const Projection w = Projection::onto_line(std::vector<double>{1.0, 1.0});
    CHECK(atom_lower_bound_oracle(e, w) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    CHECK(testing::oracle_atom_beta(e, std::vector<double>{1.0 / std::sqrt(2.0),
                                                           1.0 / std::sqrt(2.0)}) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    // against the identity every atom fits with beta = 1, returned exactly
    CHECK(atom_lower_bound_oracle(Effect::identity(2), w) == 1.0);
}

TEST_CASE("oracle agreement on random full-rank effects") {
    Rng rng(30001);
    for (int i = 0; i < 25; ++i) {
        const std::size_t n = 2 + rng.below(4);
        const Effect e = Effect::checked(
            sym(0.98 * random_psd(rng, n, n, 0.1, 1.0).mat() + 0.01 * Matrix::identity(n)));
        const std::vector<double> v = random_unit_vector(rng, n);
        const Projection w = Projection::onto_line(v);
        const double via_bisection = atom_lower_bound_oracle(e, w);
        const double via_inverse = testing::oracle_atom_beta(e, v);
        CHECK(std::abs(via_bisection - via_inverse) < 1e-9);
    }
}

TEST_CASE("infimum with a projection: fixed points and commuting case") {
    const Effect e = diag_effect({0.25, 0.5, 0.75});
    CHECK(max_abs_diff(inf_with_projection(e, Projection::identity(3)).mat(), e.mat()) < 1e-12);
    CHECK(inf_with_projection(e, Projection::zero(3)).element().frobenius_norm() < 1e-12);

    const Projection q = Projection::checked(
        SymmetricElement::diagonal(std::vector<double>{1.0, 1.0, 0.0}));
    const Effect m = inf_with_projection(e, q);
    CHECK(max_abs_diff(m.mat(), Matrix::diagonal(std::vector<double>{0.25, 0.5, 0.0})) < 1e-10);
}

TEST_CASE("atom folds are order-independent") {
    Rng rng(30002);
    for (int i = 0; i < 10; ++i) {
        const std::size_t n = 4;
        const Effect e = random_effect(rng, n);
        const Matrix basis = random_rotation(rng, n);
        std::vector<Projection> atoms;
        for (std::size_t j = 0; j + 1 < n; ++j)
            atoms.push_back(Projection::onto_line(column(basis, j)));

        const Effect fwd = fold_atom_infima(e, atoms);
        std::vector<Projection> rev(atoms.rbegin(), atoms.rend());
        const Effect bwd = fold_atom_infima(e, rev);
        std::rotate(atoms.begin(), atoms.begin() + 1, atoms.end());
        const Effect rot = fold_atom_infima(e, atoms);

        CHECK(max_abs_diff(fwd.mat(), bwd.mat()) < 1e-9);
        CHECK(max_abs_diff(fwd.mat(), rot.mat()) < 1e-9);
    }
}

TEST_CASE("the infimum is a lower bound wherever sampled") {
    Rng rng(30003);
    for (int i = 0; i < 20; ++i) {
        const std::size_t n = 2 + rng.below(4);
        const Effect e = random_effect(rng, n);
        const Projection q = random_projection(rng, n);
        const Effect m = inf_with_projection(e, q);
        CHECK(psd_leq(m.element(), e.element()));
        CHECK(psd_leq(m.element(), q.element()));
    }
}

TEST_CASE("atom-complement record is a lower bound below both operands") {
    Rng rng(30004);
    for (int i = 0; i < 20; ++i) {
        const std::size_t n = 2 + rng.below(4);
        const Effect e = random_effect(rng, n);
        const Projection p = Projection::onto_line(random_unit_vector(rng, n));
        const AtomInfimumRecord rec = inf_with_atom_complement(e, p);
        CHECK(psd_leq(rec.infimum.element(), e.element()));
        CHECK(psd_leq(rec.infimum.element(), p.ortho().element()));
        // maximality against the bisection reference: no extra multiple of
        // any sampled atom below both operands fits above the infimum
        const std::vector<double> dir = random_unit_vector(rng, n);
        const Projection w = Projection::onto_line(dir);
        const double headroom_e = atom_lower_bound_oracle(
            Effect::checked(sym(e.mat() - rec.infimum.mat())), w);
        const double headroom_perp = atom_lower_bound_oracle(
            Effect::checked(sym(p.ortho().mat() - rec.infimum.mat())), w);
        // the two headrooms cannot both be large along a common direction;
        // here we only assert the record stayed inside both gaps
        CHECK(headroom_e >= -1e-12);
        CHECK(headroom_perp >= -1e-12);
    }
}

TEST_CASE("rejects non-atoms") {
    const Effect e = diag_effect({0.25, 0.5, 0.75});
    const Projection q = Projection::checked(
        SymmetricElement::diagonal(std::vector<double>{1.0, 1.0, 0.0}));
    CHECK_THROWS_AS(inf_with_atom_complement(e, q), std::invalid_argument);
    CHECK_THROWS_AS(atom_mean(e, q), std::invalid_argument);
}

} // TEST_SUITE
