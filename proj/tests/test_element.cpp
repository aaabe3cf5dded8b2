#include "doctest.h"

#include <cmath>
#include <vector>

#include "support/oracles.hpp"
#include "synalg/element.hpp"
#include "synalg/errors.hpp"
#include "synalg/random_pairs.hpp"

using namespace synalg;

namespace {

SymmetricElement diag(std::vector<double> d) { return SymmetricElement::diagonal(d); }

} // namespace

TEST_SUITE("element-calculus") {

TEST_CASE("carrier: frozen diagonal case") {
    const Projection c = carrier(diag({0.0, 2.0, -3.0}));
    CHECK(c.rank() == 2);
    CHECK(max_abs_diff(c.mat(), diag({0.0, 1.0, 1.0}).mat()) < 1e-14);
    CHECK(carrier(SymmetricElement::zero(3)).rank() == 0);
    CHECK(carrier(SymmetricElement::identity(3)).rank() == 3);
}

TEST_CASE("carrier supports its element") {
    Rng rng(7001);
    for (int i = 0; i < 20; ++i) {
        const SymmetricElement a = random_symmetric(rng, 4);
        const Projection c = carrier(a);
        CHECK(max_abs_diff((c.mat() * a.mat()), a.mat()) < 1e-10);
    }
}

TEST_CASE("square root: frozen case and oracle cross-check") {
    const SymmetricElement r = sqrt_psd(diag({4.0, 9.0}));
    CHECK(max_abs_diff(r.mat(), diag({2.0, 3.0}).mat()) < 1e-14);
    CHECK_THROWS_AS(sqrt_psd(diag({-1.0, 1.0})), std::domain_error);

    Rng rng(7002);
    for (int i = 0; i < 10; ++i) {
        const SymmetricElement a = random_psd(rng, 4, 4); // strictly positive
        const SymmetricElement lib = sqrt_psd(a);
        CHECK(max_abs_diff(lib.mat(), synalg::testing::newton_schulz_sqrt(a.mat())) < 1e-9);
        CHECK(max_abs_diff(sym(lib.mat() * lib.mat()).mat(), a.mat()) < 1e-12);
    }
}

TEST_CASE("absolute value and positive part") {
    CHECK(max_abs_diff(abs_value(diag({-2.0, 3.0})).mat(), diag({2.0, 3.0}).mat()) < 1e-14);
    CHECK(max_abs_diff(positive_part(diag({-2.0, 3.0})).mat(), diag({0.0, 3.0}).mat()) < 1e-14);
}

TEST_CASE("signum and canonical extension: frozen case") {
    const SymmetricElement a = diag({-2.0, 0.0, 3.0});
    const PartialSymmetry t = signum(a);
    CHECK(max_abs_diff(t.element.mat(), diag({-1.0, 0.0, 1.0}).mat()) < 1e-14);
    CHECK(t.support.rank() == 2);
    CHECK(max_abs_diff(t.support.mat(), diag({1.0, 0.0, 1.0}).mat()) < 1e-14);

    // t^3 = t
    const Matrix t3 = t.element.mat() * t.element.mat() * t.element.mat();
    CHECK(max_abs_diff(t3, t.element.mat()) < 1e-13);

    const Symmetry u = canonical_extension(t.element);
    CHECK(max_abs_diff(u.mat(), diag({-1.0, 1.0, 1.0}).mat()) < 1e-13);
    CHECK(max_abs_diff((u.mat() * u.mat()), Matrix::identity(3)) < 1e-13);

    CHECK_THROWS_AS(canonical_extension(diag({0.5, 1.0})), std::invalid_argument);
}

TEST_CASE("polar decomposition: frozen case and identity") {
    const SymmetricElement a = diag({2.0, -3.0, 0.0});
    const PolarDecomposition pd = polar_decompose(a);
    CHECK(max_abs_diff(pd.abs.mat(), diag({2.0, 3.0, 0.0}).mat()) < 1e-13);
    CHECK(max_abs_diff(pd.u.mat(), diag({1.0, -1.0, 1.0}).mat()) < 1e-13);

    Rng rng(7003);
    for (int i = 0; i < 10; ++i) {
        const SymmetricElement b = random_symmetric(rng, 5);
        const PolarDecomposition p2 = polar_decompose(b);
        CHECK(max_abs_diff(sym(p2.abs.mat() * p2.u.mat()).mat(), b.mat()) < 1e-10);
        CHECK(max_abs_diff(p2.u.mat() * p2.u.mat(), Matrix::identity(5)) < 1e-12);
        CHECK(psd_leq(SymmetricElement::zero(5), p2.abs));
    }
}

TEST_CASE("spectral resolution: frozen three-level effect") {
    const SpectralResolution sr = spectral_resolution(diag({0.25, 0.5, 0.75}));
    REQUIRE(sr.thresholds.size() == 3);
    CHECK(sr.thresholds[0] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(sr.thresholds[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(sr.thresholds[2] == doctest::Approx(0.75).epsilon(1e-14));
    REQUIRE(sr.cuts.size() == 3);
    CHECK(max_abs_diff(sr.cuts[0].mat(), diag({1.0, 0.0, 0.0}).mat()) < 1e-12);
    CHECK(max_abs_diff(sr.cuts[1].mat(), diag({1.0, 1.0, 0.0}).mat()) < 1e-12);
    CHECK(max_abs_diff(sr.cuts[2].mat(), Matrix::identity(3)) < 1e-12);
}

TEST_CASE("spectral resolution merges near-degenerate eigenvalues") {
    const SpectralResolution sr = spectral_resolution(diag({0.5, 0.5 + 1e-12}));
    CHECK(sr.thresholds.size() == 1);
    CHECK(sr.cuts.size() == 1);
    CHECK(sr.cuts[0].rank() == 2);

    const SpectralResolution one = spectral_resolution(SymmetricElement::identity(2));
    CHECK(one.thresholds.size() == 1);
    CHECK(one.thresholds[0] == doctest::Approx(1.0));
}

TEST_CASE("spectral cuts ascend and rebuild the element") {
    Rng rng(7004);
    for (int i = 0; i < 10; ++i) {
        const SymmetricElement a = random_symmetric(rng, 5);
        const SpectralResolution sr = spectral_resolution(a);
        for (std::size_t k = 0; k + 1 < sr.cuts.size(); ++k) {
            CHECK(sr.thresholds[k] < sr.thresholds[k + 1]);
            CHECK(psd_leq(sr.cuts[k].element(), sr.cuts[k + 1].element()));
        }
        CHECK(sr.cuts.back().rank() == 5); // top cut is the identity
        // a = sum over levels of threshold * (cut_k - cut_{k-1})
        Matrix rebuilt(5);
        Matrix prev(5);
        for (std::size_t k = 0; k < sr.cuts.size(); ++k) {
            rebuilt += sr.thresholds[k] * (sr.cuts[k].mat() - prev);
            prev = sr.cuts[k].mat();
        }
        CHECK(max_abs_diff(rebuilt, a.mat()) < 1e-11);
    }
}

TEST_CASE("Peirce decomposition: frozen case and resummation") {
    Matrix m(2);
    m(0, 0) = 1.0;
    m(0, 1) = m(1, 0) = 2.0;
    m(1, 1) = 3.0;
    const SymmetricElement a = sym(m);
    const std::vector<double> e1{1.0, 0.0};
    const Projection p = Projection::onto_line(e1);
    const PeirceDecomposition pd = peirce_decompose(a, p);
    CHECK(max_abs_diff(pd.diag_p.mat(), diag({1.0, 0.0}).mat()) < 1e-14);
    CHECK(max_abs_diff(pd.diag_p_perp.mat(), diag({0.0, 3.0}).mat()) < 1e-14);
    Matrix off(2);
    off(0, 1) = off(1, 0) = 2.0;
    CHECK(max_abs_diff(pd.off_diag.mat(), off) < 1e-14);
    const Matrix resum = pd.diag_p.mat() + pd.off_diag.mat() + pd.diag_p_perp.mat();
    CHECK(max_abs_diff(resum, a.mat()) == 0.0);
}

TEST_CASE("projection construction and validation") {
    const std::vector<double> v{1.0, 1.0};
    const Projection line = Projection::onto_line(v);
    CHECK(line.rank() == 1);
    CHECK(line.mat()(0, 0) == doctest::Approx(0.5));
    CHECK(is_atom(line));

    CHECK_THROWS_AS(Projection::checked(diag({0.5, 1.0})), invariant_violation);
    const Projection snapped = Projection::checked(diag({1.0 - 1e-12, 0.0}));
    CHECK(snapped.rank() == 1);
    CHECK(snapped.mat()(0, 0) == 1.0);

    CHECK(Projection::zero(3).is_zero());
    CHECK(Projection::identity(3).is_identity());
    CHECK(line.ortho().rank() == 1);
    CHECK(max_abs_diff(line.ortho().mat() + line.mat(), Matrix::identity(2)) == 0.0);
}

} // TEST_SUITE
