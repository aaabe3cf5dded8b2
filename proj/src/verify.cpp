#include "synalg/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "synalg/cbs.hpp"
#include "synalg/commutator.hpp"
#include "synalg/effect.hpp"
#include "synalg/element.hpp"
#include "synalg/errors.hpp"
#include "synalg/infimum.hpp"
#include "synalg/json_io.hpp"
#include "synalg/lattice.hpp"
#include "synalg/random_pairs.hpp"

namespace synalg {

namespace {

struct check_fail : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Ctx {
    std::size_t dim;
    int trial;
    Rng rng;
    ToleranceConfig tol;
    std::string replay;
    double worst = 0.0;

    void residual(double r) {
        if (std::isfinite(r)) worst = std::max(worst, r);
    }
};

void expect(bool ok, const std::string& what) {
    if (!ok) throw check_fail(what);
}

void expect_near(Ctx& ctx, double value, double bound, const std::string& what) {
    ctx.residual(value);
    if (!(value <= bound))
        throw check_fail(what + ": residual " + format_double(value) + " exceeds " +
                         format_double(bound));
}

double scale_of(const Matrix& m) { return 1.0 + m.frobenius_norm(); }

RandomPair draw_pair(Ctx& ctx) {
    RandomPair pr = random_pair(ctx.rng, ctx.dim);
    ctx.replay = pair_to_json(pr.p, pr.e, ctx.tol);
    return pr;
}

Projection draw_block_projection(Rng& rng, std::size_t s) {
    const double roll = rng.uniform();
    if (roll < 0.15) return Projection::zero(s);
    if (roll < 0.30) return Projection::identity(s);
    if (s < 2) return rng.bernoulli(0.5) ? Projection::identity(s) : Projection::zero(s);
    return random_projection(rng, s);
}

Matrix embed_blocks(const Matrix& top, const Matrix& bottom) {
    const std::size_t m = top.dim(), n = m + bottom.dim();
    Matrix out(n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) out(i, j) = top(i, j);
    for (std::size_t i = m; i < n; ++i)
        for (std::size_t j = m; j < n; ++j) out(i, j) = bottom(i - m, j - m);
    return out;
}

// Two generic projections in complementary blocks of a common rotated basis
// plus the block indicator; the indicator commutes with both.
struct CommutingTriple {
    Projection p, w, q;
};

CommutingTriple draw_commuting_triple(Rng& rng, std::size_t n) {
    const std::size_t m = 1 + rng.below(n - 1);
    const Matrix rot = random_rotation(rng, n);
    const Matrix rot_t = rot.transpose();
    auto conjugated = [&](const Matrix& d) { return Projection::checked(sym(rot * d * rot_t)); };
    const Matrix p_blocks = embed_blocks(draw_block_projection(rng, m).mat(),
                                         draw_block_projection(rng, n - m).mat());
    const Matrix w_blocks = embed_blocks(draw_block_projection(rng, m).mat(),
                                         draw_block_projection(rng, n - m).mat());
    Matrix qd(n);
    for (std::size_t i = 0; i < m; ++i) qd(i, i) = 1.0;
    return CommutingTriple{conjugated(p_blocks), conjugated(w_blocks), conjugated(qd)};
}

// Effect with prescribed numbers of exact-one, exact-zero, and interior
// eigenvalues against a random rotation.
struct StructuredEffect {
    Effect e;
    Matrix basis;
    std::vector<std::size_t> one_cols, zero_cols, interior_cols;
};

StructuredEffect draw_structured_effect(Ctx& ctx, bool force_interior) {
    const std::size_t n = ctx.dim;
    std::size_t ones = 0, zeros = 0, interior = 0;
    do {
        ones = ctx.rng.below(n + 1);
        zeros = ctx.rng.below(n + 1 - ones);
        interior = n - ones - zeros;
    } while (force_interior && interior == 0);
    StructuredEffect out;
    out.basis = random_rotation(ctx.rng, n);
    std::vector<double> vals(n, 0.0);
    std::size_t col = 0;
    for (std::size_t i = 0; i < ones; ++i, ++col) {
        vals[col] = 1.0;
        out.one_cols.push_back(col);
    }
    for (std::size_t i = 0; i < zeros; ++i, ++col) out.zero_cols.push_back(col);
    for (std::size_t i = 0; i < interior; ++i, ++col) {
        vals[col] = ctx.rng.uniform(0.15, 0.85);
        out.interior_cols.push_back(col);
    }
    out.e = trusted_effect(from_eigenpairs(vals, out.basis));
    return out;
}

// Largest gamma in [0,1] with gamma*h <= cap, by bisection on psd_leq.
double max_scale_below(const SymmetricElement& h, const SymmetricElement& cap,
                       const ToleranceConfig& tol) {
    if (psd_leq(h, cap, tol)) return 1.0;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (psd_leq(mid * h, cap, tol))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

// ====================== Core numerics ======================

void chk_eig_reconstruction(Ctx& c) {
    const SymmetricElement a = random_symmetric(c.rng, c.dim);
    const EigenDecomposition d = sym_eigen(a, c.tol);
    for (std::size_t i = 0; i + 1 < d.eigenvalues.size(); ++i)
        expect(d.eigenvalues[i] <= d.eigenvalues[i + 1], "eigenvalues not ascending");
    const SymmetricElement back = from_eigenpairs(d.eigenvalues, d.eigenvectors);
    expect_near(c, max_abs_diff(a, back), 1e-12 * scale_of(a), "eigendecomposition reconstruction");
}

void chk_eig_orthogonality(Ctx& c) {
    const SymmetricElement a = random_symmetric(c.rng, c.dim);
    const EigenDecomposition d = sym_eigen(a, c.tol);
    const Matrix gram = d.eigenvectors.transpose() * d.eigenvectors;
    expect_near(c, max_abs_diff(gram, Matrix::identity(c.dim)), 1e-12,
                "eigenvector basis not orthonormal");
}

void chk_eig_determinism(Ctx& c) {
    const SymmetricElement a = random_symmetric(c.rng, c.dim);
    const EigenDecomposition d1 = sym_eigen(a, c.tol);
    const EigenDecomposition d2 = sym_eigen(a, c.tol);
    expect(d1.eigenvalues == d2.eigenvalues, "eigenvalues differ between identical runs");
    expect(d1.eigenvectors == d2.eigenvectors, "eigenvectors differ between identical runs");
}

void chk_psd_leq(Ctx& c) {
    const SymmetricElement a = random_symmetric(c.rng, c.dim);
    const SymmetricElement d = random_psd(c.rng, c.dim, 1 + c.rng.below(c.dim), 0.3, 2.0);
    const SymmetricElement b = a + d;
    expect(psd_leq(a, a, c.tol), "order not reflexive");
    expect(psd_leq(a, b, c.tol), "a <= a + positive failed");
    expect(!psd_leq(b, a, c.tol), "strict order not detected");
}

void chk_apply_commutes(Ctx& c) {
    const SymmetricElement m = random_psd(c.rng, c.dim, 1 + c.rng.below(c.dim));
    const SymmetricElement r = sqrt_psd(m, c.tol);
    expect_near(c, max_abs_diff(sym(r.mat() * r.mat()), m), 1e-9 * scale_of(m),
                "square of square root");
    expect(commutes(r, m, c.tol), "square root does not commute with its argument");
    const SymmetricElement a = random_symmetric(c.rng, c.dim);
    const SymmetricElement cube = apply_scalar_function(a, [](double x) { return x * x * x; });
    const Matrix direct = a.mat() * a.mat() * a.mat();
    expect_near(c, max_abs_diff(cube, direct), 1e-9 * (1.0 + std::pow(a.frobenius_norm(), 3)),
                "functional calculus cube vs repeated product");
}

void chk_polar(Ctx& c) {
    const SymmetricElement a = random_symmetric(c.rng, c.dim);
    const PolarDecomposition pol = polar_decompose(a, c.tol);
    expect(psd_leq(SymmetricElement::zero(c.dim), pol.abs, c.tol), "|a| not positive");
    expect_near(c, max_abs_diff(sym(pol.u.mat() * pol.abs.mat()), a), 1e-9 * scale_of(a),
                "u|a| does not recover a");
    const SymmetricElement abs2 = sqrt_psd(sym(a.mat() * a.mat()), c.tol);
    expect_near(c, max_abs_diff(pol.abs, abs2), 1e-7 * scale_of(a),
                "|a| vs sqrt of square");
    expect(commutes(pol.abs, a, c.tol), "|a| does not commute with a");
}

void chk_symmetry_conjugation(Ctx& c) {
    const Projection p = random_projection(c.rng, c.dim);
    const SymmetricElement ue =
        2.0 * p.element() - SymmetricElement::identity(c.dim);
    const Symmetry u = Symmetry::checked(ue, c.tol);
    const SymmetricElement a = random_psd(c.rng, c.dim, 1 + c.rng.below(c.dim));
    const SymmetricElement b = a + random_psd(c.rng, c.dim, 1 + c.rng.below(c.dim), 0.3, 2.0);
    auto conj = [&](const SymmetricElement& x) { return sym(u.mat() * x.mat() * u.mat()); };
    expect(psd_leq(conj(a), conj(b), c.tol), "conjugation broke the order");
    const Projection ca = carrier(a, c.tol);
    expect(projections_equal(carrier(conj(a), c.tol), Projection::checked(conj(ca.element()), c.tol),
                             1e-7),
           "conjugation does not transport the carrier");
}

void chk_carrier_annihilation(Ctx& c) {
    const std::size_t r = 1 + c.rng.below(c.dim);
    const SymmetricElement a = random_psd(c.rng, c.dim, r);
    const Projection car = carrier(a, c.tol);
    expect(car.rank() == r, "carrier rank mismatch");
    expect_near(c, max_abs_diff(a.mat() * car.mat(), a.mat()), 1e-10 * scale_of(a),
                "a * carrier(a) != a");
    expect(projections_equal(carrier(3.7 * a, c.tol), car, 1e-8), "carrier not scale invariant");
}

void chk_carrier_monotone(Ctx& c) {
    const SymmetricElement a = random_psd(c.rng, c.dim, 1 + c.rng.below(c.dim));
    const SymmetricElement b = a + random_psd(c.rng, c.dim, 1 + c.rng.below(c.dim));
    expect(psd_leq(a, b, c.tol), "sum of positives not above first summand");
    expect(proj_leq(carrier(a, c.tol), carrier(b, c.tol), c.tol),
           "carrier not monotone along 0 <= a <= b");
}

// ====================== Element calculus lemmas ======================

void chk_carrier_of_sum(Ctx& c) {
    const SymmetricElement a = random_psd(c.rng, c.dim, 1 + c.rng.below(c.dim));
    const SymmetricElement b = random_psd(c.rng, c.dim, 1 + c.rng.below(c.dim));
    const Projection lhs = carrier(a + b, c.tol);
    const Projection rhs = join(carrier(a, c.tol), carrier(b, c.tol), c.tol);
    expect(lhs.rank() == rhs.rank(), "carrier-of-sum rank mismatch");
    expect(projections_equal(lhs, rhs, 1e-7), "carrier of sum != join of carriers");
}

void chk_carrier_of_product(Ctx& c) {
    const std::size_t n = c.dim;
    const Matrix q = random_rotation(c.rng, n);
    std::vector<double> va(n, 0.0), vb(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        switch (c.rng.below(4)) {
            case 1: vb[i] = c.rng.uniform(0.2, 2.0); break;
            case 2: va[i] = c.rng.uniform(0.2, 2.0); break;
            case 3:
                va[i] = c.rng.uniform(0.2, 2.0);
                vb[i] = c.rng.uniform(0.2, 2.0);
                break;
            default: break;
        }
    }
    const SymmetricElement a = from_eigenpairs(va, q);
    const SymmetricElement b = from_eigenpairs(vb, q);
    expect(commutes(a, b, c.tol), "shared-basis pair does not commute");
    const Projection lhs = carrier(sym(a.mat() * b.mat()), c.tol);
    const Projection rhs = meet(carrier(a, c.tol), carrier(b, c.tol), c.tol);
    expect(projections_equal(lhs, rhs, 1e-7), "carrier of product != meet of carriers");
}

void chk_diag_zero(Ctx& c) {
    const SymmetricElement a = random_psd(c.rng, c.dim, 1 + c.rng.below(c.dim));
    const Projection p = random_projection(c.rng, c.dim);
    const PeirceDecomposition pd = peirce_decompose(a, p, c.tol);
    const SymmetricElement diag = pd.diag_p + pd.diag_p_perp;
    expect_near(c, std::fabs(diag.trace() - a.trace()), 1e-10 * scale_of(a),
                "diagonal part changes the trace");
    expect(diag.frobenius_norm() >=
               a.frobenius_norm() / std::sqrt(static_cast<double>(c.dim)) - 1e-9,
           "diagonal part of a positive element too small to witness it");
}

void chk_offdiag_zero(Ctx& c) {
    const CommutingPair cp = random_commuting_pair(c.rng, c.dim);
    const PeirceDecomposition pdc = peirce_decompose(cp.e.element(), cp.p, c.tol);
    expect_near(c, pdc.off_diag.frobenius_norm(), 1e-10 * scale_of(cp.e.mat()),
                "commuting pair has nonzero off-diagonal part");

    const RandomPair pr = draw_pair(c);
    const PeirceDecomposition pd = peirce_decompose(pr.e.element(), pr.p, c.tol);
    const Matrix comm = pr.p.mat() * pr.e.mat() - pr.e.mat() * pr.p.mat();
    expect_near(c, std::fabs(pd.off_diag.frobenius_norm() - comm.frobenius_norm()),
                1e-10 * scale_of(pr.e.mat()),
                "off-diagonal norm differs from commutator norm");
}

void chk_rational_spectral_commute(Ctx& c) {
    const SymmetricElement a = random_symmetric(c.rng, c.dim);
    const EigenDecomposition d = sym_eigen(a, c.tol);
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < c.dim; ++i)
        if (c.rng.bernoulli(0.5)) cols.push_back(i);
    const Projection q = Projection::span_of_columns(d.eigenvectors, cols);
    const SpectralResolution sr = spectral_resolution(a, c.tol);
    expect(commutes(q.element(), a, c.tol), "eigenvector-subset projection must commute with a");
    for (const Projection& cut : sr.cuts)
        expect(commutes(q.element(), cut.element(), c.tol),
               "projection commuting with a fails to commute with a spectral cut");

    const Projection q2 = random_projection(c.rng, c.dim);
    bool all_cuts = true;
    for (const Projection& cut : sr.cuts)
        all_cuts = all_cuts && commutes(q2.element(), cut.element(), c.tol);
    if (all_cuts)
        expect(commutes(q2.element(), a, c.tol),
               "commuting with every cut must imply commuting with a");
}

void chk_spectral_monotone(Ctx& c) {
    const SymmetricElement a = random_symmetric(c.rng, c.dim);
    const SpectralResolution sr = spectral_resolution(a, c.tol);
    expect(!sr.cuts.empty(), "empty spectral resolution");
    for (std::size_t i = 0; i + 1 < sr.cuts.size(); ++i) {
        expect(sr.thresholds[i] < sr.thresholds[i + 1], "thresholds not increasing");
        expect(proj_leq(sr.cuts[i], sr.cuts[i + 1], c.tol), "cut family not ascending");
        expect(sr.cuts[i].rank() < sr.cuts[i + 1].rank(), "cut ranks not strictly increasing");
    }
    expect(sr.cuts.back().rank() == c.dim, "top cut is not the identity");
    Matrix recon(c.dim);
    Matrix prev(c.dim);
    for (std::size_t i = 0; i < sr.cuts.size(); ++i) {
        recon += sr.thresholds[i] * (sr.cuts[i].mat() - prev);
        prev = sr.cuts[i].mat();
    }
    expect_near(c, max_abs_diff(recon, a.mat()), 1e-6 * scale_of(a),
                "spectral reconstruction from cut increments");
}

// ====================== Projection lattice ======================

void chk_orthomodular(Ctx& c) {
    const Projection q = random_projection(c.rng, c.dim);
    const Projection w = random_projection(c.rng, c.dim);
    const Projection m = meet(q, w, c.tol);
    const Projection j = join(q, w, c.tol);
    expect(proj_leq(m, q, c.tol) && proj_leq(m, w, c.tol), "meet not below both arguments");
    expect(proj_leq(q, j, c.tol) && proj_leq(w, j, c.tol), "join not above both arguments");
    expect(projections_equal(join(q, w, c.tol), join(w, q, c.tol), 1e-8), "join not symmetric");
    const Projection x = m;
    const Projection rebuilt = join(x, meet(q, ortho(x), c.tol), c.tol);
    expect(projections_equal(rebuilt, q, 1e-7), "orthomodular law x v (q ^ x') = q failed");
}

void chk_pqp_carrier(Ctx& c) {
    const Projection p = random_projection(c.rng, c.dim);
    Projection q = random_projection(c.rng, c.dim);
    for (int tries = 0; tries < 20; ++tries) {
        const EigenDecomposition d =
            sym_eigen(sym(p.mat() * q.mat() * p.mat()), c.tol);
        bool knife_edge = false;
        for (double lam : d.eigenvalues)
            if (lam > 1e-12 && lam < 1e-6) knife_edge = true;
        if (!knife_edge) break;
        q = random_projection(c.rng, c.dim);
    }
    const Projection lhs = carrier(sym(p.mat() * q.mat() * p.mat()), c.tol);
    const Projection rhs = meet(p, join(ortho(p), q, c.tol), c.tol);
    expect(projections_equal(lhs, rhs, 1e-7), "(pqp) carrier formula failed");
}

void chk_distributive(Ctx& c) {
    const CommutingTriple t = draw_commuting_triple(c.rng, c.dim);
    expect(commutes(t.q.element(), t.p.element(), c.tol), "indicator fails to commute with p");
    expect(commutes(t.q.element(), t.w.element(), c.tol), "indicator fails to commute with w");
    const Projection lhs = meet(t.q, join(t.p, t.w, c.tol), c.tol);
    const Projection rhs = join(meet(t.q, t.p, c.tol), meet(t.q, t.w, c.tol), c.tol);
    expect(projections_equal(lhs, rhs, 1e-7), "meet does not distribute over join");
    const Projection lhs2 = join(t.q, meet(t.p, t.w, c.tol), c.tol);
    const Projection rhs2 = meet(join(t.q, t.p, c.tol), join(t.q, t.w, c.tol), c.tol);
    expect(projections_equal(lhs2, rhs2, 1e-7), "join does not distribute over meet");
}

void chk_inf_sup_in_p(Ctx& c) {
    const Projection q = random_projection(c.rng, c.dim);
    const Projection w = random_projection(c.rng, c.dim);
    const Projection m = meet(q, w, c.tol);
    const Projection jn = join(q, w, c.tol);
    expect(psd_leq(m.element(), q.element(), c.tol) && psd_leq(m.element(), w.element(), c.tol),
           "meet not a Loewner lower bound");
    expect(psd_leq(q.element(), jn.element(), c.tol) && psd_leq(w.element(), jn.element(), c.tol),
           "join not a Loewner upper bound");

    // Effects supported in the meet stay below both projections.
    if (m.rank() > 0) {
        const Effect w0 = random_effect(c.rng, c.dim);
        const SymmetricElement f =
            c.rng.uniform() * sym(m.mat() * w0.mat() * m.mat());
        expect(psd_leq(f, q.element(), c.tol), "effect through the meet escapes q");
        expect(psd_leq(f, w.element(), c.tol), "effect through the meet escapes w");
    }

    // The join is smallest among sampled common upper bounds.
    const Projection upper = carrier(
        q.element() + w.element() + random_psd(c.rng, c.dim, 1 + c.rng.below(c.dim)), c.tol);
    expect(proj_leq(q, upper, c.tol) && proj_leq(w, upper, c.tol),
           "witness is not a common upper bound");
    expect(proj_leq(jn, upper, c.tol), "join exceeds a common upper bound");

    // Loewner domination of the meet, probed on an exactly commuting pair
    // where the bisection is well conditioned. Generic pairs at a small
    // principal angle admit no exact common lower bounds at all, so the probe
    // there would only measure the solver slack amplified by 1/sin^2(angle).
    const Matrix rot = random_rotation(c.rng, c.dim);
    std::vector<std::size_t> cols_q, cols_w;
    for (std::size_t i = 0; i < c.dim; ++i) {
        const bool in_q = c.rng.bernoulli(0.5);
        if (in_q) cols_q.push_back(i);
        if ((in_q && c.rng.bernoulli(0.7)) || (!in_q && c.rng.bernoulli(0.3)))
            cols_w.push_back(i);
    }
    const Projection cq = Projection::span_of_columns(rot, cols_q);
    const Projection cw = Projection::span_of_columns(rot, cols_w);
    const Projection cm = meet(cq, cw, c.tol);
    const Effect f0 = random_effect(c.rng, c.dim);
    const SymmetricElement h = sym(cq.mat() * f0.mat() * cq.mat());
    const Matrix out = Matrix::identity(c.dim) - cm.mat();
    const double out_mass = operator_norm(out * h.mat() * out, c.tol);
    const double gamma = max_scale_below(h, cw.element(), c.tol);
    if (out_mass > 1e-3)
        expect(gamma <= 1e-5,
               "effect below q with substantial mass outside the meet still fits under w");
    if (cm.rank() > 0) {
        const SymmetricElement h_in = sym(cm.mat() * f0.mat() * cm.mat());
        expect(max_scale_below(h_in, cw.element(), c.tol) >= 0.999,
               "effect inside the meet does not fit under w");
    }
}

void chk_f_replacement(Ctx& c) {
    const Projection p = random_projection(c.rng, c.dim);
    const Projection q = random_projection(c.rng, c.dim);
    const Projection w = random_projection(c.rng, c.dim);
    const std::vector<Projection> f{p, q, w};
    const Projection base = finite_set_commutator(f, c.tol);
    const std::vector<Projection> swapped{p, ortho(q), w};
    expect(projections_equal(base, finite_set_commutator(swapped, c.tol), 1e-7),
           "commutator changed when a member was replaced by its orthocomplement");
    const std::vector<Projection> doubled{p, q, w, q};
    expect(projections_equal(base, finite_set_commutator(doubled, c.tol), 1e-7),
           "commutator changed when a member was repeated");
    const std::vector<Projection> extended{p, q, w, random_projection(c.rng, c.dim)};
    expect(proj_leq(base, finite_set_commutator(extended, c.tol), c.tol),
           "commutator shrank when the set grew");
}

void chk_fsc_props(Ctx& c) {
    const Projection p = random_projection(c.rng, c.dim);
    const Projection q = random_projection(c.rng, c.dim);
    const Projection w = random_projection(c.rng, c.dim);
    const std::vector<Projection> f{p, q, w};
    const Projection r = finite_set_commutator(f, c.tol);
    for (const Projection& member : f)
        expect(commutes(r.element(), member.element(), c.tol),
               "commutator fails to commute with a member");
    const Matrix rc = ortho(r).mat();
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = i + 1; j < f.size(); ++j) {
            const SymmetricElement a = sym(rc * f[i].mat() * rc);
            const SymmetricElement b = sym(rc * f[j].mat() * rc);
            expect(commutes(a, b, c.tol),
                   "members fail to commute after compression beyond the commutator");
        }

    const Matrix rot = random_rotation(c.rng, c.dim);
    auto subset = [&] {
        std::vector<std::size_t> cols;
        for (std::size_t i = 0; i < c.dim; ++i)
            if (c.rng.bernoulli(0.5)) cols.push_back(i);
        return Projection::span_of_columns(rot, cols);
    };
    const std::vector<Projection> commuting{subset(), subset(), subset()};
    expect(finite_set_commutator(commuting, c.tol).rank() == 0,
           "pairwise commuting family has nonzero commutator");
}

// ====================== Effects vs projections ======================

void chk_effect_below_projection(Ctx& c) {
    const Projection p = random_projection(c.rng, c.dim);
    const Effect f = random_effect(c.rng, c.dim);
    const Effect e = Effect::checked(sym(p.mat() * f.mat() * p.mat()), c.tol);
    expect(psd_leq(e.element(), p.element(), c.tol), "pfp not below p");
    expect_near(c, max_abs_diff(e.mat() * p.mat(), e.mat()), 1e-9 * scale_of(e.mat()),
                "e <= p but ep != e");
    expect_near(c, max_abs_diff(p.mat() * e.mat(), e.mat()), 1e-9 * scale_of(e.mat()),
                "e <= p but pe != e");
    expect(proj_leq(join(carrier(e.element(), c.tol), p, c.tol), p, c.tol),
           "carrier of e escapes p");

    const Matrix pp = ortho(p).mat();
    const Effect above = Effect::checked(
        p.element() + 0.9 * sym(pp * f.mat() * pp), c.tol);
    expect(psd_leq(p.element(), above.element(), c.tol), "p not below p + corner effect");
    expect_near(c, max_abs_diff(p.mat() * above.mat(), p.mat()), 1e-9 * scale_of(above.mat()),
                "p <= e but pe != p");
}

void chk_commuting_product_is_meet(Ctx& c) {
    const Matrix rot = random_rotation(c.rng, c.dim);
    auto subset = [&] {
        std::vector<std::size_t> cols;
        for (std::size_t i = 0; i < c.dim; ++i)
            if (c.rng.bernoulli(0.5)) cols.push_back(i);
        return Projection::span_of_columns(rot, cols);
    };
    const Projection p = subset();
    const Projection f = subset();
    const Projection m = meet(p, f, c.tol);
    expect_near(c, max_abs_diff(sym(p.mat() * f.mat()), m.mat()), 1e-7,
                "product of commuting projections is not their meet");

    const Effect f0 = random_effect(c.rng, c.dim);
    const SymmetricElement h = sym(p.mat() * f0.mat() * p.mat());
    const double gamma = max_scale_below(h, f.element(), c.tol);
    if (gamma > 1e-6)
        expect(psd_leq((0.999 * gamma) * h, m.element(), c.tol),
               "effect below both commuting projections exceeds their product");
}

void chk_effect_conditions(Ctx& c) {
    const double blow = c.rng.bernoulli(0.5) ? c.rng.uniform(1.1, 2.0) : c.rng.uniform(0.2, 0.9);
    const SymmetricElement a = blow * random_psd(c.rng, c.dim, c.dim, 0.2, 1.0);
    const EigenDecomposition d = sym_eigen(a, c.tol);
    const double lam_max = d.eigenvalues.back();
    if (std::fabs(lam_max - 1.0) < 1e-6) return; // guard band around the threshold
    const SymmetricElement one = SymmetricElement::identity(c.dim);
    const bool below = lam_max < 1.0;
    expect(psd_leq(a, one, c.tol) == below, "a <= 1 disagrees with the spectrum");
    expect(psd_leq(sym(a.mat() * a.mat()), one, c.tol) == below,
           "a^2 <= 1 must match a <= 1 for positive a");
}

void chk_largest_subprojections(Ctx& c) {
    const StructuredEffect se = draw_structured_effect(c, false);
    const SubprojectionPair sp = largest_subprojections(se.e, c.tol);
    expect(sp.z.rank() == se.one_cols.size(), "rank of z differs from the unit eigenspace");
    expect(sp.t.rank() == se.zero_cols.size(), "rank of t differs from the kernel");
    expect(projections_equal(sp.z, Projection::span_of_columns(se.basis, se.one_cols), 1e-7),
           "z is not the eigenvalue-one eigenspace");
    expect(projections_equal(sp.t, Projection::span_of_columns(se.basis, se.zero_cols), 1e-7),
           "t is not the kernel projection");
    expect_near(c, max_abs_diff(sp.z.mat() * sp.t.mat(), Matrix(c.dim)), 1e-9,
                "z and t are not orthogonal");
    expect(psd_leq(sp.z.element(), se.e.element(), c.tol), "z not below e");
    expect(psd_leq(sp.t.element(), orthosupplement(se.e).element(), c.tol), "t not below 1 - e");
    expect(commutes(sp.z.element(), se.e.element(), c.tol), "z does not commute with e");
    expect(is_projection_free(se.e, c.tol) == se.one_cols.empty(),
           "projection-freeness disagrees with the spectrum");

    const Effect reduced = Effect::checked(se.e.element() - sp.z.element(), c.tol);
    expect(largest_subprojections(reduced, c.tol).z.rank() == 0, "e - z is not projection-free");
    const Effect reduced2 = Effect::checked(orthosupplement(se.e).element() - sp.t.element(), c.tol);
    expect(largest_subprojections(reduced2, c.tol).z.rank() == 0,
           "e' - t is not projection-free");
}

void chk_z_props(Ctx& c) {
    const StructuredEffect se = draw_structured_effect(c, false);
    const SubprojectionPair sp = largest_subprojections(se.e, c.tol);
    const Matrix& e = se.e.mat();
    const SymmetricElement ez = se.e.element() - sp.z.element();
    const SymmetricElement lhs = se.e.element() - sym(e * e);
    const SymmetricElement rhs = ez - sym(ez.mat() * ez.mat());
    expect_near(c, max_abs_diff(lhs, rhs), 1e-10 * scale_of(e),
                "e - e^2 differs from (e-z) - (e-z)^2");
    const Projection support = carrier(lhs, c.tol);
    expect(projections_equal(support, meet(ortho(sp.t), ortho(sp.z), c.tol), 1e-7),
           "carrier of e - e^2 is not t' ^ z'");
    const Projection carrier_ez = carrier(ez, c.tol);
    expect(projections_equal(carrier_ez, ortho(join(sp.t, sp.z, c.tol)), 1e-7),
           "carrier of e - z is not (t v z)'");
    expect_near(c,
                max_abs_diff(carrier_ez.mat(), carrier(se.e.element(), c.tol).mat() - sp.z.mat()),
                1e-7, "carrier of e - z is not carrier(e) - z");
    const Effect diffusion = Effect::checked(lhs, c.tol);
    expect(largest_subprojections(diffusion, c.tol).z.rank() == 0, "e - e^2 not projection-free");
}

void chk_corner_spectral(Ctx& c) {
    const SymmetricElement a = random_symmetric(c.rng, c.dim);
    const EigenDecomposition d = sym_eigen(a, c.tol);
    std::vector<std::size_t> cols{0};
    for (std::size_t i = 1; i + 1 < c.dim; ++i)
        if (c.rng.bernoulli(0.5)) cols.push_back(i);
    const Projection q = Projection::span_of_columns(d.eigenvectors, cols);
    const SpectralResolution sr = spectral_resolution(a, c.tol);
    const CornerBasis basis = corner_basis(q, c.tol);
    const SymmetricElement ac = compress(a, basis);
    const std::size_t m = basis.columns.size();
    for (std::size_t i = 0; i < sr.thresholds.size(); ++i) {
        const SymmetricElement shifted =
            ac - sr.thresholds[i] * SymmetricElement::identity(m);
        const Projection corner_cut = ortho(carrier(positive_part(shifted, c.tol), c.tol));
        const Projection lifted =
            Projection::checked(sym(lift(corner_cut.element(), basis).mat()), c.tol);
        expect(projections_equal(lifted, meet(sr.cuts[i], q, c.tol), 1e-7),
               "corner spectral cut differs from cut ^ q");
    }
}

void chk_components(Ctx& c) {
    const SymmetricElement a = random_symmetric(c.rng, c.dim);
    const Projection p = random_projection(c.rng, c.dim);
    const PeirceDecomposition pd = peirce_decompose(a, p, c.tol);
    const SymmetricElement back = pd.diag_p + pd.off_diag + pd.diag_p_perp;
    expect_near(c, max_abs_diff(back, a), 1e-12 * scale_of(a), "Peirce parts do not resum");
    const double ip = (pd.diag_p.mat() * pd.off_diag.mat()).trace();
    expect_near(c, std::fabs(ip), 1e-10 * scale_of(a) * scale_of(a),
                "diagonal and off-diagonal parts not trace-orthogonal");
    expect_near(c, max_abs_diff(p.mat() * pd.diag_p_perp.mat(), Matrix(c.dim)),
                1e-10 * scale_of(a), "p does not annihilate the opposite diagonal block");
    expect_near(c, max_abs_diff(p.mat() * pd.off_diag.mat() * p.mat(), Matrix(c.dim)),
                1e-10 * scale_of(a), "off-diagonal part has a diagonal residue");

    const CommutingPair cp = random_commuting_pair(c.rng, c.dim);
    const SymmetricElement fq = restrict_to_corner(cp.e.element(), cp.p, c.tol);
    const SymmetricElement fq_perp =
        restrict_to_corner(orthosupplement(cp.e).element(), cp.p, c.tol);
    expect_near(c, max_abs_diff(cp.p.mat() - fq.mat(), fq_perp.mat()), 1e-9,
                "corner orthosupplement is not q - qfq");
}

// ====================== CBS decomposition ======================

void chk_ecs_props(Ctx& c) {
    const RandomPair pr = draw_pair(c);
    const CosineSinePair cs = cosine_sine(pr.p, pr.e, c.tol);
    const Matrix& P = pr.p.mat();
    const Matrix& E = pr.e.mat();
    const Matrix I = Matrix::identity(c.dim);
    const Matrix C2 = cs.c.mat() * cs.c.mat();
    const Matrix S2 = cs.s.mat() * cs.s.mat();
    const double sc = scale_of(E);
    expect_near(c, max_abs_diff(C2 + S2, I), 1e-10 * sc, "c^2 + s^2 != 1");
    expect_near(c, max_abs_diff(C2, I - P - E + P * E + E * P), 1e-10 * sc,
                "c^2 identity failed");
    expect_near(c, max_abs_diff(S2, P + E - P * E - E * P), 1e-10 * sc, "s^2 identity failed");
    expect_near(c, max_abs_diff(C2 * P, P * E * P), 1e-9 * sc, "c^2 p != pep");
    expect(psd_leq(sym(C2), cs.c.element(), c.tol), "c^2 not below c");
    expect(psd_leq(sym(S2), cs.s.element(), c.tol), "s^2 not below s");
    expect(commutes(cs.c.element(), pr.p.element(), c.tol), "c does not commute with p");
    expect(commutes(cs.c.element(), cs.s.element(), c.tol), "c does not commute with s");
}

void chk_square_of_cs(Ctx& c) {
    const RandomPair pr = draw_pair(c);
    const CosineSinePair cs = cosine_sine(pr.p, pr.e, c.tol);
    const Effect j = j_effect(pr.p, pr.e, c.tol);
    const CommutatorEffect ce = commutator_effect(pr.p, pr.e, c.tol);
    const PeirceDecomposition pd = peirce_decompose(pr.e.element(), pr.p, c.tol);
    const Matrix& off = pd.off_diag.mat();
    const double sc = scale_of(pr.e.mat());
    const Matrix CS = sym(cs.c.mat() * cs.s.mat()).mat();
    const Matrix lhs = CS * CS;
    const Matrix mid = cs.c.mat() * cs.c.mat() * cs.s.mat() * cs.s.mat();
    const Matrix rhs = j.mat() * j.mat() + off * off;
    expect_near(c, max_abs_diff(lhs, mid), 1e-8 * sc, "(cs)^2 != c^2 s^2");
    expect_near(c, max_abs_diff(mid, rhs), 1e-8 * sc, "c^2 s^2 != j^2 + offdiag^2");
    expect_near(c, max_abs_diff(ce.b.mat() * ce.b.mat(), mid - j.mat() * j.mat()), 1e-8 * sc,
                "b^2 != c^2 s^2 - j^2");
}

void chk_cbs_decomposition(Ctx& c) {
    const RandomPair pr = draw_pair(c);
    const CBSDecomposition d = cbs_decompose(pr.p, pr.e, c.tol);
    const Matrix& P = pr.p.mat();
    const Matrix Pp = ortho(pr.p).mat();
    const double sc = scale_of(pr.e.mat());
    const Matrix recon = sym(d.c.mat() * d.c.mat() * P).mat() + sym(d.b.mat() * d.k.mat()).mat() +
                         sym(d.s.mat() * d.s.mat() * Pp).mat();
    expect_near(c, max_abs_diff(recon, pr.e.mat()), 1e-10 * sc,
                "reconstruction c^2 p + bk + s^2 p' failed");
    expect(commutes(d.b.element(), pr.p.element(), c.tol), "b does not commute with p");
    expect_near(c, max_abs_diff(sym(d.b.mat() * d.k.mat()).mat(), d.offdiag.mat()), 1e-8 * sc,
                "bk != off-diagonal part");
    expect_near(c, max_abs_diff(d.k.mat() * d.k.mat(), Matrix::identity(c.dim)), 1e-8,
                "k is not involutive");
    expect_near(c,
                (d.b.mat() * (P * d.k.mat() - d.k.mat() * Pp)).frobenius_norm(), 1e-8 * sc,
                "b(pk - kp') != 0");
    expect_near(c, max_abs_diff(P * d.b.mat() * d.k.mat(), P * pr.e.mat() * Pp), 1e-8 * sc,
                "pbk != pep'");
    expect_near(c, max_abs_diff(Pp * d.b.mat() * d.k.mat(), Pp * pr.e.mat() * P), 1e-8 * sc,
                "p'bk != p'ep");
}

void chk_cbs_carriers(Ctx& c) {
    const RandomPair pr = draw_pair(c);
    const CBSDecomposition d = cbs_decompose(pr.p, pr.e, c.tol);
    const CBSCarriers cars = cbs_carriers(d, c.tol); // lattice-vs-direct agreement inside
    const Matrix X = ortho(cars.s).mat();
    const double sc = scale_of(pr.e.mat());
    expect(psd_leq(ortho(cars.s).element(), sym(d.c.mat() * d.c.mat()), c.tol),
           "(s carrier)' not below c^2");
    expect(psd_leq(ortho(cars.c).element(), sym(d.s.mat() * d.s.mat()), c.tol),
           "(c carrier)' not below s^2");
    const Projection mp = meet(ortho(cars.s), pr.p, c.tol);
    expect_near(c, max_abs_diff(sym(X * pr.e.mat()).mat(), mp.mat()), 1e-7 * sc,
                "(s carrier)' e is not the meet with p");
    expect_near(c, max_abs_diff(sym(X * pr.p.mat()).mat(), mp.mat()), 1e-7 * sc,
                "(s carrier)' p is not the meet with p");
}

void chk_e_in_p(Ctx& c) {
    if (c.rng.bernoulli(0.5)) {
        const Projection p = random_projection(c.rng, c.dim);
        const Effect e = random_projection_effect(c.rng, c.dim);
        c.replay = pair_to_json(p, e, c.tol);
        const CBSDecomposition d = cbs_decompose(p, e, c.tol);
        const double sc = scale_of(e.mat());
        expect_near(c, d.j.element().frobenius_norm(), 1e-6 * sc,
                    "j does not vanish for a projection effect");
        expect_near(c, max_abs_diff(d.b.mat(), sym(d.c.mat() * d.s.mat()).mat()), 1e-7 * sc,
                    "b != cs for a projection effect");
    } else {
        const StructuredEffect se = draw_structured_effect(c, true);
        const Projection p = random_projection(c.rng, c.dim);
        const Effect j = j_effect(p, se.e, c.tol);
        expect(j.element().frobenius_norm() >= 0.1,
               "interior eigenvalue did not produce a visible j");
    }
}

void chk_p_commutes_e(Ctx& c) {
    const CommutingPair cp = random_commuting_pair(c.rng, c.dim);
    const CBSDecomposition d = cbs_decompose(cp.p, cp.e, c.tol);
    const double sc = scale_of(cp.e.mat());
    expect_near(c, d.b.element().frobenius_norm(), 1e-9 * sc, "commuting pair has nonzero b");
    const Matrix recon = sym(d.c.mat() * d.c.mat() * cp.p.mat()).mat() +
                         sym(d.s.mat() * d.s.mat() * ortho(cp.p).mat()).mat();
    expect_near(c, max_abs_diff(recon, cp.e.mat()), 1e-9 * sc,
                "commuting pair: e != c^2 p + s^2 p'");

    const RandomPair pr = draw_pair(c);
    const PeirceDecomposition pd = peirce_decompose(pr.e.element(), pr.p, c.tol);
    const CommutatorEffect ce = commutator_effect(pr.p, pr.e, c.tol);
    expect_near(c,
                std::fabs(ce.b.element().frobenius_norm() - pd.off_diag.frobenius_norm()),
                1e-10 * scale_of(pr.e.mat()), "|b| norm differs from off-diagonal norm");
}

void chk_restrict_cbs(Ctx& c) {
    const BlockTriple bt = random_block_triple(c.rng, c.dim);
    const CBSDecomposition d = cbs_decompose(bt.p, bt.e, c.tol);
    const CBSDecomposition dq = restrict_cbs(d, bt.q, c.tol); // componentwise checks inside
    expect(projections_equal(dq.unit, bt.q, 1e-8), "corner record carries the wrong unit");
    const CBSDecomposition dq2 = restrict_cbs(d, ortho(bt.q), c.tol);
    expect(dq.p.rank() + dq2.p.rank() == bt.p.rank(),
           "corner ranks of p do not add up across q and q'");
}

void chk_atom_exchange(Ctx& c) {
    const Projection p = random_projection_of_rank(c.rng, c.dim, 1);
    Effect e = random_effect(c.rng, c.dim);
    bool found = false;
    for (int tries = 0; tries < 40 && !found; ++tries) {
        const Matrix comm = p.mat() * e.mat() - e.mat() * p.mat();
        if (comm.frobenius_norm() > 0.02 * scale_of(e.mat())) {
            found = true;
            break;
        }
        e = random_effect(c.rng, c.dim);
    }
    if (!found) return;
    c.replay = pair_to_json(p, e, c.tol);
    const CBSDecomposition d = cbs_decompose(p, e, c.tol);
    const AtomStructure at = atom_structure(d, c.tol);
    expect(exchanged_by(p, at.v, d.k, c.tol), "k does not exchange p and v");
    expect(exchanged_by(at.v, p, d.k, c.tol), "k does not exchange v and p");
    expect(at.beta > 0.0 && at.beta <= 1.0 + 1e-12, "beta outside (0, 1]");
    expect_near(c, std::fabs(at.beta - operator_norm(d.b.mat(), c.tol)), 1e-8,
                "beta differs from the norm of b");
    expect(proj_leq(p, at.b_carrier, c.tol) && proj_leq(at.v, at.b_carrier, c.tol),
           "p and v not below the carrier of b");
    expect(proj_leq(at.b_carrier, pair_commutator(p, e, c.tol), c.tol),
           "carrier of b exceeds the pair commutator");
}

void chk_generic_position(Ctx& c) {
    const Projection p = random_projection_of_rank(c.rng, c.dim, c.dim / 2);
    const Effect e = random_effect(c.rng, c.dim);
    c.replay = pair_to_json(p, e, c.tol);
    const PairCommutatorReport rep = inequality_chain(p, e, c.tol);
    if (c.dim % 2 == 0) {
        expect(rep.generic_position, "balanced pair not in generic position");
    } else {
        expect(rep.b_carrier.rank() == c.dim - 1,
               "odd-dimension b carrier is not a hyperplane");
        expect(!rep.generic_position, "generic position claimed in odd dimension");
        expect(rep.totally_noncompatible, "odd-dimension generic pair not totally noncompatible");
    }
}

// ====================== Pair commutator ======================

void chk_commutator_chain(Ctx& c) {
    if (c.rng.bernoulli(0.3)) {
        const CommutingPair cp = random_commuting_pair(c.rng, c.dim);
        c.replay = pair_to_json(cp.p, cp.e, c.tol);
        const PairCommutatorReport rep = inequality_chain(cp.p, cp.e, c.tol);
        expect(rep.chain_ok, "chain flag not set");
        expect(rep.r.rank() == 0, "commuting pair with nonzero commutator");
        expect(!rep.totally_noncompatible, "commuting pair flagged totally noncompatible");
    } else {
        const RandomPair pr = draw_pair(c);
        const PairCommutatorReport rep = inequality_chain(pr.p, pr.e, c.tol);
        expect(rep.chain_ok, "chain flag not set");
        expect(psd_leq(rep.r.element(), Projection::identity(c.dim).element(), c.tol),
               "commutator above the identity");
    }
}

void chk_equality_of_commutators(Ctx& c) {
    const Projection p = random_projection(c.rng, c.dim);
    const Projection q = random_projection(c.rng, c.dim);
    const Effect eq = Effect::from(q);
    c.replay = pair_to_json(p, eq, c.tol);
    const Projection r1 = pair_commutator(p, eq, c.tol);
    const Projection r2 = marsden_commutator(p, q, c.tol);
    expect(projections_equal(r1, r2, 1e-7),
           "pair commutator differs from the Marsden commutator on projections");

    const RandomPair pr = draw_pair(c);
    const PairCommutatorReport rep = inequality_chain(pr.p, pr.e, c.tol);
    const bool equal = projections_equal(rep.b_carrier, rep.r, 1e-7);
    const bool comm = commutes(pr.e.element(), rep.b_carrier.element(), c.tol);
    expect(equal == comm, "b carrier = [p,e] must hold exactly when e commutes with b carrier");
}

void chk_pair_commutator_props(Ctx& c) {
    const RandomPair pr = draw_pair(c);
    const Projection r = pair_commutator(pr.p, pr.e, c.tol);
    expect(commutes(r.element(), pr.p.element(), c.tol), "commutator fails to commute with p");
    expect(commutes(r.element(), pr.e.element(), c.tol), "commutator fails to commute with e");
    const double res = commutation_residual(pr.p.element(), pr.e.element());
    if (res > 10.0 * c.tol.comm_eps * scale_of(pr.e.mat()))
        expect(r.rank() >= 1, "noncommuting pair with vanishing commutator");

    const CommutingPair cp = random_commuting_pair(c.rng, c.dim);
    expect(pair_commutator(cp.p, cp.e, c.tol).rank() == 0,
           "commuting pair with nonzero commutator");
}

void chk_dual_algorithm(Ctx& c) {
    const RandomPair pr = draw_pair(c);
    const Projection r1 = pair_commutator(pr.p, pr.e, c.tol);
    const Projection r2 = pair_commutator_via_closure(pr.p, pr.e, c.tol);
    expect(r1.rank() == r2.rank(), "lattice and closure commutators have different ranks");
    expect(projections_equal(r1, r2, 1e-7), "lattice and closure commutators differ");
}

void chk_rand_cbs(Ctx& c) {
    const RandomPair pr = draw_pair(c);
    const CBSDecomposition d = cbs_decompose(pr.p, pr.e, c.tol);
    const Projection r1 = pair_commutator(pr.p, pr.e, c.tol);
    const std::vector<std::vector<double>> seeds{random_unit_vector(c.rng, c.dim)};
    const Projection r2 = reducing_subspace_closure(seeds, pr.p, pr.e, c.tol);
    // The square-root parts are tested through their squares and through bk:
    // near a zero eigenvalue the square root (and the signum inside k)
    // amplify a roundoff-level commutation residual without bound, while the
    // squares and the product bk are polynomial in p and e and stay Lipschitz.
    const SymmetricElement c2 = sym(d.c.mat() * d.c.mat());
    const SymmetricElement s2 = sym(d.s.mat() * d.s.mat());
    const SymmetricElement j2 = sym(d.j.mat() * d.j.mat());
    const SymmetricElement b2 = sym(d.b.mat() * d.b.mat());
    const SymmetricElement bk = sym(d.b.mat() * d.k.mat());
    for (const Projection* r : {&r1, &r2}) {
        expect(commutes(r->element(), pr.p.element(), c.tol), "candidate fails to commute with p");
        expect(commutes(r->element(), pr.e.element(), c.tol), "candidate fails to commute with e");
        expect(commutes(r->element(), c2, c.tol), "candidate fails to commute with c^2");
        expect(commutes(r->element(), s2, c.tol), "candidate fails to commute with s^2");
        expect(commutes(r->element(), j2, c.tol), "candidate fails to commute with j^2");
        expect(commutes(r->element(), b2, c.tol), "candidate fails to commute with b^2");
        expect(commutes(r->element(), bk, c.tol), "candidate fails to commute with bk");
    }
    expect(commutes(r2.element(), r1.element(), c.tol),
           "projection commuting with p and e fails to commute with [p,e]");
}

void chk_characterize(Ctx& c) {
    const RandomPair pr = draw_pair(c);
    const Projection r = pair_commutator(pr.p, pr.e, c.tol);
    expect(characterization_check(pr.p, pr.e, r, c.tol), "true commutator rejected");
    if (r.rank() > 0)
        expect(!characterization_check(pr.p, pr.e, Projection::zero(c.dim), c.tol),
               "zero accepted although the commutator is nonzero");
    if (r.rank() < c.dim)
        expect(!characterization_check(pr.p, pr.e, Projection::identity(c.dim), c.tol),
               "identity accepted although the commutator is proper");
}

void chk_r_props(Ctx& c) {
    const RandomPair pr = draw_pair(c);
    const PairCommutatorReport rep = inequality_chain(pr.p, pr.e, c.tol);
    expect(commutes(rep.p_r_perp.element(), rep.e_r_perp.element(), c.tol),
           "corner pair beyond the commutator does not commute");
    const CommutatorEffect ce = commutator_effect(pr.p, pr.e, c.tol);
    expect(psd_leq(ce.b.element(), rep.r.element(), c.tol), "b not below the commutator");
    expect(proj_leq(rep.b_carrier, rep.r, c.tol), "b carrier not below the commutator");
    expect(proj_leq(rep.r, rep.cs_meet, c.tol), "commutator not below the carrier meet");
}

void chk_total_noncompat_split(Ctx& c) {
    const RandomPair pr = draw_pair(c);
    const SplitReport sp = split_by_commutator(pr.p, pr.e, c.tol);
    expect_near(c, sp.commuting_corner_residual, 1e-9 * scale_of(pr.e.mat()),
                "commuting corner has a visible off-diagonal effect");
    if (sp.report.r.rank() > 0)
        expect(sp.noncompat_corner_is_unit, "corner commutator inside rAr is not r");
}

void chk_total_noncompat_consequences(Ctx& c) {
    for (int tries = 0; tries < 20; ++tries) {
        Projection p = random_projection(c.rng, c.dim);
        Effect e = c.rng.bernoulli(0.5) ? Effect::from(random_projection(c.rng, c.dim))
                                        : random_effect(c.rng, c.dim);
        const CBSDecomposition d = cbs_decompose(p, e, c.tol);
        const Projection r = pair_commutator(p, e, c.tol);
        if (r.rank() != c.dim) continue;
        c.replay = pair_to_json(p, e, c.tol);
        const CBSCarriers cars = cbs_carriers(d, c.tol);
        expect(cars.c.rank() == c.dim, "totally noncompatible but c carrier proper");
        expect(cars.s.rank() == c.dim, "totally noncompatible but s carrier proper");
        expect(meet(p, d.z, c.tol).rank() == 0, "p ^ z nonzero");
        expect(meet(p, d.t, c.tol).rank() == 0, "p ^ t nonzero");
        expect(meet(ortho(p), d.z, c.tol).rank() == 0, "p' ^ z nonzero");
        expect(meet(ortho(p), d.t, c.tol).rank() == 0, "p' ^ t nonzero");
        return;
    }
}

void chk_corner_commutator(Ctx& c) {
    const RandomPair pr = draw_pair(c);
    const Projection r = pair_commutator(pr.p, pr.e, c.tol);
    const std::vector<std::vector<double>> seeds{random_unit_vector(c.rng, c.dim)};
    const Projection q = reducing_subspace_closure(seeds, pr.p, pr.e, c.tol);
    if (q.rank() == 0) return;
    const CornerBasis basis = corner_basis(q, c.tol);
    const Projection cp = Projection::checked(compress(pr.p.element(), basis), c.tol);
    const Effect ce = Effect::checked(compress(pr.e.element(), basis), c.tol);
    const Projection cr = pair_commutator(cp, ce, c.tol);
    const Projection lifted = Projection::checked(sym(lift(cr.element(), basis).mat()), c.tol);
    expect(projections_equal(lifted, meet(r, q, c.tol), 1e-7),
           "corner commutator differs from r ^ q");
}

// ====================== Atom infima ======================

void chk_atom_infimum(Ctx& c) {
    const Projection p = random_projection_of_rank(c.rng, c.dim, 1);
    if (c.rng.bernoulli(0.2)) {
        const Matrix pp = ortho(p).mat();
        const Effect f = random_effect(c.rng, c.dim);
        const Effect e = Effect::checked(sym(pp * f.mat() * pp), c.tol);
        c.replay = pair_to_json(p, e, c.tol);
        const AtomInfimumRecord rec = inf_with_atom_complement(e, p, c.tol);
        expect(rec.branch == AtomInfimumRecord::Branch::alpha_zero,
               "effect below p' did not take the alpha = 0 branch");
        expect_near(c, max_abs_diff(rec.infimum.mat(), e.mat()), 1e-12,
                    "alpha = 0 branch must return e unchanged");
        return;
    }
    const Effect e = random_effect(c.rng, c.dim);
    c.replay = pair_to_json(p, e, c.tol);
    const AtomInfimumRecord rec = inf_with_atom_complement(e, p, c.tol);
    const Effect& m = rec.infimum;
    expect(psd_leq(m.element(), e.element(), c.tol), "infimum not below e");
    expect(psd_leq(m.element(), ortho(p).element(), c.tol), "infimum not below p'");

    const Effect w = random_effect(c.rng, c.dim);
    const SymmetricElement sq = sqrt_psd(m.element(), c.tol);
    const SymmetricElement g = sym(sq.mat() * w.mat() * sq.mat());
    const double gamma = c.rng.uniform();
    const SymmetricElement f = gamma * m.element() + (1.0 - gamma) * g;
    expect(psd_leq(f, e.element(), c.tol), "lower-bound family member escapes e");
    expect(psd_leq(f, ortho(p).element(), c.tol), "lower-bound family member escapes p'");

    if (c.dim == 2) {
        const double beta = atom_lower_bound_oracle(e, ortho(p), c.tol);
        expect_near(c, max_abs_diff(m.mat(), beta * ortho(p).mat()),
                    1e-9 * scale_of(e.mat()), "closed form differs from the bisection oracle");
        if (beta > 1e-6)
            expect(psd_leq((beta - 1e-9) * ortho(p).element(), m.element(), c.tol),
                   "oracle lower bound exceeds the closed form");
    }
}

void chk_ygystar(Ctx& c) {
    const Projection p = random_projection_of_rank(c.rng, c.dim, 1);
    Effect e = random_effect(c.rng, c.dim);
    for (int tries = 0; tries < 20 && atom_mean(e, p, c.tol) < 1e-6; ++tries)
        e = random_effect(c.rng, c.dim);
    if (atom_mean(e, p, c.tol) < 1e-6) return;
    c.replay = pair_to_json(p, e, c.tol);
    const AtomInfimumRecord rec = inf_with_atom_complement(e, p, c.tol);
    expect(rec.branch == AtomInfimumRecord::Branch::general, "expected the general branch");
    const Matrix& A = rec.a_element->mat();
    const Matrix I = Matrix::identity(c.dim);
    const Matrix Pp = ortho(p).mat();
    const Matrix y = Pp * (I - A);
    const Matrix ystar = (I - A) * Pp;
    const double sc = scale_of(e.mat());
    expect_near(c, max_abs_diff(y * e.mat() * ystar, rec.infimum.mat()), 1e-8 * sc,
                "y e y* differs from the infimum");
    const Effect w = random_effect(c.rng, c.dim);
    const Matrix f = c.rng.uniform() * (Pp * w.mat() * Pp);
    expect_near(c, max_abs_diff(y * f * ystar, f), 1e-8 * sc,
                "y f y* != f for f supported below p'");
}

void chk_mean_identities(Ctx& c) {
    const Projection p = random_projection_of_rank(c.rng, c.dim, 1);
    Effect e = random_effect(c.rng, c.dim);
    for (int tries = 0; tries < 20 && atom_mean(e, p, c.tol) < 1e-6; ++tries)
        e = random_effect(c.rng, c.dim);
    const double alpha = atom_mean(e, p, c.tol);
    if (alpha < 1e-6) return;
    c.replay = pair_to_json(p, e, c.tol);
    const AtomInfimumRecord rec = inf_with_atom_complement(e, p, c.tol);
    expect(rec.a_element.has_value(), "general branch must expose a");
    const Matrix& A = rec.a_element->mat();
    const Matrix& P = p.mat();
    const Matrix& E = e.mat();
    const Matrix Pp = ortho(p).mat();
    const double sc = scale_of(E);
    expect_near(c, max_abs_diff(P * A * P, Matrix(c.dim)), 1e-9 * sc, "pap != 0");
    expect_near(c, max_abs_diff(Pp * A * Pp, Matrix(c.dim)), 1e-9 * sc, "p'ap' != 0");
    expect_near(c, max_abs_diff(alpha * P + alpha * A + Pp * E * Pp, E), 1e-9 * sc,
                "e != alpha p + alpha a + s^2 p'");
    const CommutatorEffect ce = commutator_effect(p, e, c.tol);
    expect_near(c,
                max_abs_diff(alpha * alpha * (A * A), ce.b.mat() * ce.b.mat()), 1e-8 * sc,
                "alpha^2 a^2 != b^2");
    expect_near(c,
                max_abs_diff(E * P * E,
                             alpha * alpha * P + alpha * alpha * A +
                                 ce.b.mat() * ce.b.mat() * Pp),
                1e-8 * sc, "epe != alpha^2 p + alpha^2 a + b^2 p'");
    expect_near(c, ((A * P) * (A * P)).frobenius_norm(), 1e-9 * sc, "(ap)^2 != 0");
    expect_near(c, ((P * A) * (P * A)).frobenius_norm(), 1e-9 * sc, "(pa)^2 != 0");
}

void chk_atom_compression(Ctx& c) {
    const std::vector<double> v = random_unit_vector(c.rng, c.dim);
    const Projection p = Projection::onto_line(v);
    const SymmetricElement x = random_symmetric(c.rng, c.dim);
    double omega = 0.0;
    for (std::size_t i = 0; i < c.dim; ++i)
        for (std::size_t j = 0; j < c.dim; ++j) omega += v[i] * x.mat()(i, j) * v[j];
    expect_near(c, max_abs_diff(p.mat() * x.mat() * p.mat(), omega * p.mat()),
                1e-10 * scale_of(x.mat()), "pxp is not a scalar multiple of the atom");
    const Effect e = random_effect(c.rng, c.dim);
    const double alpha = atom_mean(e, p, c.tol);
    double direct = 0.0;
    for (std::size_t i = 0; i < c.dim; ++i)
        for (std::size_t j = 0; j < c.dim; ++j) direct += v[i] * e.mat()(i, j) * v[j];
    expect_near(c, std::fabs(alpha - direct), 1e-10, "atom mean differs from v'ev");
    expect(alpha >= -c.tol.psd_eps && alpha <= 1.0 + c.tol.psd_eps, "atom mean outside [0,1]");
}

void chk_atom_oracle(Ctx& c) {
    Effect e = random_effect(c.rng, c.dim);
    for (int tries = 0; tries < 20; ++tries) {
        const EigenDecomposition d = sym_eigen(e.element(), c.tol);
        if (d.eigenvalues.front() > 1e-4) break;
        e = random_effect(c.rng, c.dim);
    }
    const EigenDecomposition d = sym_eigen(e.element(), c.tol);
    if (d.eigenvalues.front() <= 1e-4) return;
    const std::vector<double> v = random_unit_vector(c.rng, c.dim);
    const Projection w = Projection::onto_line(v);
    const double beta = atom_lower_bound_oracle(e, w, c.tol);
    double quad = 0.0; // v' e^{-1} v through the eigenbasis
    for (std::size_t k = 0; k < c.dim; ++k) {
        double comp = 0.0;
        for (std::size_t i = 0; i < c.dim; ++i) comp += d.eigenvectors(i, k) * v[i];
        quad += comp * comp / d.eigenvalues[k];
    }
    const double closed = std::min(1.0, 1.0 / quad);
    expect_near(c, std::fabs(beta - closed), 1e-9 * (1.0 + closed),
                "bisection oracle differs from the resolvent formula");
    expect(psd_leq(beta * w.element(), e.element(), c.tol), "oracle value is not a lower bound");
    if (beta < 1.0 - 1e-5)
        expect(!psd_leq((beta + 1e-5) * w.element(), e.element(), c.tol),
               "oracle value is not maximal");
}

void chk_projection_infimum(Ctx& c) {
    const Effect e = random_effect(c.rng, c.dim);
    const double roll = c.rng.uniform();
    if (roll < 0.1) {
        const Effect m = inf_with_projection(e, Projection::identity(c.dim), c.tol);
        expect_near(c, max_abs_diff(m.mat(), e.mat()), 1e-12, "e ^ 1 != e");
        return;
    }
    if (roll < 0.2) {
        const Effect m = inf_with_projection(e, Projection::zero(c.dim), c.tol);
        expect_near(c, m.element().frobenius_norm(), 1e-9, "e ^ 0 != 0");
        return;
    }
    const Projection q = random_projection(c.rng, c.dim);
    const Effect m = inf_with_projection(e, q, c.tol);
    const double sc = scale_of(e.mat());
    expect(psd_leq(m.element(), e.element(), c.tol), "infimum not below e");
    expect(psd_leq(m.element(), q.element(), c.tol), "infimum not below q");

    const CornerBasis basis = corner_basis(ortho(q), c.tol);
    std::vector<Projection> atoms;
    for (const std::vector<double>& col : basis.columns) atoms.push_back(Projection::onto_line(col));
    const Effect forward = fold_atom_infima(e, atoms, c.tol);
    std::reverse(atoms.begin(), atoms.end());
    const Effect backward = fold_atom_infima(e, atoms, c.tol);
    expect_near(c, max_abs_diff(forward.mat(), backward.mat()), 1e-9 * sc,
                "atom folds depend on the order");
    expect_near(c, max_abs_diff(forward.mat(), m.mat()), 1e-9 * sc,
                "atom folds depend on the basis");

    const Effect f0 = random_effect(c.rng, c.dim);
    const SymmetricElement h = sym(q.mat() * f0.mat() * q.mat());
    const double gamma = max_scale_below(h, e.element(), c.tol);
    if (gamma > 1e-6)
        expect(psd_leq((0.999 * gamma) * h, m.element(), c.tol),
               "common lower bound exceeds the computed infimum");

    const CommutingPair cp = random_commuting_pair(c.rng, c.dim);
    const Effect mc = inf_with_projection(cp.e, cp.p, c.tol);
    expect_near(c, max_abs_diff(mc.mat(), sym(cp.e.mat() * cp.p.mat()).mat()),
                1e-8 * scale_of(cp.e.mat()), "commuting infimum is not the product");
}

struct CheckDef {
    const char* id;
    const char* summary;
    void (*fn)(Ctx&);
};

const CheckDef kChecks[] = {
    {"eig:reconstruction", "eigendecomposition rebuilds its input", chk_eig_reconstruction},
    {"eig:orthogonality", "eigenvector bases are orthonormal", chk_eig_orthogonality},
    {"eig:determinism", "eigendecomposition is bit-reproducible", chk_eig_determinism},
    {"order:psd-leq", "Loewner order detects shifts by positives", chk_psd_leq},
    {"calculus:apply-commutes", "functional calculus matches products and commutes",
     chk_apply_commutes},
    {"calculus:polar", "polar decomposition a = |a|u", chk_polar},
    {"calculus:symmetry-conjugation", "symmetries preserve order and carriers",
     chk_symmetry_conjugation},
    {"carrier:annihilation", "carrier supports its element with the right rank",
     chk_carrier_annihilation},
    {"carrier:monotone", "carriers are monotone along the positive order", chk_carrier_monotone},
    {"lm:carrierofsum", "carrier of a positive sum is the join of carriers", chk_carrier_of_sum},
    {"lm:carrierofprod", "carrier of a commuting product is the meet of carriers",
     chk_carrier_of_product},
    {"lm:diagzero", "a positive element vanishes with its diagonal part", chk_diag_zero},
    {"lm:offdiagzero", "off-diagonal part measures noncommutation exactly", chk_offdiag_zero},
    {"rk:RatSpecCommute", "commuting with a equals commuting with all its cuts",
     chk_rational_spectral_commute},
    {"spectral:monotone", "spectral cuts ascend and rebuild the element", chk_spectral_monotone},
    {"lattice:orthomodular", "meets, joins, and the orthomodular law", chk_orthomodular},
    {"lattice:pqp-carrier", "(pqp) carrier equals p ^ (p' v q)", chk_pqp_carrier},
    {"th:distributive", "distributivity when one projection commutes with the others",
     chk_distributive},
    {"lm:infsupinP", "the lattice meet is the infimum among effects", chk_inf_sup_in_p},
    {"rm:Freplacement", "finite-set commutator invariances", chk_f_replacement},
    {"lm:[F]Props", "finite-set commutator commutes and splits the set", chk_fsc_props},
    {"th:effleqproj", "effect below a projection iff absorbed by it", chk_effect_below_projection},
    {"lm:eCf", "product of commuting projections is their meet and infimum",
     chk_commuting_product_is_meet},
    {"lm:effectconds", "a^2 <= 1 iff a <= 1 for positive a", chk_effect_conditions},
    {"th:largestsubproj", "largest subprojections z and t from the spectrum",
     chk_largest_subprojections},
    {"co:zPropscor", "e - z and e - e^2 structure", chk_z_props},
    {"lm:SRofqaq", "corner spectral cuts are cut ^ q", chk_corner_spectral},
    {"lm:components", "Peirce parts resum and corner components behave", chk_components},
    {"lm:ecsProps", "cosine and sine identities", chk_ecs_props},
    {"lm:squareofcs", "(cs)^2 = c^2 s^2 = j^2 + offdiag^2", chk_square_of_cs},
    {"th:CBSdecomp", "e = c^2 p + bk + s^2 p' with the side identities",
     chk_cbs_decomposition},
    {"th:ecarcs", "carrier formulas for c, s, j, cs", chk_cbs_carriers},
    {"lm:einP", "projection effects: j = 0 and b = cs", chk_e_in_p},
    {"lm:pCe", "b vanishes exactly for commuting pairs", chk_p_commutes_e},
    {"th:esubq", "decomposition restricts to commuting corners", chk_restrict_cbs},
    {"lm:bdg", "atom case: k exchanges p and v = kpk, b = beta(p + v)", chk_atom_exchange},
    {"cbs:generic-position", "balanced pairs land in generic position", chk_generic_position},
    {"th:commutatorineq", "chain b <= b deg <= [p,e] <= c deg ^ s deg", chk_commutator_chain},
    {"co:equalityofcoms", "[p,e] vs Marsden and the b-carrier equality criterion",
     chk_equality_of_commutators},
    {"co:[p,e]", "[p,e] commutes with the pair and vanishes iff they commute",
     chk_pair_commutator_props},
    {"th:altchar[p,e]", "lattice formula agrees with the closure algorithm", chk_dual_algorithm},
    {"lm:randCBS", "[p,e] and sampled reducing projections commute with every part",
     chk_rand_cbs},
    {"th:Characterize[p,e]", "[p,e] is the smallest projection with the corner property",
     chk_characterize},
    {"th:rProps", "the r' corner commutes and b stays below r", chk_r_props},
    {"th:totnoncomp", "splitting into commuting and totally noncompatible corners",
     chk_total_noncompat_split},
    {"lm:totnoncomp", "total noncompatibility forces full carriers and zero meets",
     chk_total_noncompat_consequences},
    {"th:cominqAq", "corner commutator equals r ^ q", chk_corner_commutator},
    {"th:MGL3.8", "closed-form e ^ p' for an atom p", chk_atom_infimum},
    {"lm:ygystar", "y e y* reproduces the infimum and fixes corner effects", chk_ygystar},
    {"lm:MB01", "atom-mean identities and nilpotents", chk_mean_identities},
    {"lm:pAp,patom", "pAp is one-dimensional for an atom p", chk_atom_compression},
    {"inf:atom-oracle", "bisection oracle matches the resolvent closed form", chk_atom_oracle},
    {"co:MG3.9", "e ^ q via order-independent atom folds", chk_projection_infimum},
};

} // namespace

long long VerificationReport::total_trials() const {
    long long total = 0;
    for (const CheckResult& r : results) total += r.trials_run;
    return total;
}

long long VerificationReport::total_failures() const {
    long long total = 0;
    for (const CheckResult& r : results) total += r.trials_failed;
    return total;
}

bool VerificationReport::all_passed() const { return total_failures() == 0; }

std::vector<std::string> battery_check_ids() {
    std::vector<std::string> ids;
    for (const CheckDef& def : kChecks) ids.emplace_back(def.id);
    return ids;
}

VerificationReport run_battery(const BatteryOptions& options) {
    if (options.trials < 1) throw std::invalid_argument("trials must be at least 1");
    if (options.dim_lo < 2) throw std::invalid_argument("dimensions start at 2");
    if (options.dim_hi < options.dim_lo) throw std::invalid_argument("empty dimension range");
    if (options.dim_hi > 16) throw std::invalid_argument("dimensions beyond 16 are not supported");
    options.tol.validate();

    std::vector<const CheckDef*> enabled;
    for (const CheckDef& def : kChecks)
        if (options.filter.empty() ||
            std::string_view(def.id).find(options.filter) != std::string_view::npos)
            enabled.push_back(&def);
    if (enabled.empty())
        throw std::invalid_argument("check filter \"" + options.filter + "\" matches nothing");

    const auto start = std::chrono::steady_clock::now();
    VerificationReport report;
    report.options = options;
    for (const CheckDef* def : enabled) {
        CheckResult res;
        res.id = def->id;
        res.summary = def->summary;
        const std::uint64_t id_hash = fnv1a(def->id);
        for (int trial = 0; trial < options.trials; ++trial) {
            ++res.trials_run;
            bool failed = false;
            for (std::size_t dim = options.dim_lo; dim <= options.dim_hi && !failed; ++dim) {
                Ctx ctx{dim, trial,
                        Rng(derive_seed(options.seed, id_hash, dim, static_cast<std::uint64_t>(trial))),
                        options.tol, {}, 0.0};
                try {
                    def->fn(ctx);
                } catch (const std::exception& ex) {
                    failed = true;
                    if (!res.first_failure)
                        res.first_failure = CheckFailure{dim, trial, ex.what(), ctx.replay};
                }
                res.worst_residual = std::max(res.worst_residual, ctx.worst);
            }
            if (failed) ++res.trials_failed;
        }
        report.results.push_back(std::move(res));
    }
    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

} // namespace synalg
