#include "synalg/random_pairs.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace synalg {

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return mag * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) {
    std::uint64_t state = base ^ 0xA0761D6478BD642FULL;
    std::uint64_t out = splitmix64(state);
    for (std::uint64_t coord : {a, b, c}) {
        state ^= coord * 0xE7037ED1A0B428DBULL;
        out ^= splitmix64(state);
    }
    return out;
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char ch : s) {
        h ^= static_cast<unsigned char>(ch);
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::vector<double> random_unit_vector(Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (double& x : v) {
            x = rng.normal();
            norm2 += x * x;
        }
    } while (norm2 < 1e-12);
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& x : v) x *= inv;
    return v;
}

Matrix random_rotation(Rng& rng, std::size_t n) {
    Matrix q(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> v(n);
        double norm = 0.0;
        while (true) {
            for (double& x : v) x = rng.normal();
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t prev = 0; prev < j; ++prev) {
                    double dot = 0.0;
                    for (std::size_t i = 0; i < n; ++i) dot += q(i, prev) * v[i];
                    for (std::size_t i = 0; i < n; ++i) v[i] -= dot * q(i, prev);
                }
            }
            double norm2 = 0.0;
            for (double x : v) norm2 += x * x;
            norm = std::sqrt(norm2);
            if (norm > 1e-6) break;
        }
        double lead = 0.0;
        for (double x : v) {
            if (std::fabs(x) > 1e-10) {
                lead = x;
                break;
            }
        }
        const double scale = (lead < 0.0 ? -1.0 : 1.0) / norm;
        for (std::size_t i = 0; i < n; ++i) q(i, j) = v[i] * scale;
    }
    return q;
}

Projection random_projection_of_rank(Rng& rng, std::size_t n, std::size_t r) {
    if (r > n) throw std::invalid_argument("random_projection_of_rank: rank exceeds dimension");
    if (r == 0) return Projection::zero(n);
    if (r == n) return Projection::identity(n);
    const Matrix q = random_rotation(rng, n);
    std::vector<std::size_t> cols(r);
    for (std::size_t i = 0; i < r; ++i) cols[i] = i;
    return Projection::span_of_columns(q, cols);
}

Projection random_projection(Rng& rng, std::size_t n) {
    if (n < 2) throw std::invalid_argument("random_projection: dimension must be at least 2");
    return random_projection_of_rank(rng, n, 1 + rng.below(n - 1));
}

Effect random_effect(Rng& rng, std::size_t n) {
    const Matrix q = random_rotation(rng, n);
    std::vector<double> u(n);
    for (double& x : u) x = rng.uniform();
    return trusted_effect(from_eigenpairs(u, q));
}

Effect random_projection_effect(Rng& rng, std::size_t n) {
    const Matrix q = random_rotation(rng, n);
    std::vector<double> u(n);
    for (double& x : u) x = rng.bernoulli(0.5) ? 1.0 : 0.0;
    return trusted_effect(from_eigenpairs(u, q));
}

RandomPair random_pair(Rng& rng, std::size_t n) {
    RandomPair pair;
    pair.p = random_projection(rng, n);
    pair.snapped = rng.bernoulli(0.25);
    pair.e = pair.snapped ? random_projection_effect(rng, n) : random_effect(rng, n);
    return pair;
}

SymmetricElement random_symmetric(Rng& rng, std::size_t n, double scale) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = scale * rng.normal();
    return SymmetricElement::symmetrized(m);
}

SymmetricElement random_psd(Rng& rng, std::size_t n, std::size_t rank, double lo, double hi) {
    if (rank > n) throw std::invalid_argument("random_psd: rank exceeds dimension");
    const Matrix q = random_rotation(rng, n);
    std::vector<double> vals(n, 0.0);
    for (std::size_t i = 0; i < rank; ++i) vals[i] = rng.uniform(lo, hi);
    return from_eigenpairs(vals, q);
}

CommutingPair random_commuting_pair(Rng& rng, std::size_t n) {
    const Matrix q = random_rotation(rng, n);
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < n; ++i)
        if (rng.bernoulli(0.5)) cols.push_back(i);
    std::vector<double> u(n);
    for (double& x : u) x = rng.uniform();
    return CommutingPair{Projection::span_of_columns(q, cols),
                         trusted_effect(from_eigenpairs(u, q))};
}

BlockTriple random_block_triple(Rng& rng, std::size_t n) {
    if (n < 2) throw std::invalid_argument("random_block_triple: dimension must be at least 2");
    const std::size_t m = 1 + rng.below(n - 1);

    auto block_pair = [&](std::size_t s, Matrix& pd, Matrix& ed, std::size_t offset,
                          std::size_t& rank_acc) {
        if (s == 1) {
            const bool on = rng.bernoulli(0.5);
            pd(offset, offset) = on ? 1.0 : 0.0;
            if (on) ++rank_acc;
            ed(offset, offset) = rng.uniform();
            return;
        }
        const Projection sp = random_projection(rng, s);
        const Effect se = random_effect(rng, s);
        rank_acc += sp.rank();
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = 0; j < s; ++j) {
                pd(offset + i, offset + j) = sp.mat()(i, j);
                ed(offset + i, offset + j) = se.mat()(i, j);
            }
    };

    Matrix pd(n), ed(n);
    std::size_t p_rank = 0;
    block_pair(m, pd, ed, 0, p_rank);
    block_pair(n - m, pd, ed, m, p_rank);

    Matrix qd(n);
    for (std::size_t i = 0; i < m; ++i) qd(i, i) = 1.0;

    const Matrix rot = random_rotation(rng, n);
    const Matrix rot_t = rot.transpose();
    BlockTriple out;
    out.p = Projection::checked(sym(rot * pd * rot_t));
    out.e = Effect::checked(sym(rot * ed * rot_t));
    out.q = Projection::checked(sym(rot * qd * rot_t));
    return out;
}

} // namespace synalg
