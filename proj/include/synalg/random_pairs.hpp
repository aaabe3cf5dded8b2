#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "synalg/effect.hpp"

namespace synalg {

// Deterministic random source. All floating-point draws are derived from the
// raw 64-bit engine output by fixed arithmetic, so a given seed reproduces
// the same stream on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    double normal();

    std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Splitmix64 fold of the base seed with up to three stream coordinates;
// distinct coordinates give statistically independent streams.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

// FNV-1a hash, used to turn check identifiers into stream coordinates.
std::uint64_t fnv1a(std::string_view s);

std::vector<double> random_unit_vector(Rng& rng, std::size_t n);

// Haar-like random rotation: Gram-Schmidt of a Gaussian matrix with a
// deterministic sign convention.
Matrix random_rotation(Rng& rng, std::size_t n);

Projection random_projection_of_rank(Rng& rng, std::size_t n, std::size_t r);

// Rank uniform in 1..n-1 (requires n >= 2).
Projection random_projection(Rng& rng, std::size_t n);

// Eigenvalues uniform in [0,1] against a random rotation.
Effect random_effect(Rng& rng, std::size_t n);

// Eigenvalues snapped to {0,1}: a uniformly random projection seen as an effect.
Effect random_projection_effect(Rng& rng, std::size_t n);

// Standard pair used by the verification battery: independent rotations for
// p and e; with probability 1/4 the eigenvalues of e snap to {0,1} so that
// projection and degenerate branches stay exercised.
struct RandomPair {
    Projection p;
    Effect e;
    bool snapped = false;
};

RandomPair random_pair(Rng& rng, std::size_t n);

// Entries Gaussian * scale, symmetrized.
SymmetricElement random_symmetric(Rng& rng, std::size_t n, double scale = 1.0);

// Positive semidefinite with the given rank; nonzero eigenvalues uniform in
// [lo, hi], keeping them away from the rank threshold.
SymmetricElement random_psd(Rng& rng, std::size_t n, std::size_t rank, double lo = 0.1,
                            double hi = 2.0);

// p and e diagonal in a shared random eigenbasis, hence commuting.
struct CommutingPair {
    Projection p;
    Effect e;
};

CommutingPair random_commuting_pair(Rng& rng, std::size_t n);

// Two independent pairs placed in complementary blocks and conjugated by a
// common rotation; q is the block indicator, so q commutes with p and e.
struct BlockTriple {
    Projection p;
    Effect e;
    Projection q;
};

BlockTriple random_block_triple(Rng& rng, std::size_t n);

} // namespace synalg
