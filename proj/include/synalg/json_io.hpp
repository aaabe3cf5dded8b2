#pragma once

#include <string>
#include <string_view>

#include "synalg/effect.hpp"

namespace synalg {

// JSON input/output for pair instances. Output goes through a fixed-format
// writer (17 significant digits, fixed key order) so identical inputs give
// byte-identical documents, which the replay workflow depends on.

struct PairInput {
    std::size_t dim = 0;
    Projection p;
    Effect e;
    ToleranceConfig tol;
};

// Parses {"dim": n, "p": [[...]], "e": [[...]], "tol": {...overrides...}}.
// The matrices must be n x n, symmetric to 1e-8, and pass Projection/Effect
// validation. Every failure throws std::invalid_argument naming the field or
// the violated invariant.
PairInput parse_pair_input(const std::string& text);

// Parses a {"q": [[...]]} document (key "p" also accepted) into a validated
// projection of the expected dimension.
Projection parse_projection_input(const std::string& text, std::size_t expected_dim,
                                  const ToleranceConfig& tol = {});

// 17 significant digits; enough to round-trip any double exactly.
std::string format_double(double x);

std::string json_escape(std::string_view s);

// Row-major nested arrays [[...],[...]].
std::string matrix_to_json(const Matrix& m);

// Replay document accepted by parse_pair_input; includes the tolerances.
std::string pair_to_json(const Projection& p, const Effect& e, const ToleranceConfig& tol);

} // namespace synalg
