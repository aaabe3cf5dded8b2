#pragma once

#include <stdexcept>
#include <string>

namespace synalg {

// Thrown when a numerical routine cannot reach its target accuracy
// (e.g. the eigensolver fails to converge). Carries the achieved residual.
class numerical_failure : public std::runtime_error {
public:
    numerical_failure(const std::string& what, double residual)
        : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
          residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// Thrown when a structural invariant that the library guarantees by
// construction is found violated at runtime (a bug or an input far outside
// the tolerance regime), e.g. a nominal projection whose spectrum is not {0,1}.
class invariant_violation : public std::runtime_error {
public:
    explicit invariant_violation(const std::string& what)
        : std::runtime_error(what) {}
};

// Thrown when a configurable resource cap would be exceeded
// (e.g. too many generators for the finite-set commutator enumeration).
class resource_limit_exceeded : public std::runtime_error {
public:
    explicit resource_limit_exceeded(const std::string& what)
        : std::runtime_error(what) {}
};

} // namespace synalg
