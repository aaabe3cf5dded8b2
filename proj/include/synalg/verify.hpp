#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "synalg/linalg.hpp"

namespace synalg {

// ====================== Randomized verification battery ======================
//
// Every structural property of the library has a named randomized check.
// A check runs once per trial; inside a trial it sweeps the configured
// dimension range, so the total check count is trials x enabled checks.
// Each (check, dim, trial) triple draws from its own derived random stream,
// which makes the report independent of filtering and execution order.

struct BatteryOptions {
    std::uint64_t seed = 42;
    int trials = 50;
    std::size_t dim_lo = 2;
    std::size_t dim_hi = 5;
    std::string filter; // substring match against check ids; empty keeps all
    ToleranceConfig tol;
};

struct CheckFailure {
    std::size_t dim = 0;
    int trial = 0;
    std::string detail;
    std::string replay_json; // serialized instance when the check has one
};

struct CheckResult {
    std::string id;
    std::string summary;
    long long trials_run = 0;
    long long trials_failed = 0;
    double worst_residual = 0.0;
    std::optional<CheckFailure> first_failure;

    bool passed() const noexcept { return trials_failed == 0; }
};

struct VerificationReport {
    BatteryOptions options;
    std::vector<CheckResult> results;
    double elapsed_seconds = 0.0;

    long long total_trials() const;
    long long total_failures() const;
    bool all_passed() const;
};

// Identifiers of every check in registry order.
std::vector<std::string> battery_check_ids();

// Runs the battery. Throws std::invalid_argument when trials < 1, the
// dimension range is empty or starts below 2, or the filter matches nothing.
VerificationReport run_battery(const BatteryOptions& options);

} // namespace synalg
