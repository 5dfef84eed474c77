#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gti {

struct VerifyOptions {
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    std::size_t max_docs = 2000;
    /// 0 uses the OpenMP default; 1 runs the serial reference path.
    int threads = 0;

    void validate() const;
};

/// Tally of one checked property across a campaign.
struct CheckTally {
    std::string name;
    /// Trials where the property was attempted.
    std::size_t attempted = 0;
    /// Trials whose preconditions held, so the property was actually tested.
    std::size_t tested = 0;
    std::size_t violations = 0;
    /// Seed of the first violating trial, in trial order.
    std::optional<std::uint64_t> first_violation_seed;
    std::string first_violation;
};

struct VerifyReport {
    std::size_t trials = 0;
    std::vector<CheckTally> checks;
    double seconds = 0.0;

    [[nodiscard]] auto violations() const -> std::size_t;
    [[nodiscard]] auto find(std::string const& name) const -> CheckTally const*;
};

/// Outcome of a single check inside one trial.
struct TrialCheck {
    bool tested = false;
    bool violated = false;
    std::string detail;
};

/// All checks of one trial, in the order of `check_names()`.
struct TrialOutcome {
    std::uint64_t seed = 0;
    std::vector<TrialCheck> checks;
};

/// rank_safety_maxscore, rank_safety_bmw, containment, mean_gamma, relevant_count.
[[nodiscard]] auto check_names() -> std::vector<std::string> const&;

/// Draw a random corpus and query from `seed` and run every check on it.
/// Deterministic in (seed, max_docs).
[[nodiscard]] auto run_trial(std::uint64_t seed, std::size_t max_docs) -> TrialOutcome;

/// Trial t uses seed `options.seed + t`; `--seed <that> --trials 1` reproduces it.
[[nodiscard]] auto run_verify(VerifyOptions const& options) -> VerifyReport;
[[nodiscard]] auto run_verify_serial(VerifyOptions const& options) -> VerifyReport;

void write_verify_report(std::ostream& out, VerifyReport const& report);

}  // namespace gti
