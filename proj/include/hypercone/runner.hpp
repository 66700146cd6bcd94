#pragma once

// Experiment pipeline: classify -> symmetrizer build/validate -> lattice
// solve -> enabled verifications, with a manifest and per-check reports
// written to the output directory.

#include "hypercone/config.hpp"
#include "hypercone/verify.hpp"

namespace hypercone {

struct RunOutcome {
    int exit_code = 0; // 0 pass / 1 check-fail / 2 config / 3 runtime
    bool all_pass = true;
    nlohmann::json manifest;
    std::string message; // populated on errors
};

/// Runs the pipeline described by `cfg`. When `check_filter` is nonempty only
/// the named check (cone|dod|pw|energy|mollify_bounds) executes; symmetrizer
/// validation and the solve always run.
RunOutcome run_experiment(const ExperimentConfig& cfg, const std::string& check_filter = "");

/// Same, reading and validating the config file first.
RunOutcome run_experiment_file(const std::string& config_path, const std::string& out_override,
                               int threads_override, std::uint64_t seed_override,
                               bool has_seed_override, const std::string& check_filter);

/// Mutation self-test proving the guards can fail: halving the cone radii
/// must flip the support check, and a 1% skew of the symmetrizer must flip
/// the mollified matrix inequality. Returns 0 when both mutations are caught.
int run_selftest();

} // namespace hypercone
