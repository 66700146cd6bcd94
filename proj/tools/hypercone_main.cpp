// Command-line driver: declarative experiment runs plus focused report
// subcommands. Exit codes: 0 all enabled checks pass, 1 check failure,
// 2 configuration error, 3 runtime error.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "hypercone/runner.hpp"
#include "hypercone/version.hpp"

namespace {

struct CommonArgs {
    std::string config;
    std::string out;
    int threads = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string check;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_check) {
    cmd->add_option("--config", args.config, "experiment config (JSON)")->required();
    cmd->add_option("--out", args.out, "output directory (overrides config)");
    cmd->add_option("--threads", args.threads, "worker threads (overrides config and env)");
    cmd->add_option("--seed", args.seed, "seed override")->each([&args](const std::string&) {
        args.seed_set = true;
    });
    if (with_check) cmd->add_option("--check", args.check, "run only the named check");
}

int dispatch(const CommonArgs& args, const std::string& filter) {
    hypercone::RunOutcome out = hypercone::run_experiment_file(
        args.config, args.out, args.threads, args.seed, args.seed_set, filter);
    if (!out.message.empty()) std::fprintf(stderr, "error: %s\n", out.message.c_str());
    if (out.exit_code == 0)
        std::printf("ok: all enabled checks passed\n");
    else if (out.exit_code == 1)
        std::printf("FAIL: at least one enabled check failed\n");
    return out.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("hypercone ") + hypercone::kVersion +
                 " - spectral verification lab for hyperbolic systems"};
    app.require_subcommand(1);

    CommonArgs sim_args, cone_args, pw_args, energy_args, molly_args, symm_args;

    CLI::App* simulate = app.add_subcommand("simulate", "full pipeline with all enabled checks");
    add_common(simulate, sim_args, true);

    CLI::App* verify_symm =
        app.add_subcommand("verify-symmetrizer", "classify and validate the symmetrizer only");
    add_common(verify_symm, symm_args, false);

    CLI::App* molly = app.add_subcommand("mollifier-report", "mollification bound diagnostics");
    add_common(molly, molly_args, false);

    CLI::App* cone = app.add_subcommand("cone-report", "support radius vs forward cone");
    add_common(cone, cone_args, false);

    CLI::App* pw = app.add_subcommand("pw-probe", "Fourier-Laplace growth probe");
    add_common(pw, pw_args, false);

    CLI::App* energy = app.add_subcommand("energy-report", "per-mode energy envelopes");
    add_common(energy, energy_args, false);

    CLI::App* selftest = app.add_subcommand("selftest", "mutation checks of the verification harness");

    CLI11_PARSE(app, argc, argv);

    if (selftest->parsed()) return hypercone::run_selftest();
    if (simulate->parsed()) return dispatch(sim_args, sim_args.check);
    if (verify_symm->parsed()) {
        // validation always runs; an empty filter that matches nothing skips
        // the optional checks entirely
        return dispatch(symm_args, "validation-only");
    }
    if (molly->parsed()) return dispatch(molly_args, "mollify_bounds");
    if (cone->parsed()) return dispatch(cone_args, "cone");
    if (pw->parsed()) return dispatch(pw_args, "pw");
    if (energy->parsed()) return dispatch(energy_args, "energy");
    return 2;
}
