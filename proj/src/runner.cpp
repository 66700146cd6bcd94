#include "hypercone/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "hypercone/presets.hpp"
#include "hypercone/version.hpp"

namespace hypercone {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

void write_json(const fs::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

// every emitted report carries the artifact version and the config hash
json stamped(json doc, const std::string& hash) {
    if (!doc.is_object()) doc = json{{"entries", doc}};
    doc["artifact_version"] = kVersion;
    doc["config_hash"] = hash;
    return doc;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string snapshot_csv(const Field& f) {
    std::ostringstream os;
    if (f.grid.dim == 1)
        os << "x";
    else
        os << "x,y";
    for (int c = 0; c < f.m; ++c) os << ",u" << c;
    os << "\n";
    for (std::size_t p = 0; p < f.grid.points(); ++p) {
        auto x = f.grid.x(p);
        os << fmt(x[0]);
        if (f.grid.dim == 2) os << "," << fmt(x[1]);
        for (int c = 0; c < f.m; ++c) os << "," << fmt(f.at(c, p));
        os << "\n";
    }
    return os.str();
}

/// 100 seeded (t, xi, eps) probes of lambda Id <= S_eps <= Lambda Id.
json molly_bounds_probe(const MollifiedSymmetrizer& ms, int n, double T, std::uint64_t seed,
                        bool& pass) {
    std::mt19937_64 rng(seed ^ 0x6d6f6c6c79ULL);
    std::uniform_real_distribution<double> ut(0.0, T);
    std::uniform_real_distribution<double> ue(0.02, std::min(1.0, T / 2.0));
    std::uniform_real_distribution<double> ux(-1.0, 1.0);
    double lam = ms.base().lambda(), Lam = ms.base().Lambda();
    double slack = 1e-9 * std::max(1.0, Lam);
    double worst = 0.0;
    pass = true;
    for (int k = 0; k < 100; ++k) {
        double t = ut(rng);
        double eps = ue(rng);
        std::vector<double> xi(static_cast<std::size_t>(n));
        double nx = 0.0;
        do {
            nx = 0.0;
            for (auto& v : xi) {
                v = ux(rng);
                nx += v * v;
            }
        } while (nx < 1e-4);
        PsdBounds b = psd_bounds(ms.at(eps, t, xi), 1e-8);
        worst = std::max({worst, lam - b.min_eig, b.max_eig - Lam});
    }
    pass = worst <= slack;
    json j;
    j["pass"] = pass;
    j["worst_violation"] = worst;
    j["slack"] = slack;
    j["samples"] = 100;
    return j;
}

// Log-spaced ladder below the eta * r < 30 ceiling. Probes of data fields use
// the top octave. Probes of evolved fields stay at half ceiling and below
// eta * L/2 ~ 27, past which exp(eta d.x) at the far box edge amplifies the
// integrator noise floor over the signal.
std::vector<double> pw_magnitude_ladder(double r_ref, int count, bool evolved, double box_L) {
    double top = (evolved ? 0.5 : 1.0) * 29.5 / r_ref;
    if (evolved) top = std::min(top, 27.0 / (0.5 * box_L));
    double bottom = top / 2.0;
    std::vector<double> out;
    for (int i = 0; i < count; ++i)
        out.push_back(bottom * std::pow(top / bottom, static_cast<double>(i) / (count - 1)));
    return out;
}

} // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg, const std::string& check_filter) {
    RunOutcome outcome;
    const std::string hash = cfg.config_hash();
    json manifest;
    manifest["artifact_version"] = kVersion;
    manifest["config_hash"] = hash;
    manifest["config"] = cfg.to_json();
    json checks = json::object();
    bool all_pass = true;

    try {
        fs::create_directories(cfg.output_dir);
        int threads = cfg.resolved_threads();

        SpectralGrid grid = cfg.make_grid();
        CoefficientFamily family = cfg.make_family();

        auto enabled = [&check_filter](const std::string& name, bool flag) {
            if (!flag) return false;
            return check_filter.empty() || check_filter == name;
        };

        // classification drives the symmetrizer choice and is always recorded
        HyperbolicityClass hc = classify(family);
        {
            json cj;
            cj["verdict"] = to_string(hc.verdict);
            cj["witness_t"] = hc.witness.t;
            cj["witness_xi"] = hc.witness.xi;
            json evs = json::array();
            for (const cplx& l : hc.witness.eigenvalues) evs.push_back({l.real(), l.imag()});
            cj["witness_eigenvalues"] = evs;
            manifest["classification"] = cj;
            write_json(fs::path(cfg.output_dir) / "classify.json", stamped(cj, hash));
        }
        if (cfg.symm_source == "build_strict" && hc.verdict != Hyperbolicity::strictly_hyperbolic)
            throw PreconditionError(std::string("not strictly hyperbolic: classified as ") +
                                    to_string(hc.verdict));

        Symmetrizer symm = cfg.make_symmetrizer(family);
        manifest["symmetrizer"] = {{"provenance", to_string(symm.provenance())},
                                   {"lambda", symm.lambda()},
                                   {"Lambda", symm.Lambda()}};

        auto samples = default_samples(family, 16, 32);
        ValidationReport vrep = validate(symm, family, samples);
        write_json(fs::path(cfg.output_dir) / "validation.json", stamped(vrep.to_json(), hash));
        checks["symmetrizer_validation"] = {{"enabled", true}, {"pass", vrep.pass}};
        all_pass = all_pass && vrep.pass;

        ValidationReport arep = adjoint_check(symm, family, samples);
        write_json(fs::path(cfg.output_dir) / "adjoint.json", stamped(arep.to_json(), hash));
        checks["adjoint_symmetrizer"] = {{"enabled", true}, {"pass", arep.pass}};
        all_pass = all_pass && arep.pass;

        ConditionReport cond = detect_conditions(symm, family);
        manifest["regularity_conditions"] = cond.to_json();

        if (check_filter == "validation-only") {
            manifest["checks"] = checks;
            manifest["all_pass"] = all_pass;
            outcome.exit_code = all_pass ? 0 : 1;
            outcome.all_pass = all_pass;
            manifest["exit_code"] = outcome.exit_code;
            outcome.manifest = manifest;
            write_json(fs::path(cfg.output_dir) / "manifest.json", manifest);
            return outcome;
        }

        // no-wrap precondition from the declared support and bound constants
        double r0_decl = cfg.declared_support_radius();
        ConeRadii radii = cone_radii(family, r0_decl, symm.Lambda());
        double rT = radii.forward(cfg.T);
        if (!(rT < 0.5 * cfg.L)) {
            std::ostringstream os;
            os << "no-wrap condition violated: r(T) = " << rT << " must stay below L/2 = "
               << 0.5 * cfg.L << "; enlarge grid.L or shorten T";
            throw PreconditionError(os.str());
        }

        LatticeProblem lp;
        lp.grid = grid;
        lp.m = cfg.m;
        lp.u0 = cfg.make_data(grid);
        lp.forcing = cfg.make_forcing(grid);
        lp.r0 = r0_decl;
        lp.x0 = cfg.center;

        LatticeSolveOptions opts;
        opts.output_times = cfg.outputs;
        opts.threads = threads;
        opts.store_modes = cfg.check_energy;
        opts.forward_radius_at_T = rT;

        LatticeRun run = solve_lattice(lp, family, cfg.Nt, opts);
        manifest["run"] = {{"N", grid.N},
                           {"L", grid.L},
                           {"dim", grid.dim},
                           {"N_t", cfg.Nt},
                           {"output_times", run.times},
                           {"max_imag_residue", run.max_imag_residue},
                           {"max_hermitian_asymmetry", run.max_hermitian_asymmetry}};

        for (std::size_t i = 0; i < run.fields.size(); ++i) {
            std::ostringstream name;
            name << "snapshot_" << i << ".csv";
            write_text(fs::path(cfg.output_dir) / name.str(), snapshot_csv(run.fields[i]));
        }

        if (enabled("cone", cfg.check_cone)) {
            ConeReport crep = cone_check(run, cfg.center, radii, cfg.cone_theta);
            write_json(fs::path(cfg.output_dir) / "cone.json", stamped(crep.to_json(), hash));
            write_text(fs::path(cfg.output_dir) / "cone.csv",
                       ConeReport::csv_header() + "\n" + crep.csv_rows());
            checks["cone"] = {{"enabled", true}, {"pass", crep.pass}};
            all_pass = all_pass && crep.pass;
        }

        if (enabled("dod", cfg.check_dod)) {
            ConeRadii hole_radii = cone_radii(family, cfg.dod_r0, symm.Lambda());
            DodReport drep = dod_check(lp.u0, run, cfg.dod_x0, hole_radii);
            write_json(fs::path(cfg.output_dir) / "dod.json", stamped(drep.to_json(), hash));
            checks["dod"] = {{"enabled", true}, {"pass", drep.pass}};
            all_pass = all_pass && drep.pass;
        }

        if (enabled("pw", cfg.check_pw)) {
            auto dirs = sphere_directions(cfg.n, cfg.pw_directions);
            json pwj = json::array();
            std::ostringstream pwcsv;
            pwcsv << PWReport::csv_header() << "\n";
            bool pw_pass = true;

            // probe the data themselves, then every evolved snapshot
            {
                PWReport rep0 = pw_probe(lp.u0, 0.0, dirs,
                                         pw_magnitude_ladder(cfg.r0, cfg.pw_magnitudes, false, cfg.L),
                                         cfg.pw_xi0, cfg.pw_delta, cfg.r0);
                bool ok = true;
                for (const auto& f : rep0.fits)
                    ok = ok && !f.degenerate && f.slope >= 0.95 * cfg.r0 && f.slope <= 1.05 * cfg.r0;
                json rj = rep0.to_json();
                rj["pass"] = ok;
                rj["kind"] = "initial_two_sided";
                pwj.push_back(rj);
                pwcsv << rep0.csv_rows();
                pw_pass = pw_pass && ok;
            }
            for (std::size_t i = 0; i < run.fields.size(); ++i) {
                if (run.times[i] == 0.0) continue;
                double r_t = radii.forward(run.times[i]);
                PWReport rep = pw_probe(run.fields[i], run.times[i], dirs,
                                        pw_magnitude_ladder(r_t, cfg.pw_magnitudes, true, cfg.L),
                                        cfg.pw_xi0, cfg.pw_delta, r_t);
                bool ok = rep.max_slope <= (r_t + cfg.pw_delta) * 1.05;
                json rj = rep.to_json();
                rj["pass"] = ok;
                rj["kind"] = "evolved_upper";
                pwj.push_back(rj);
                pwcsv << rep.csv_rows();
                pw_pass = pw_pass && ok;
            }
            write_json(fs::path(cfg.output_dir) / "pw.json", stamped(pwj, hash));
            write_text(fs::path(cfg.output_dir) / "pw.csv", pwcsv.str());
            checks["pw"] = {{"enabled", true}, {"pass", pw_pass}};
            all_pass = all_pass && pw_pass;
        }

        if (enabled("energy", cfg.check_energy)) {
            MollifiedSymmetrizer ms = mollify(symm, MollifierKernel::standard_bump(),
                                              std::min(1.0, cfg.T / 2.0));
            double worst_equiv = 0.0;
            double worst_margin = 0.0;
            std::size_t traced = 0;
            std::ostringstream ecsv;
            ecsv << "zeta_norm,eps,min_margin_rel,equiv_violation\n";
            bool energy_pass = true;
            for (std::size_t p = 0; p < grid.points(); ++p) {
                double zn = grid.xi_norm(p);
                if (zn < cfg.energy_min_zeta) continue;
                auto xi = grid.xi(p);
                std::vector<cplx> zeta(xi.size());
                for (std::size_t d = 0; d < xi.size(); ++d) zeta[d] = cplx(xi[d], 0.0);
                EnergyTrace tr = energy_trace(run.mode_trajectory(p), ms, family, zeta,
                                              run.forcing_norms(p));
                ++traced;
                worst_equiv = std::max(worst_equiv, tr.equiv_violation);
                worst_margin = std::min(worst_margin, tr.min_margin_rel);
                energy_pass = energy_pass && tr.equivalence_pass && tr.margin_pass;
                ecsv << fmt(zn) << "," << fmt(tr.eps) << "," << fmt(tr.min_margin_rel) << ","
                     << fmt(tr.equiv_violation) << "\n";
            }
            json ej;
            ej["modes_traced"] = traced;
            ej["worst_equiv_violation"] = worst_equiv;
            ej["worst_margin_rel"] = worst_margin;
            ej["pass"] = energy_pass;
            write_json(fs::path(cfg.output_dir) / "energy.json", stamped(ej, hash));
            write_text(fs::path(cfg.output_dir) / "energy.csv", ecsv.str());
            checks["energy"] = {{"enabled", true}, {"pass", energy_pass}};
            all_pass = all_pass && energy_pass;
        }

        if (enabled("mollify_bounds", cfg.check_mollify_bounds)) {
            MollifiedSymmetrizer ms = mollify(symm, MollifierKernel::standard_bump(),
                                              std::min(1.0, cfg.T / 2.0));
            bool lem_pass = true;
            json lj = json::array();
            std::ostringstream lcsv;
            lcsv << MollifyBoundsReport::csv_header() << "\n";
            auto dirs = sphere_directions(cfg.n, cfg.n == 1 ? 2 : 4);
            for (double eps : cfg.mollify_bounds_eps) {
                if (eps >= cfg.T / 2.0) continue; // omega_S needs sigma < T/2 headroom
                for (const auto& d : dirs) {
                    MollifyBoundsReport rep = mollify_bounds_report(ms, d, eps);
                    bool ok = rep.ratio1 <= 1.0 && rep.ratio2 <= 1.0;
                    json rj = rep.to_json();
                    rj["pass"] = ok;
                    lj.push_back(rj);
                    lcsv << rep.csv_row() << "\n";
                    lem_pass = lem_pass && ok;
                }
            }
            bool bounds_ok = false;
            json bj = molly_bounds_probe(ms, cfg.n, cfg.T, cfg.seed, bounds_ok);
            lem_pass = lem_pass && bounds_ok;
            json lout;
            lout["reports"] = lj;
            lout["bounds_probe"] = bj;
            lout["pass"] = lem_pass;
            write_json(fs::path(cfg.output_dir) / "mollify_bounds.json", stamped(lout, hash));
            write_text(fs::path(cfg.output_dir) / "mollify_bounds.csv", lcsv.str());
            checks["mollify_bounds"] = {{"enabled", true}, {"pass", lem_pass}};
            all_pass = all_pass && lem_pass;
        }

        manifest["checks"] = checks;
        manifest["all_pass"] = all_pass;
        outcome.exit_code = all_pass ? 0 : 1;
        outcome.all_pass = all_pass;
        manifest["exit_code"] = outcome.exit_code;
        outcome.manifest = manifest;
        write_json(fs::path(cfg.output_dir) / "manifest.json", manifest);
        return outcome;
    } catch (const ConfigError& e) {
        outcome.exit_code = 2;
        outcome.all_pass = false;
        outcome.message = e.what();
        return outcome;
    } catch (const Error& e) {
        outcome.exit_code = 3;
        outcome.all_pass = false;
        outcome.message = e.what();
        return outcome;
    }
}

RunOutcome run_experiment_file(const std::string& config_path, const std::string& out_override,
                               int threads_override, std::uint64_t seed_override,
                               bool has_seed_override, const std::string& check_filter) {
    RunOutcome outcome;
    ExperimentConfig cfg;
    try {
        cfg = ExperimentConfig::from_file(config_path);
    } catch (const Error& e) {
        outcome.exit_code = 2;
        outcome.all_pass = false;
        outcome.message = e.what();
        return outcome;
    }
    if (!out_override.empty()) cfg.output_dir = out_override;
    if (threads_override > 0) cfg.threads = threads_override;
    if (has_seed_override) cfg.seed = seed_override;
    return run_experiment(cfg, check_filter);
}

int run_selftest() {
    // --- cone mutation: halving r(t) must flip the support check ------------
    SpectralGrid grid{1, 256, 8.0};
    CoefficientFamily family = CoefficientFamily::constant({Mat::identity(1)}, 0.5);
    LatticeProblem lp;
    lp.grid = grid;
    lp.m = 1;
    lp.u0 = presets::bump_field(grid, 1, 0.5, {0.0}, {1.0});
    lp.r0 = 0.5;
    lp.x0 = {0.0};
    LatticeSolveOptions opts;
    opts.output_times = {0.25, 0.5};
    opts.store_modes = false;
    LatticeRun run = solve_lattice(lp, family, 512, opts);

    // threshold above the integrator noise floor of this quick run
    ConeRadii honest = cone_radii(family, 0.5, 1.0);
    ConeReport good = cone_check(run, {0.0}, honest, 1e-6);

    // the same support data against r(t)/2: family and r0 both halved halves
    // the whole radius function
    CoefficientFamily half_family = CoefficientFamily::constant({Mat::identity(1) * 0.5}, 0.5);
    ConeRadii halved = cone_radii(half_family, 0.25, 1.0);
    ConeReport mutated = cone_check(run, {0.0}, halved, 1e-6);

    bool cone_mutation_caught = good.pass && !mutated.pass;

    // --- bounds mutation: a 1% skew must flip the matrix inequality ---------
    Symmetrizer honest_s = Symmetrizer::identity(2, 1.0);
    MollifiedSymmetrizer honest_ms = mollify(honest_s, MollifierKernel::standard_bump(), 0.5);
    bool honest_ok = false;
    molly_bounds_probe(honest_ms, 1, 1.0, 7, honest_ok);

    Symmetrizer skewed = Symmetrizer::from_function(
        2, 1.0, 1.0, 1.0,
        [](double, std::span<const double>) { return Mat::identity(2) * 1.01; });
    MollifiedSymmetrizer skewed_ms = mollify(skewed, MollifierKernel::standard_bump(), 0.5);
    bool skewed_ok = true;
    molly_bounds_probe(skewed_ms, 1, 1.0, 7, skewed_ok);

    bool bounds_mutation_caught = honest_ok && !skewed_ok;

    std::ostringstream os;
    os << "selftest cone_mutation_caught=" << (cone_mutation_caught ? "yes" : "no")
       << " bounds_mutation_caught=" << (bounds_mutation_caught ? "yes" : "no");
    if (cone_mutation_caught && bounds_mutation_caught) {
        std::puts(os.str().c_str());
        return 0;
    }
    std::puts(os.str().c_str());
    return 1;
}

} // namespace hypercone
