#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "hypercone/runner.hpp"

using namespace hypercone;
using nlohmann::json;

namespace {

json minimal_config() {
    return json::parse(R"({
        "n": 1, "m": 1, "T": 0.5,
        "coefficients": {"preset": "constant", "base": "transport"},
        "symmetrizer": {"source": "identity"},
        "data": {"preset": "bump", "r0": 0.5},
        "grid": {"N": 128, "L": 8.0},
        "time": {"N_t": 256, "outputs": [0.25, 0.5]},
        "checks": {"cone": {"enabled": true, "theta": 1e-6}},
        "seed": 42,
        "output_dir": "cfg_out"
    })");
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

} // namespace

TEST_SUITE("config") {

TEST_CASE("round trip and hashing are stable") {
    ExperimentConfig cfg = ExperimentConfig::from_json(minimal_config());
    CHECK(cfg.n == 1);
    CHECK(cfg.Nt == 256);
    CHECK(cfg.check_cone);
    CHECK_FALSE(cfg.check_pw);
    std::string h1 = cfg.config_hash();
    ExperimentConfig cfg2 = ExperimentConfig::from_json(minimal_config());
    CHECK(h1 == cfg2.config_hash());
    cfg2.seed = 43;
    CHECK(h1 != cfg2.config_hash());
}

TEST_CASE("unknown keys and bad values are rejected") {
    json bad = minimal_config();
    bad["surprise"] = 1;
    CHECK_THROWS_AS(ExperimentConfig::from_json(bad), ConfigError);

    bad = minimal_config();
    bad["grid"]["N"] = 7;
    CHECK_THROWS_AS(ExperimentConfig::from_json(bad), ConfigError);

    bad = minimal_config();
    bad["data"]["r0"] = 7.0; // >= L/2
    CHECK_THROWS_AS(ExperimentConfig::from_json(bad), ConfigError);

    bad = minimal_config();
    bad["checks"]["cone"]["theta"] = 2.0;
    CHECK_THROWS_AS(ExperimentConfig::from_json(bad), ConfigError);

    bad = minimal_config();
    bad["coefficients"]["preset"] = "mystery";
    CHECK_THROWS_AS(ExperimentConfig::from_json(bad), ConfigError);

    bad = minimal_config();
    bad["checks"]["dod"] = {{"enabled", true}}; // missing hole radius
    CHECK_THROWS_AS(ExperimentConfig::from_json(bad), ConfigError);
}

TEST_CASE("factories build the advertised objects") {
    ExperimentConfig cfg = ExperimentConfig::from_json(minimal_config());
    CoefficientFamily fam = cfg.make_family();
    CHECK(fam.space_dim() == 1);
    CHECK(alpha(fam, 0.1) == doctest::Approx(1.0));
    Symmetrizer s = cfg.make_symmetrizer(fam);
    CHECK(s.provenance() == Provenance::identity);
    SpectralGrid g = cfg.make_grid();
    Field data = cfg.make_data(g);
    CHECK(data.max_norm() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_FALSE(static_cast<bool>(cfg.make_forcing(g)));
}

TEST_CASE("pipeline run writes reports and passes the transport cone check") {
    ExperimentConfig cfg = ExperimentConfig::from_json(minimal_config());
    cfg.output_dir = "cfg_run_a";
    RunOutcome out = run_experiment(cfg);
    CHECK(out.exit_code == 0);
    CHECK(out.all_pass);
    namespace fs = std::filesystem;
    CHECK(fs::exists("cfg_run_a/manifest.json"));
    CHECK(fs::exists("cfg_run_a/validation.json"));
    CHECK(fs::exists("cfg_run_a/classify.json"));
    CHECK(fs::exists("cfg_run_a/cone.json"));
    CHECK(fs::exists("cfg_run_a/cone.csv"));
    CHECK(fs::exists("cfg_run_a/snapshot_0.csv"));
    json manifest = json::parse(slurp("cfg_run_a/manifest.json"));
    CHECK(manifest["all_pass"] == true);
    CHECK(manifest["classification"]["verdict"] == "strictly_hyperbolic");
    CHECK(manifest["config_hash"] == cfg.config_hash());
    fs::remove_all("cfg_run_a");
}

TEST_CASE("thread count never changes the report bytes") {
    ExperimentConfig cfg = ExperimentConfig::from_json(minimal_config());
    cfg.check_mollify_bounds = true;
    cfg.output_dir = "cfg_thr1";
    cfg.threads = 1;
    RunOutcome o1 = run_experiment(cfg);
    cfg.output_dir = "cfg_thr8";
    cfg.threads = 8;
    RunOutcome o8 = run_experiment(cfg);
    CHECK(o1.exit_code == 0);
    CHECK(o8.exit_code == 0);
    namespace fs = std::filesystem;
    for (const char* name : {"validation.json", "cone.json", "cone.csv", "mollify_bounds.json",
                             "snapshot_0.csv", "snapshot_1.csv", "classify.json"}) {
        CAPTURE(name);
        CHECK(slurp(fs::path("cfg_thr1") / name) == slurp(fs::path("cfg_thr8") / name));
    }
    // manifests differ only in the recorded thread count
    json m1 = json::parse(slurp("cfg_thr1/manifest.json"));
    json m8 = json::parse(slurp("cfg_thr8/manifest.json"));
    m1.erase("threads_used");
    m8.erase("threads_used");
    m1.erase("config"); // echoes differ in output_dir and thread count
    m8.erase("config");
    m1.erase("config_hash");
    m8.erase("config_hash");
    CHECK(m1.dump() == m8.dump());
    fs::remove_all("cfg_thr1");
    fs::remove_all("cfg_thr8");
}

TEST_CASE("precondition failures surface as exit code 3 with a message") {
    ExperimentConfig cfg = ExperimentConfig::from_json(minimal_config());
    cfg.T = 4.0; // r(T) = 0.5 + 8 >= L/2
    cfg.outputs = {4.0};
    cfg.output_dir = "cfg_wrap";
    RunOutcome out = run_experiment(cfg);
    CHECK(out.exit_code == 3);
    CHECK(out.message.find("no-wrap") != std::string::npos);

    // rotation generator: not hyperbolic, so build_strict must refuse
    json rot = minimal_config();
    rot["m"] = 2;
    rot["coefficients"] = {{"preset", "constant"},
                           {"base", "explicit"},
                           {"matrices", {{{0.0, -1.0}, {1.0, 0.0}}}}};
    rot["symmetrizer"] = {{"source", "build_strict"}};
    ExperimentConfig rcfg = ExperimentConfig::from_json(rot);
    rcfg.output_dir = "cfg_rot";
    RunOutcome rout = run_experiment(rcfg);
    CHECK(rout.exit_code == 3);
    CHECK(rout.message.find("not strictly hyperbolic") != std::string::npos);
    std::filesystem::remove_all("cfg_wrap");
    std::filesystem::remove_all("cfg_rot");
}

TEST_CASE("a failing enabled check yields exit code 1") {
    // identity symmetrizer on the shear family: SA self-adjointness fails
    json doc = minimal_config();
    doc["m"] = 2;
    doc["coefficients"] = {{"preset", "constant"}, {"base", "shear"}};
    doc["symmetrizer"] = {{"source", "identity"}};
    ExperimentConfig cfg = ExperimentConfig::from_json(doc);
    cfg.output_dir = "cfg_fail";
    RunOutcome out = run_experiment(cfg);
    CHECK(out.exit_code == 1);
    CHECK_FALSE(out.all_pass);
    json manifest = json::parse(slurp("cfg_fail/manifest.json"));
    CHECK(manifest["checks"]["symmetrizer_validation"]["pass"] == false);
    std::filesystem::remove_all("cfg_fail");
}

TEST_CASE("selftest mutations are caught") { CHECK(run_selftest() == 0); }

} // TEST_SUITE
