#include "hypercone/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "hypercone/parallel.hpp"
#include "hypercone/presets.hpp"

namespace hypercone {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

template <typename T>
T get_or(const json& obj, const std::string& key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("key '" + key + "' has the wrong type");
    }
}

std::vector<double> get_vec(const json& obj, const std::string& key, std::vector<double> fallback) {
    return get_or<std::vector<double>>(obj, key, std::move(fallback));
}

} // namespace

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return from_json(doc);
}

ExperimentConfig ExperimentConfig::from_json(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config root must be a JSON object");
    reject_unknown(doc, {"n", "m", "T", "coefficients", "symmetrizer", "data", "forcing", "grid",
                         "time", "checks", "seed", "output_dir", "threads"},
                   "config root");
    ExperimentConfig cfg;
    cfg.n = get_or<int>(doc, "n", 1);
    cfg.m = get_or<int>(doc, "m", 1);
    cfg.T = get_or<double>(doc, "T", 1.0);
    if (cfg.n < 1 || cfg.n > 2) throw ConfigError("n must be 1 or 2");
    if (cfg.m < 1 || cfg.m > 8) throw ConfigError("m must lie in [1, 8]");
    if (!(cfg.T > 0.0)) throw ConfigError("T must be positive");

    if (doc.contains("coefficients")) {
        const json& c = doc.at("coefficients");
        reject_unknown(c, {"preset", "base", "matrices", "omega", "levels", "jumps", "gamma", "t0",
                           "floor", "csv_path"},
                       "coefficients");
        cfg.coeff_preset = get_or<std::string>(c, "preset", "constant");
        cfg.coeff_base = get_or<std::string>(c, "base", cfg.m == 1 ? "transport" : "symmetric_wave");
        cfg.omega = get_or<double>(c, "omega", 2.0 * M_PI);
        cfg.levels = get_vec(c, "levels", cfg.levels);
        cfg.jumps = get_vec(c, "jumps", {});
        cfg.gamma = get_or<double>(c, "gamma", 0.5);
        cfg.t0 = get_or<double>(c, "t0", cfg.T / 2.0);
        cfg.hoelder_floor = get_or<double>(c, "floor", 0.05);
        cfg.csv_path = get_or<std::string>(c, "csv_path", "");
        if (c.contains("matrices"))
            cfg.base_matrices = c.at("matrices").get<std::vector<std::vector<std::vector<double>>>>();
        std::set<std::string> presets{"constant", "smooth", "piecewise", "hoelder", "singular", "csv"};
        if (!presets.count(cfg.coeff_preset))
            throw ConfigError("coefficients.preset must be one of constant|smooth|piecewise|hoelder|singular|csv");
        std::set<std::string> bases{"transport", "symmetric_wave", "shear", "explicit"};
        if (!bases.count(cfg.coeff_base))
            throw ConfigError("coefficients.base must be one of transport|symmetric_wave|shear|explicit");
    }

    if (doc.contains("symmetrizer")) {
        const json& s = doc.at("symmetrizer");
        reject_unknown(s, {"source", "path"}, "symmetrizer");
        cfg.symm_source = get_or<std::string>(s, "source", "identity");
        cfg.symm_path = get_or<std::string>(s, "path", "");
        if (cfg.symm_source != "identity" && cfg.symm_source != "build_strict" &&
            cfg.symm_source != "file")
            throw ConfigError("symmetrizer.source must be identity|build_strict|file");
        if (cfg.symm_source == "file" && cfg.symm_path.empty())
            throw ConfigError("symmetrizer.source=file requires symmetrizer.path");
    }

    if (doc.contains("data")) {
        const json& d = doc.at("data");
        reject_unknown(d, {"preset", "r0", "center", "components", "amplitude", "edge_width"},
                       "data");
        cfg.data_preset = get_or<std::string>(d, "preset", "bump");
        cfg.r0 = get_or<double>(d, "r0", 0.5);
        cfg.center = get_vec(d, "center", {});
        cfg.components = get_vec(d, "components", {});
        cfg.amplitude = get_or<double>(d, "amplitude", 1.0);
        cfg.edge_width = get_or<double>(d, "edge_width", 0.02);
        if (cfg.data_preset != "bump" && cfg.data_preset != "plateau" && cfg.data_preset != "zero")
            throw ConfigError("data.preset must be bump|plateau|zero");
        if (!(cfg.r0 > 0.0)) throw ConfigError("data.r0 must be positive");
    }
    if (cfg.center.empty()) cfg.center.assign(static_cast<std::size_t>(cfg.n), 0.0);
    if (static_cast<int>(cfg.center.size()) != cfg.n) throw ConfigError("data.center has wrong dimension");
    if (cfg.components.empty()) {
        cfg.components.assign(static_cast<std::size_t>(cfg.m), 0.0);
        cfg.components[0] = 1.0;
    }
    if (static_cast<int>(cfg.components.size()) != cfg.m)
        throw ConfigError("data.components has wrong size");

    if (doc.contains("forcing")) {
        const json& f = doc.at("forcing");
        reject_unknown(f, {"preset", "r0", "center", "components", "amplitude", "t_on", "t_off"},
                       "forcing");
        cfg.forcing_preset = get_or<std::string>(f, "preset", "none");
        cfg.f_r0 = get_or<double>(f, "r0", 0.4);
        cfg.f_center = get_vec(f, "center", {});
        cfg.f_components = get_vec(f, "components", {});
        cfg.f_amplitude = get_or<double>(f, "amplitude", 1.0);
        cfg.f_t_on = get_or<double>(f, "t_on", 0.0);
        cfg.f_t_off = get_or<double>(f, "t_off", cfg.T / 2.0);
        if (cfg.forcing_preset != "none" && cfg.forcing_preset != "bump_pulse")
            throw ConfigError("forcing.preset must be none|bump_pulse");
    }
    if (cfg.f_center.empty()) cfg.f_center.assign(static_cast<std::size_t>(cfg.n), 0.0);
    if (cfg.f_components.empty()) {
        cfg.f_components.assign(static_cast<std::size_t>(cfg.m), 0.0);
        cfg.f_components[0] = 1.0;
    }

    if (doc.contains("grid")) {
        const json& g = doc.at("grid");
        reject_unknown(g, {"N", "L"}, "grid");
        cfg.N = get_or<int>(g, "N", 256);
        cfg.L = get_or<double>(g, "L", 8.0);
    }
    if (cfg.N < 4 || cfg.N % 2 != 0) throw ConfigError("grid.N must be even and >= 4");
    if (!(cfg.L > 0.0)) throw ConfigError("grid.L must be positive");
    if (!(cfg.r0 < 0.5 * cfg.L))
        throw ConfigError("data.r0 must satisfy r0 < L/2 (declared support inside the box)");

    if (doc.contains("time")) {
        const json& t = doc.at("time");
        reject_unknown(t, {"N_t", "outputs"}, "time");
        cfg.Nt = get_or<int>(t, "N_t", 256);
        cfg.outputs = get_vec(t, "outputs", {});
    }
    if (cfg.Nt < 8) throw ConfigError("time.N_t must be >= 8");
    if (cfg.outputs.empty()) cfg.outputs = {cfg.T};
    for (double t : cfg.outputs)
        if (t < 0.0 || t > cfg.T) throw ConfigError("time.outputs must lie in [0, T]");

    if (doc.contains("checks")) {
        const json& ch = doc.at("checks");
        reject_unknown(ch, {"cone", "dod", "pw", "energy", "mollify_bounds"}, "checks");
        if (ch.contains("cone")) {
            const json& cc = ch.at("cone");
            reject_unknown(cc, {"enabled", "theta"}, "checks.cone");
            cfg.check_cone = get_or<bool>(cc, "enabled", true);
            cfg.cone_theta = get_or<double>(cc, "theta", 1e-8);
            if (!(cfg.cone_theta > 0.0) || cfg.cone_theta >= 1.0)
                throw ConfigError("checks.cone.theta must lie in (0, 1)");
        }
        if (ch.contains("dod")) {
            const json& dd = ch.at("dod");
            reject_unknown(dd, {"enabled", "x0", "r0"}, "checks.dod");
            cfg.check_dod = get_or<bool>(dd, "enabled", true);
            cfg.dod_x0 = get_vec(dd, "x0", {});
            cfg.dod_r0 = get_or<double>(dd, "r0", 0.0);
            if (cfg.check_dod && !(cfg.dod_r0 > 0.0))
                throw ConfigError("checks.dod.r0 (hole radius) must be positive");
        }
        if (ch.contains("pw")) {
            const json& pp = ch.at("pw");
            reject_unknown(pp, {"enabled", "directions", "magnitudes", "delta", "xi0"}, "checks.pw");
            cfg.check_pw = get_or<bool>(pp, "enabled", true);
            cfg.pw_directions = get_or<int>(pp, "directions", 8);
            cfg.pw_magnitudes = get_or<int>(pp, "magnitudes", 12);
            cfg.pw_delta = get_or<double>(pp, "delta", 0.05);
            cfg.pw_xi0 = get_vec(pp, "xi0", {});
            if (cfg.pw_directions < 1 || cfg.pw_magnitudes < 2)
                throw ConfigError("checks.pw needs at least 1 direction and 2 magnitudes");
        }
        if (ch.contains("energy")) {
            const json& ee = ch.at("energy");
            reject_unknown(ee, {"enabled", "min_zeta"}, "checks.energy");
            cfg.check_energy = get_or<bool>(ee, "enabled", true);
            cfg.energy_min_zeta = get_or<double>(ee, "min_zeta", 1.0);
        }
        if (ch.contains("mollify_bounds")) {
            const json& ll = ch.at("mollify_bounds");
            reject_unknown(ll, {"enabled", "epsilons"}, "checks.mollify_bounds");
            cfg.check_mollify_bounds = get_or<bool>(ll, "enabled", true);
            cfg.mollify_bounds_eps = get_vec(ll, "epsilons", cfg.mollify_bounds_eps);
            for (double e : cfg.mollify_bounds_eps)
                if (!(e > 0.0) || e > 1.0) throw ConfigError("checks.mollify_bounds.epsilons must lie in (0, 1]");
        }
    }
    if (cfg.dod_x0.empty()) cfg.dod_x0.assign(static_cast<std::size_t>(cfg.n), 0.0);
    if (cfg.pw_xi0.empty()) cfg.pw_xi0.assign(static_cast<std::size_t>(cfg.n), 0.0);

    cfg.seed = get_or<std::uint64_t>(doc, "seed", 0);
    cfg.output_dir = get_or<std::string>(doc, "output_dir", "out");
    cfg.threads = get_or<int>(doc, "threads", 0);
    if (cfg.threads < 0) throw ConfigError("threads must be >= 0");
    return cfg;
}

json ExperimentConfig::to_json() const {
    json j;
    j["n"] = n;
    j["m"] = m;
    j["T"] = T;
    j["coefficients"] = {{"preset", coeff_preset}, {"base", coeff_base},     {"omega", omega},
                         {"levels", levels},       {"jumps", jumps},         {"gamma", gamma},
                         {"t0", t0},               {"floor", hoelder_floor}, {"csv_path", csv_path},
                         {"matrices", base_matrices}};
    j["symmetrizer"] = {{"source", symm_source}, {"path", symm_path}};
    j["data"] = {{"preset", data_preset}, {"r0", r0},
                 {"center", center},      {"components", components},
                 {"amplitude", amplitude}, {"edge_width", edge_width}};
    j["forcing"] = {{"preset", forcing_preset}, {"r0", f_r0},   {"center", f_center},
                    {"components", f_components}, {"amplitude", f_amplitude},
                    {"t_on", f_t_on},           {"t_off", f_t_off}};
    j["grid"] = {{"N", N}, {"L", L}};
    j["time"] = {{"N_t", Nt}, {"outputs", outputs}};
    j["checks"] = {
        {"cone", {{"enabled", check_cone}, {"theta", cone_theta}}},
        {"dod", {{"enabled", check_dod}, {"x0", dod_x0}, {"r0", dod_r0}}},
        {"pw",
         {{"enabled", check_pw},
          {"directions", pw_directions},
          {"magnitudes", pw_magnitudes},
          {"delta", pw_delta},
          {"xi0", pw_xi0}}},
        {"energy", {{"enabled", check_energy}, {"min_zeta", energy_min_zeta}}},
        {"mollify_bounds", {{"enabled", check_mollify_bounds}, {"epsilons", mollify_bounds_eps}}}};
    j["seed"] = seed;
    // threads and output_dir are execution knobs, not experiment identity:
    // reports must be byte-identical across thread counts and output paths
    return j;
}

std::string ExperimentConfig::config_hash() const {
    std::ostringstream os;
    os << std::hex << fnv1a64(to_json().dump());
    return os.str();
}

SpectralGrid ExperimentConfig::make_grid() const {
    SpectralGrid g{n, N, L};
    g.validate();
    return g;
}

namespace {

std::vector<Mat> base_set(const ExperimentConfig& cfg) {
    std::vector<Mat> base;
    if (cfg.coeff_base == "explicit") {
        if (static_cast<int>(cfg.base_matrices.size()) != cfg.n)
            throw ConfigError("coefficients.matrices must hold n matrices");
        for (const auto& rows : cfg.base_matrices) {
            if (static_cast<int>(rows.size()) != cfg.m)
                throw ConfigError("coefficients.matrices entries must be m x m");
            Mat b(cfg.m);
            for (int i = 0; i < cfg.m; ++i) {
                if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != cfg.m)
                    throw ConfigError("coefficients.matrices entries must be m x m");
                for (int jx = 0; jx < cfg.m; ++jx)
                    b(i, jx) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(jx)];
            }
            base.push_back(b);
        }
        return base;
    }
    Mat first(cfg.m);
    if (cfg.coeff_base == "transport") {
        first = Mat::identity(cfg.m);
    } else if (cfg.coeff_base == "symmetric_wave") {
        if (cfg.m != 2) throw ConfigError("base symmetric_wave needs m = 2");
        first = presets::base_symmetric_wave();
    } else if (cfg.coeff_base == "shear") {
        if (cfg.m != 2) throw ConfigError("base shear needs m = 2");
        first = presets::base_shear();
    }
    base.push_back(first);
    for (int j = 1; j < cfg.n; ++j) base.push_back(Mat(cfg.m));
    return base;
}

} // namespace

CoefficientFamily ExperimentConfig::make_family() const {
    if (coeff_preset == "csv") {
        if (csv_path.empty()) throw ConfigError("coefficients.preset=csv requires csv_path");
        return CoefficientFamily::from_csv(csv_path, n, m);
    }
    if (coeff_preset == "singular") {
        if (n != 1 || m != 1) throw ConfigError("coefficients.preset=singular requires n = m = 1");
        return CoefficientFamily::singular_alpha(T);
    }
    std::vector<Mat> base = base_set(*this);
    if (coeff_preset == "constant") return CoefficientFamily::constant(std::move(base), T);
    if (coeff_preset == "smooth")
        return CoefficientFamily::smooth_oscillatory(std::move(base), T, omega);
    if (coeff_preset == "piecewise") {
        std::vector<double> js = jumps;
        if (js.empty()) js = {T / 3.0, 2.0 * T / 3.0};
        return CoefficientFamily::piecewise_constant(std::move(base), T, levels, js);
    }
    if (coeff_preset == "hoelder")
        return CoefficientFamily::hoelder(std::move(base), T, gamma, t0, hoelder_floor);
    throw ConfigError("unhandled coefficient preset");
}

Symmetrizer ExperimentConfig::make_symmetrizer(const CoefficientFamily& c) const {
    if (symm_source == "identity") {
        Symmetrizer s = Symmetrizer::identity(m, T);
        s.set_time_breakpoints(c.time_breakpoints());
        return s;
    }
    if (symm_source == "build_strict") return build_strict(c);
    return Symmetrizer::from_json_file(symm_path);
}

Field ExperimentConfig::make_data(const SpectralGrid& g) const {
    if (data_preset == "zero") return presets::zero_field(g, m);
    if (data_preset == "bump")
        return presets::bump_field(g, m, r0, center, components, amplitude);
    return presets::plateau_field(g, m, r0, center, components, amplitude, edge_width);
}

std::function<Field(double)> ExperimentConfig::make_forcing(const SpectralGrid& g) const {
    if (forcing_preset == "none") return nullptr;
    return presets::bump_pulse_forcing(g, m, f_r0, f_center, f_components, f_amplitude, f_t_on,
                                       f_t_off);
}

double ExperimentConfig::declared_support_radius() const {
    if (data_preset == "plateau") return r0 + 8.5 * edge_width;
    return r0;
}

int ExperimentConfig::resolved_threads() const {
    return threads > 0 ? threads : env_thread_count();
}

} // namespace hypercone
