#pragma once

// Declarative experiment configuration: a single JSON document, schema
// validated with unknown keys rejected, plus factories that turn it into
// families, symmetrizers and data fields.

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "hypercone/coefficients.hpp"
#include "hypercone/fft.hpp"
#include "hypercone/symmetrizer.hpp"

namespace hypercone {

struct ExperimentConfig {
    int n = 1;
    int m = 1;
    double T = 1.0;

    // coefficients
    std::string coeff_preset = "constant"; // constant|smooth|piecewise|hoelder|singular|csv
    std::string coeff_base = "transport";  // transport|symmetric_wave|shear|explicit
    std::vector<std::vector<std::vector<double>>> base_matrices; // when explicit
    double omega = 2.0 * M_PI;
    std::vector<double> levels{1.0, 0.5, 1.5};
    std::vector<double> jumps;
    double gamma = 0.5;
    double t0 = 0.5;
    double hoelder_floor = 0.05;
    std::string csv_path;

    // symmetrizer
    std::string symm_source = "identity"; // identity|build_strict|file
    std::string symm_path;

    // data
    std::string data_preset = "bump"; // bump|plateau|zero
    double r0 = 0.5;
    std::vector<double> center;
    std::vector<double> components;
    double amplitude = 1.0;
    double edge_width = 0.02;

    // forcing
    std::string forcing_preset = "none"; // none|bump_pulse
    double f_r0 = 0.4;
    std::vector<double> f_center;
    std::vector<double> f_components;
    double f_amplitude = 1.0;
    double f_t_on = 0.0;
    double f_t_off = 0.5;

    // grid / time
    int N = 256;
    double L = 8.0;
    int Nt = 256;
    std::vector<double> outputs;

    // checks
    bool check_cone = false;
    double cone_theta = 1e-8;
    bool check_dod = false;
    std::vector<double> dod_x0;
    double dod_r0 = 0.0;
    bool check_pw = false;
    int pw_directions = 8;
    int pw_magnitudes = 12;
    double pw_delta = 0.05;
    std::vector<double> pw_xi0;
    bool check_energy = false;
    double energy_min_zeta = 1.0;
    bool check_mollify_bounds = false;
    std::vector<double> mollify_bounds_eps{0.2, 0.1, 0.05, 0.02};

    std::uint64_t seed = 0;
    std::string output_dir = "out";
    int threads = 0; // 0 = resolve from HYPERCONE_THREADS (default 1)

    static ExperimentConfig from_json(const nlohmann::json& doc);
    static ExperimentConfig from_file(const std::string& path);

    /// Canonical echo (alphabetical keys) used for hashing and the manifest.
    nlohmann::json to_json() const;
    std::string config_hash() const;

    SpectralGrid make_grid() const;
    CoefficientFamily make_family() const;
    Symmetrizer make_symmetrizer(const CoefficientFamily& c) const;
    Field make_data(const SpectralGrid& g) const;
    std::function<Field(double)> make_forcing(const SpectralGrid& g) const; // null when none

    /// Support radius the data are declared to fit in: the nominal r0, plus
    /// the erf skirt for plateau data (8.5 sigma puts the tail below 1e-17).
    double declared_support_radius() const;

    int resolved_threads() const;
};

std::uint64_t fnv1a64(const std::string& s);

} // namespace hypercone
