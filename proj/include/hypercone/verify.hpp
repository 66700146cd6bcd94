#pragma once

// Measurement side of the estimate chain: the energy E_eps and its Gronwall
// envelope, the bound function phi_eps, the I1/I2/omega-tilde quantities at
// eps = 1/|zeta|, support-radius tracking against the forward cone, the
// domain-of-dependence hole check, and the Paley-Wiener growth probe.

#include <json.hpp>

#include "hypercone/mollify.hpp"
#include "hypercone/solver.hpp"

namespace hypercone {

/// eps = 1/|zeta| for |zeta| >= 1 (else 1), capped at min(1, T/2).
double epsilon_for(double zeta_norm, double T);

/// phi_eps(t, zeta) = (2/sqrt(lambda)) |dt S_eps| +
///                    (2/sqrt(lambda)) |S_eps - S| alpha(t) |xi| +
///                    2 sqrt(Lambda) alpha(t) |eta|.
/// For xi = 0 the S(t,0) = 0 convention applies and only the |eta| term remains.
double phi_eps(const MollifiedSymmetrizer& ms, const CoefficientFamily& c, double t,
               std::span<const cplx> zeta, double eps);

struct EnergyTrace {
    std::vector<cplx> zeta;
    double eps = 0.0;
    std::vector<double> t;
    std::vector<double> energy;      // E_eps at nodes
    std::vector<double> amplitude;   // |uhat|
    std::vector<double> phi;         // phi_eps at nodes
    std::vector<double> rhs;         // Gronwall envelope
    std::vector<double> margin;      // rhs - |uhat|
    double min_margin_rel = 0.0;     // min over nodes of margin / rhs
    double equiv_violation = 0.0;    // worst relative defect of the two-sided bound
    bool equivalence_pass = true;
    bool margin_pass = true;
    nlohmann::json to_json() const;
};

/// Energy along a mode trajectory on the uniform node grid of [0, T].
/// `forcing_norms` are |fhat(t_i, zeta)| per node (empty means no forcing).
EnergyTrace energy_trace(const std::vector<std::vector<cplx>>& traj,
                         const MollifiedSymmetrizer& ms, const CoefficientFamily& c,
                         std::span<const cplx> zeta,
                         const std::vector<double>& forcing_norms = {});

struct ConditionReport {
    bool condition_i = false;  // S continuous on [0,T] x sphere (sampled)
    bool condition_ii = false; // alpha uniformly bounded
    double C0 = 0.0;
    std::vector<double> continuity_moduli; // sampled sup-modulus under refinement
    nlohmann::json to_json() const;
};

ConditionReport detect_conditions(const Symmetrizer& s, const CoefficientFamily& c);

struct BoundReportI {
    double zeta_norm = 0.0;
    double eps = 0.0;
    double I1 = 0.0;
    double I2 = 0.0;
    double omega_xi = 0.0;    // omega_S(xi direction, eps)
    double omega_tilde = 0.0; // sup over unit directions
    double C1 = 0.0;          // constant in the I1 bound
    double C2 = 0.0;          // constant in the I2 bound (condition (ii) route)
    double bound1 = 0.0;      // C1 (|zeta| omega + 1)
    double bound2 = 0.0;      // C2 (|zeta| omega + 1)
    double ratio1 = 0.0;
    double ratio2 = 0.0;
    double sup_molly_gap = 0.0;    // sup_t |S_eps - S| (condition (i) route)
    double bound2_route_i = 0.0;   // (2 |xi| / sqrt(lambda)) sup_gap int alpha
    double ratio2_route_i = 0.0;
    ConditionReport conditions;
    nlohmann::json to_json() const;
};

/// I1, I2 and their bounds at eps = 1/|zeta| (guarded), per the estimate
/// chain. Throws ConditionUndetermined when neither condition (i) nor (ii)
/// is detected.
BoundReportI bound_report_I(const MollifiedSymmetrizer& ms, const CoefficientFamily& c,
                            std::span<const cplx> zeta, int sphere_dirs = 32);

/// Threshold support radius: max periodic distance from `center` over points
/// with |u(x)| > theta * max |u|; 0 when the field sits below 1e-13.
double support_radius(const Field& u, const std::vector<double>& center, double theta);

struct ConeTimeRow {
    double t = 0.0;
    double measured = 0.0;
    double bound = 0.0; // r(t)
    bool pass = true;
};

struct ConeReport {
    std::vector<ConeTimeRow> rows;
    double h = 0.0;
    double theta = 0.0;
    bool pass = true;
    nlohmann::json to_json() const;
    static std::string csv_header();
    std::string csv_rows() const;
};

/// measured <= r(t) + 2h at every output time of the run.
ConeReport cone_check(const LatticeRun& run, const std::vector<double>& center,
                      const ConeRadii& radii, double theta);

struct DodTimeRow {
    double t = 0.0;
    double rho = 0.0;           // backward radius
    double region = 0.0;        // rho - 2h, the probed hole radius
    double max_in_hole = 0.0;
    double tolerance = 0.0;
    bool pass = true;
};

struct DodReport {
    std::vector<DodTimeRow> rows;
    double h = 0.0;
    bool pass = true;
    nlohmann::json to_json() const;
};

/// Data vanish on B(x0, r0); the solution must stay below
/// max(1e-8, 1e-6 max|u|) on B(x0, rho(t) - 2h). Throws EmptyRegion when no
/// output time has a positive probe radius, PreconditionError when the data
/// fail to vanish on the hole.
DodReport dod_check(const Field& initial_data, const LatticeRun& run,
                    const std::vector<double>& x0, const ConeRadii& radii);

struct PwDirectionFit {
    std::vector<double> dir;
    double slope = 0.0;
    double intercept = 0.0;
    bool degenerate = false;
    std::vector<double> etas;     // magnitudes used in the fit window
    std::vector<double> log_values;
};

struct PWReport {
    double t = 0.0;
    double delta = 0.0;
    double r_ref = 0.0;
    std::vector<double> xi0;
    std::vector<PwDirectionFit> fits;
    double max_slope = 0.0;
    nlohmann::json to_json() const;
    static std::string csv_header();
    std::string csv_rows() const;
};

/// Discrete Fourier-Laplace probe uhat(xi0 + i eta e_d) with least-squares
/// slope of log|uhat| against eta over the largest decade below the ceiling
/// eta * r_ref < 30. Throws DynamicRangeExceeded when exp((r_ref+delta) eta)
/// would overflow.
PWReport pw_probe(const Field& u, double t_label, const std::vector<std::vector<double>>& dirs,
                  const std::vector<double>& magnitudes, const std::vector<double>& xi0,
                  double delta, double r_ref);

} // namespace hypercone
