#pragma once

// Time-mollification of a symmetrizer: even bump kernel rho with unit mass,
// the smoothed family S_eps(t, xi) = (rho_eps *_t S)(t) under constant
// endpoint extension, its time derivative, the integral modulus of
// continuity omega_S, and the Lemma-style diagnostic bounds.

#include <functional>
#include <map>
#include <memory>
#include <mutex>

#include <json.hpp>

#include "hypercone/symmetrizer.hpp"

namespace hypercone {

/// Even C^inf bump c * exp(-1/(1-t^2)) on (-1, 1), normalized to unit mass.
/// Carries Gauss-Legendre weights premultiplied by rho (normalized to sum
/// exactly 1) and by rho' (centered to sum exactly 0), so that mollification
/// is a true convex combination of symmetrizer values.
class MollifierKernel {
public:
    static MollifierKernel standard_bump(int quad_order = 64);

    double operator()(double t) const;  // rho(t)
    double deriv(double t) const;       // rho'(t)
    double l1_rho() const { return l1_rho_; }
    double l1_drho() const { return l1_drho_; }
    int quad_order() const { return static_cast<int>(nodes_.size()); }

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& mass_weights() const { return mass_w_; }
    const std::vector<double>& deriv_weights() const { return deriv_w_; }

private:
    MollifierKernel() = default;
    double norm_const_ = 1.0;
    double l1_rho_ = 1.0;
    double l1_drho_ = 0.0;
    std::vector<double> nodes_;
    std::vector<double> mass_w_;
    std::vector<double> deriv_w_;
};

/// Constant-extension evaluator of the [OP]-level "extend": S(t) = S(0) for
/// t < 0 and S(T) for t > T.
std::function<Mat(double, std::span<const double>)> extend(const Symmetrizer& s);

/// S along one frequency direction, tabulated on [0, T] for interpolation.
/// Nodes include the symmetrizer's breakpoints (jumps are kept sharp by a
/// left-limit duplicate node); evaluation clamps t to [0, T].
class TimeSliceCache {
public:
    TimeSliceCache(const Symmetrizer& s, std::vector<double> direction, int cells);
    Mat operator()(double t) const;
    double horizon() const { return T_; }

private:
    double T_;
    std::vector<double> times_;
    std::vector<Mat> values_;
};

class MollifiedSymmetrizer {
public:
    MollifiedSymmetrizer(Symmetrizer base, MollifierKernel kernel, double eps);

    const Symmetrizer& base() const { return base_; }
    const MollifierKernel& kernel() const { return kernel_; }
    double epsilon() const { return eps_; }

    /// S_eps(t, xi) at an explicit epsilon in (0, 1].
    Mat at(double eps, double t, std::span<const double> xi) const;
    /// d/dt S_eps via the differentiated kernel.
    Mat dt_at(double eps, double t, std::span<const double> xi) const;

    Mat at(double t, std::span<const double> xi) const { return at(eps_, t, xi); }
    Mat dt_at(double t, std::span<const double> xi) const { return dt_at(eps_, t, xi); }

    /// Interpolation table resolution for the per-direction slice cache.
    void set_cache_cells(int cells) { cache_cells_ = cells; }

    std::shared_ptr<const TimeSliceCache> slice(std::span<const double> xi) const;

private:
    Symmetrizer base_;
    MollifierKernel kernel_;
    double eps_;
    int cache_cells_ = 32768;
    mutable std::mutex mu_;
    mutable std::map<std::vector<double>, std::shared_ptr<const TimeSliceCache>> slices_;
};

/// mollify per the module contract; throws BadEpsilon outside (0, 1].
MollifiedSymmetrizer mollify(Symmetrizer s, MollifierKernel kernel, double eps);

/// omega_S(xi, sigma) = sup_{tau in [0, sigma]} int_0^{T-sigma}
/// |S(t+tau, xi) - S(t, xi)| dt, evaluated on a 33-point tau grid with
/// golden-section refinement around the grid argmax.
double omega_S(const Symmetrizer& s, std::span<const double> xi, double sigma);

/// Same on a tabulated slice (used by the report paths).
double omega_S_slice(const TimeSliceCache& slice, double sigma);

/// Diagnostic scalar (1/T) int_0^T |S(t, xi)| dt.
double mu_S(const Symmetrizer& s, std::span<const double> xi);

struct MollifyBoundsReport {
    double eps = 0.0;
    std::vector<double> xi;
    double omega = 0.0;      // omega_S(xi, eps)
    double C = 0.0;          // 2 max(|rho|_L1, |rho'|_L1)
    double lhs1 = 0.0;       // int |S_eps - S|
    double rhs1 = 0.0;       // C (omega + eps sqrt(Lambda))
    double ratio1 = 0.0;
    double lhs2 = 0.0;       // int |dt S_eps|
    double rhs2 = 0.0;       // (C/eps) (omega + eps sqrt(Lambda))
    double ratio2 = 0.0;
    double shift_lhs = 0.0;  // sup_tau int_0^T |S(t+tau) - S(t)|, tau <= eps
    double shift_rhs = 0.0;  // 2 (omega + (eps/T) int |S|)
    double shift_ratio = 0.0;
    nlohmann::json to_json() const;
    static std::string csv_header();
    std::string csv_row() const;
};

MollifyBoundsReport mollify_bounds_report(const MollifiedSymmetrizer& ms, std::span<const double> xi,
                             double eps);

} // namespace hypercone
