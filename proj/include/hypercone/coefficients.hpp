#pragma once

// Coefficient families A_j(t), j = 1..n, on [0, T]: evaluation, the norm sum
// alpha(t), its time integral with adaptive quadrature, and the forward /
// backward cone radii built from it.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hypercone/matcore.hpp"

namespace hypercone {

enum class CoefficientKind { constant, smooth, piecewise, sampled };

/// Immutable family of real m x m matrices A_1(t)..A_n(t) over [0, T].
/// Evaluation is reentrant; all presets also declare the closed-form integral
/// of alpha when one exists, which tests use as an oracle anchor.
class CoefficientFamily {
public:
    using Evaluator = std::function<std::vector<Mat>(double)>;

    CoefficientFamily(int n, int m, double T, CoefficientKind kind, Evaluator eval);

    int space_dim() const { return n_; }
    int system_size() const { return m_; }
    double horizon() const { return T_; }
    CoefficientKind kind() const { return kind_; }

    /// A_1(t)..A_n(t); throws OutOfDomain for t outside [0, T].
    std::vector<Mat> at(double t) const;

    /// Time points where the family (hence alpha) may jump or kink; used to
    /// split quadratures.
    const std::vector<double>& time_breakpoints() const { return breakpoints_; }
    void set_time_breakpoints(std::vector<double> b) { breakpoints_ = std::move(b); }

    /// Closed-form integral of alpha over [0, t] when the preset knows one.
    std::optional<double> analytic_alpha_integral(double t) const;
    void set_analytic_alpha_integral(std::function<double(double)> f) { analytic_integral_ = std::move(f); }

    /// Sample grid of the sampled kind (empty otherwise).
    const std::vector<double>& sample_times() const { return sample_times_; }

    // -- presets ------------------------------------------------------------
    /// A_j(t) = B_j.
    static CoefficientFamily constant(std::vector<Mat> base, double T);
    /// A_j(t) = B_j * (1 + 0.5 sin(omega t)).
    static CoefficientFamily smooth_oscillatory(std::vector<Mat> base, double T, double omega);
    /// A_j(t) = B_j * level_k on the k-th of the uniform cells delimited by `jumps`.
    static CoefficientFamily piecewise_constant(std::vector<Mat> base, double T,
                                                std::vector<double> levels,
                                                std::vector<double> jumps);
    /// A_j(t) = B_j * (floor + |t - t0|^gamma), gamma in (0, 1).
    static CoefficientFamily hoelder(std::vector<Mat> base, double T, double gamma, double t0,
                                     double floor);
    /// m = n = 1 with alpha(t) = |t - 1/2|^{-1/2} / 10: integrable but unbounded.
    static CoefficientFamily singular_alpha(double T);
    /// Piecewise-linear interpolation of per-node matrices.
    static CoefficientFamily sampled(int n, int m, std::vector<double> times,
                                     std::vector<std::vector<Mat>> nodes);
    /// CSV with header "t,j,row,col,value" (1-based j/row/col, sorted times).
    static CoefficientFamily from_csv(const std::string& path, int n, int m);

private:
    int n_;
    int m_;
    double T_;
    CoefficientKind kind_;
    Evaluator eval_;
    std::vector<double> breakpoints_;
    std::function<double(double)> analytic_integral_;
    std::vector<double> sample_times_;
};

/// alpha(t) = sum_j |A_j(t)|_M.
double alpha(const CoefficientFamily& c, double t);

/// Integral of alpha over [0, t]: adaptive Simpson at absolute tolerance
/// 1e-8 * (1 + t); exact trapezoid of node norms for the sampled kind.
double alpha_integral(const CoefficientFamily& c, double t);

/// Forward radius r(t) = r0 + 2 sqrt(Lambda) * integral(alpha) and backward
/// radius rho(t) = r0 - the same quantity, so r + rho == 2 r0 identically.
class ConeRadii {
public:
    ConeRadii(CoefficientFamily family, double r0, double Lambda);

    double r0() const { return r0_; }
    double Lambda() const { return Lambda_; }
    double growth(double t) const; // 2 sqrt(Lambda) * alpha_integral(t)
    double forward(double t) const { return r0_ + growth(t); }
    double backward(double t) const { return r0_ - growth(t); }

private:
    CoefficientFamily family_;
    double r0_;
    double Lambda_;
};

ConeRadii cone_radii(const CoefficientFamily& c, double r0, double Lambda);

struct BoundednessReport {
    bool bounded = false;
    double C0 = 0.0;      // sup of alpha on the finest probe grid
    double coarse_sup = 0.0;
};

/// Detects condition (ii): alpha uniformly bounded. The sup is estimated on a
/// quadrature grid and declared stable when doubling the grid moves it by
/// less than 10%.
BoundednessReport boundedness(const CoefficientFamily& c);

} // namespace hypercone
