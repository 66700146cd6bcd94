#pragma once

// Scalar quadrature helpers shared across the library: adaptive Simpson with
// optional interior split points, composite trapezoid/midpoint rules, and
// Gauss-Legendre nodes on [-1, 1].

#include <functional>
#include <vector>

namespace hypercone {

struct GaussLegendre {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights; // sum to 2
};

/// Nodes and weights computed by Newton iteration on the Legendre polynomial.
const GaussLegendre& gauss_legendre(int order);

/// Adaptive composite Simpson on [a, b] to absolute tolerance `tol`.
/// Throws QuadratureFailure when the recursion exceeds `max_depth` anywhere.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 30);

/// Adaptive Simpson with the interval pre-split at the given interior points
/// (breakpoints outside (a, b) are ignored). Tolerance is divided across cells.
double adaptive_simpson_split(const std::function<double(double)>& f, double a, double b,
                              double tol, const std::vector<double>& splits, int max_depth = 30);

/// Like adaptive_simpson_split but never throws: when an interval stalls at
/// max_depth the deepest estimate is used. For diagnostics integrands with
/// kinks where a best-effort value is the right behavior.
double adaptive_simpson_lenient(const std::function<double(double)>& f, double a, double b,
                                double tol, const std::vector<double>& splits, int max_depth = 24);

/// Split variant for integrands with (integrable) endpoint blow-ups at the
/// split points: cells are shaved by `shave` at interior edges, and a cell
/// stalling at max_depth is accepted as long as its residual correction stays
/// below `fallback_tol` - otherwise QuadratureFailure, which is the
/// non-integrable signal.
double adaptive_simpson_guarded(const std::function<double(double)>& f, double a, double b,
                                double tol, const std::vector<double>& splits, double shave,
                                double fallback_tol, int max_depth = 30);

double trapezoid(const std::function<double(double)>& f, double a, double b, int nodes);
double midpoint(const std::function<double(double)>& f, double a, double b, int cells);

} // namespace hypercone
