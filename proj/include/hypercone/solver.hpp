#pragma once

// Fourier-side Cauchy solver: per-mode integration of
//   d/dt uhat + i A(t, zeta) uhat = fhat(t, zeta)
// by classical RK4 and by Picard iteration, plus full-lattice runs on the
// periodic box with physical-space synthesis.

#include <functional>
#include <optional>

#include "hypercone/coefficients.hpp"
#include "hypercone/fft.hpp"
#include "hypercone/symbol.hpp"

namespace hypercone {

struct ModeProblem {
    CoefficientFamily family;
    std::vector<cplx> zeta;  // xi + i eta, dimension n
    std::vector<cplx> u0;    // m components
    std::function<std::vector<cplx>(double)> forcing; // null means zero
    int Nt = 64;             // uniform steps on [0, T], >= 8

    void validate() const;
};

/// Classical RK4; returns all Nt+1 node values. Throws StepOverflow when an
/// intermediate norm exceeds 1e12 * (|u0| + 1).
std::vector<std::vector<cplx>> solve_mode_rk4(const ModeProblem& p);

/// Picard iterates u^{k+1}(t) = u0 + int_0^t (fhat - i A u^k) with trapezoid
/// cumulative quadrature on the node grid; returns the iters-th iterate.
std::vector<std::vector<cplx>> solve_mode_picard(const ModeProblem& p, int iters);

struct LatticeProblem {
    SpectralGrid grid;
    int m = 1;
    Field u0;
    std::function<Field(double)> forcing; // null means zero
    double r0 = 0.0;                      // declared support radius of the data
    std::vector<double> x0;               // support center

    void validate() const;
};

struct LatticeRun {
    SpectralGrid grid;
    int m = 1;
    int Nt = 0;
    double T = 0.0;
    std::vector<double> times;               // snapped output times
    std::vector<std::size_t> time_indices;   // node index per output time
    std::vector<Field> fields;               // synthesized at output times
    double max_imag_residue = 0.0;
    double max_hermitian_asymmetry = 0.0;
    ModeField u0_hat;
    bool has_mode_history = false;
    std::vector<std::vector<cplx>> mode_history; // [node][mode * m + comp]
    bool has_forcing = false;
    std::vector<std::vector<cplx>> fhat_nodes;   // [node][mode * m + comp]

    /// Trajectory of one lattice mode: [node][comp].
    std::vector<std::vector<cplx>> mode_trajectory(std::size_t flat) const;
    /// |fhat(t_node, xi_flat)| per node (empty when no forcing).
    std::vector<double> forcing_norms(std::size_t flat) const;
};

struct LatticeSolveOptions {
    std::vector<double> output_times; // defaults to {T}
    int threads = 1;
    bool store_modes = true;
    /// When set, enforces the no-wrap precondition r(T) < L/2.
    std::optional<double> forward_radius_at_T;
};

/// Forward transform of data and forcing, RK4 per lattice mode (eta = 0),
/// inverse transform at the requested output times.
LatticeRun solve_lattice(const LatticeProblem& lp, const CoefficientFamily& c, int Nt,
                         const LatticeSolveOptions& opts);

} // namespace hypercone
