#pragma once

// Test-only oracles, kept independent of the implementation paths they check.

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "hypercone/matcore.hpp"

namespace oracles {

using hypercone::cplx;
using hypercone::Mat;

/// Singular values of a real 2x2 via the closed-form eigenvalues of A^T A.
inline std::pair<double, double> svd2x2(double a, double b, double c, double d) {
    double p = a * a + c * c, q = a * b + c * d, r = b * b + d * d;
    double tr = p + r, det = p * r - q * q;
    double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    double hi = tr / 2.0 + disc, lo = tr / 2.0 - disc;
    return {std::sqrt(std::max(0.0, hi)), std::sqrt(std::max(0.0, lo))};
}

inline Mat rotation(double theta) {
    return Mat::real({{std::cos(theta), -std::sin(theta)}, {std::sin(theta), std::cos(theta)}});
}

/// Brute-force midpoint quadrature.
inline double midpoint_bruteforce(const std::function<double(double)>& f, double a, double b,
                                  int cells) {
    double h = (b - a) / cells;
    double s = 0.0;
    for (int i = 0; i < cells; ++i) s += f(a + h * (i + 0.5));
    return s * h;
}

/// Dense tau-grid version of omega_S for cross-checking the refined search.
inline double omega_bruteforce(const std::function<Mat(double)>& slice, double T, double sigma,
                               int tau_points, int t_nodes) {
    double best = 0.0;
    for (int k = 0; k <= tau_points; ++k) {
        double tau = sigma * k / tau_points;
        double upper = T - sigma;
        double h = upper / t_nodes;
        double acc = 0.5 * (hypercone::op_norm(slice(tau) - slice(0.0)) +
                            hypercone::op_norm(slice(upper + tau) - slice(upper)));
        for (int i = 1; i < t_nodes; ++i) {
            double t = h * i;
            acc += hypercone::op_norm(slice(t + tau) - slice(t));
        }
        best = std::max(best, acc * h);
    }
    return best;
}

/// Random complex matrix with entries in the unit square, seeded.
inline Mat random_mat(int m, std::mt19937_64& rng, bool real_only = false) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Mat a(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) a(i, j) = real_only ? cplx(u(rng), 0.0) : cplx(u(rng), u(rng));
    return a;
}

inline Mat random_hermitian(int m, std::mt19937_64& rng) {
    Mat a = random_mat(m, rng);
    return 0.5 * (a + a.adjoint());
}

/// Random SPD matrix with eigenvalues in [lo, hi].
inline Mat random_spd(int m, std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    Mat h = random_hermitian(m, rng);
    hypercone::EigenResult er = hypercone::eig(0.5 * (h + h.adjoint()));
    std::vector<cplx> d(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) d[static_cast<std::size_t>(i)] = u(rng);
    Mat q = er.right_vectors;
    Mat s = q * Mat::diag(d) * q.adjoint();
    return 0.5 * (s + s.adjoint());
}

inline std::vector<cplx> random_cvec(int m, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cplx> v(static_cast<std::size_t>(m));
    for (auto& z : v) z = cplx(u(rng), u(rng));
    return v;
}

/// 1D Fourier-Laplace transform of a scalar profile by brute-force midpoint
/// quadrature: int g(x) exp(-i zeta x) dx over [a, b].
inline cplx fourier_laplace_1d(const std::function<double(double)>& g, double a, double b,
                               cplx zeta, int cells) {
    double h = (b - a) / cells;
    cplx acc(0.0, 0.0);
    for (int i = 0; i < cells; ++i) {
        double x = a + h * (i + 0.5);
        cplx arg = cplx(0.0, -1.0) * zeta * x;
        acc += g(x) * std::exp(arg);
    }
    return acc * h;
}

} // namespace oracles
