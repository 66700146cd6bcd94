#pragma once

// Symbol assembly A(t, xi) = sum_j xi_j A_j(t), its complex-frequency
// extension A(t, zeta) = A(t, xi) + i A(t, eta), and sampling-based
// hyperbolicity classification.

#include <span>
#include <vector>

#include "hypercone/coefficients.hpp"

namespace hypercone {

Mat symbol_at(const CoefficientFamily& c, double t, std::span<const double> xi);
Mat symbol_complex(const CoefficientFamily& c, double t, std::span<const cplx> zeta);

/// Same assembly from pre-evaluated coefficients; shared by the lattice
/// solver fast path so both routes do bit-identical arithmetic.
Mat assemble_symbol(const std::vector<Mat>& coeffs, std::span<const double> xi);
Mat assemble_symbol_complex(const std::vector<Mat>& coeffs, std::span<const cplx> zeta);

enum class Hyperbolicity {
    strictly_hyperbolic,
    constant_multiplicities,
    hyperbolic,
    not_hyperbolic,
    not_semisimple,
};

const char* to_string(Hyperbolicity h);

struct ClassifyWitness {
    double t = 0.0;
    std::vector<double> xi;
    std::vector<cplx> eigenvalues;
};

struct HyperbolicityClass {
    Hyperbolicity verdict = Hyperbolicity::hyperbolic;
    ClassifyWitness witness; // sample that pinned the verdict down
};

struct TXiSample {
    double t;
    std::vector<double> xi;
};

/// `count` deterministic unit directions: {+1,-1} for n = 1, equispaced
/// angles for n = 2, a Fibonacci sphere for n = 3.
std::vector<std::vector<double>> sphere_directions(int n, int count);

/// Tensor grid of t-quantile midpoints times unit directions.
std::vector<TXiSample> default_samples(const CoefficientFamily& c, int nt = 16, int ndir = 32);

/// Evaluates the eigenstructure at every sample and returns the strongest
/// verdict consistent with all of them. Reality and semi-simplicity are
/// tested per sample; multiplicity patterns are compared across samples.
HyperbolicityClass classify(const CoefficientFamily& c, const std::vector<TXiSample>& samples);

HyperbolicityClass classify(const CoefficientFamily& c);

} // namespace hypercone
