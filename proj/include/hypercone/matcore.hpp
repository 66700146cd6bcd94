#pragma once

// Small dense real/complex matrix kernel (m <= 64, typically <= 8):
// operator norms, eigendecompositions, matrix exponential and
// positive-definiteness probes. Everything is value-semantic and
// thread-safe; no global state.

#include <complex>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "hypercone/errors.hpp"

namespace hypercone {

using cplx = std::complex<double>;

/// Square complex matrix, row-major storage. Real matrices are the special
/// case of zero imaginary parts. Construction rejects NaN/Inf entries and
/// dimensions outside [1, 64].
class Mat {
public:
    explicit Mat(int dim);
    Mat(int dim, const std::vector<cplx>& entries);

    static Mat identity(int dim);
    static Mat diag(const std::vector<cplx>& d);
    /// Row-major real initializer, e.g. Mat::real({{0,1},{1,0}}).
    static Mat real(std::initializer_list<std::initializer_list<double>> rows);
    static Mat complex(std::initializer_list<std::initializer_list<cplx>> rows);

    int dim() const { return dim_; }
    cplx& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * dim_ + j]; }
    const cplx& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * dim_ + j]; }

    Mat operator+(const Mat& o) const;
    Mat operator-(const Mat& o) const;
    Mat operator*(const Mat& o) const;
    Mat operator*(cplx s) const;
    Mat operator*(double s) const { return (*this) * cplx(s, 0.0); }
    Mat& operator+=(const Mat& o);

    Mat adjoint() const;
    std::vector<cplx> apply(std::span<const cplx> v) const;

    double frobenius() const;
    double max_abs() const;
    bool is_real(double tol = 0.0) const;

    /// Entry check used by the constructors; also callable after in-place edits.
    void check_finite() const;

private:
    int dim_;
    std::vector<cplx> a_;
};

Mat operator*(double s, const Mat& a);

double vec_norm(std::span<const cplx> v);

/// Spectral norm |A|_M = sup_{|v|=1} |Av| (largest singular value).
double op_norm(const Mat& a);

struct EigenResult {
    std::vector<cplx> eigenvalues;   // sorted by (Re, Im) ascending
    Mat right_vectors;               // columns, unit norm, deterministic phase
    bool diagonalizable = true;
    double condition = 1.0;          // op_norm(R) * op_norm(R^-1)
};

/// Eigendecomposition. Hermitian inputs go through cyclic Jacobi rotations,
/// general ones through shifted QR on the Hessenberg form. The
/// `diagonalizable` flag goes false when some eigenvalue cluster has
/// geometric multiplicity below its algebraic one, tested by rank of
/// A - lambda*I at tolerance 1e-8*|A|_M.
EigenResult eig(const Mat& a);

/// Greedy clustering of eigenvalues within `radius`; returns groups of indices
/// into the (Re, Im)-sorted list.
std::vector<std::vector<int>> cluster_eigenvalues(const std::vector<cplx>& evals, double radius);

/// exp(t*A) by scaling-and-squaring with a Taylor kernel. Throws OverflowRisk
/// for |tA|_M > 50.
Mat expm(const Mat& a, double t);

bool is_selfadjoint(const Mat& a, double tol);

struct PsdBounds {
    double min_eig = 0.0;
    double max_eig = 0.0;
};

/// Extreme eigenvalues of the Hermitian part. Throws NotSelfAdjoint when the
/// input fails is_selfadjoint at `tol`.
PsdBounds psd_bounds(const Mat& a, double tol = 1e-10);

/// Lower-triangular L with A = L L*, or nullopt when A is not positive
/// definite (within roundoff of the pivots).
std::optional<Mat> cholesky(const Mat& a);

Mat inverse(const Mat& a);
std::vector<cplx> solve(const Mat& a, std::span<const cplx> rhs);

/// Eigenvalues of a Hermitian matrix, ascending. Cheaper entry point than
/// eig() when eigenvectors are not needed.
std::vector<double> hermitian_eigenvalues(const Mat& a);

} // namespace hypercone
