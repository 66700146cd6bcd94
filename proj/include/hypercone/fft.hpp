#pragma once

// Periodic-box spectral grid and discrete transforms. The forward transform
// approximates the Fourier transform of a compactly supported field:
//   uhat(xi_k) = h^n sum_x u(x) exp(-i xi_k . x),  xi_k = (2 pi / L) k,
// on lattice points x_j = -L/2 + j h. Power-of-two sizes go through an
// iterative radix-2 FFT, other even sizes through a direct DFT.

#include <vector>

#include "hypercone/matcore.hpp"

namespace hypercone {

/// Uniform N^dim grid of the box [-L/2, L/2)^dim, dim in {1, 2}.
struct SpectralGrid {
    int dim = 1;
    int N = 0;   // per-axis point count, even
    double L = 0.0;

    std::size_t points() const;
    double h() const { return L / N; }
    int signed_index(int idx) const { return idx < N / 2 ? idx : idx - N; }
    double xi_axis(int idx) const { return 2.0 * M_PI / L * signed_index(idx); }
    double x_axis(int idx) const { return -0.5 * L + h() * idx; }

    std::vector<double> x(std::size_t flat) const;
    std::vector<double> xi(std::size_t flat) const;
    double xi_norm(std::size_t flat) const;
    /// Flat index of the frequency -xi_k (exists for every lattice mode).
    std::size_t conjugate_index(std::size_t flat) const;
    /// Periodic distance between grid point `flat` and the point `center`.
    double periodic_distance(std::size_t flat, const std::vector<double>& center) const;

    void validate() const;
};

/// Real m-component physical field, component-major storage.
struct Field {
    SpectralGrid grid;
    int m = 1;
    std::vector<double> v; // size m * points(), slot comp * points + flat

    Field() = default;
    Field(const SpectralGrid& g, int m_);
    double& at(int comp, std::size_t flat) { return v[static_cast<std::size_t>(comp) * grid.points() + flat]; }
    double at(int comp, std::size_t flat) const { return v[static_cast<std::size_t>(comp) * grid.points() + flat]; }
    /// Euclidean norm over components at one grid point.
    double point_norm(std::size_t flat) const;
    double max_norm() const;
};

/// Complex m-component mode array on the frequency lattice.
struct ModeField {
    SpectralGrid grid;
    int m = 1;
    std::vector<cplx> v;

    ModeField() = default;
    ModeField(const SpectralGrid& g, int m_);
    cplx& at(int comp, std::size_t flat) { return v[static_cast<std::size_t>(comp) * grid.points() + flat]; }
    cplx at(int comp, std::size_t flat) const { return v[static_cast<std::size_t>(comp) * grid.points() + flat]; }
};

void fft_inplace(std::vector<cplx>& a, bool inverse);

ModeField spectral_forward(const Field& f);
/// Inverse transform; the synthesized field is the real part, and the largest
/// discarded imaginary magnitude is reported through `max_imag_residue`.
Field spectral_inverse(const ModeField& mf, double* max_imag_residue = nullptr);

/// max over modes of |uhat(-xi) - conj(uhat(xi))| (zero for real data).
double hermitian_asymmetry(const ModeField& mf);

} // namespace hypercone
