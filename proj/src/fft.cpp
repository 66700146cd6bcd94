#include "hypercone/fft.hpp"

#include <algorithm>
#include <cmath>

namespace hypercone {

std::size_t SpectralGrid::points() const {
    std::size_t p = static_cast<std::size_t>(N);
    return dim == 1 ? p : p * p;
}

void SpectralGrid::validate() const {
    if (dim != 1 && dim != 2) throw Error("SpectralGrid: dim must be 1 or 2");
    if (N < 4 || N % 2 != 0) throw Error("SpectralGrid: N must be even and >= 4");
    if (L <= 0.0) throw Error("SpectralGrid: L must be positive");
}

std::vector<double> SpectralGrid::x(std::size_t flat) const {
    if (dim == 1) return {x_axis(static_cast<int>(flat))};
    return {x_axis(static_cast<int>(flat) / N), x_axis(static_cast<int>(flat) % N)};
}

std::vector<double> SpectralGrid::xi(std::size_t flat) const {
    if (dim == 1) return {xi_axis(static_cast<int>(flat))};
    return {xi_axis(static_cast<int>(flat) / N), xi_axis(static_cast<int>(flat) % N)};
}

double SpectralGrid::xi_norm(std::size_t flat) const {
    auto f = xi(flat);
    double s = 0.0;
    for (double v : f) s += v * v;
    return std::sqrt(s);
}

std::size_t SpectralGrid::conjugate_index(std::size_t flat) const {
    auto neg = [this](int idx) { return (N - idx) % N; };
    if (dim == 1) return static_cast<std::size_t>(neg(static_cast<int>(flat)));
    int i = static_cast<int>(flat) / N, j = static_cast<int>(flat) % N;
    return static_cast<std::size_t>(neg(i)) * N + neg(j);
}

double SpectralGrid::periodic_distance(std::size_t flat, const std::vector<double>& center) const {
    auto xs = x(flat);
    double s = 0.0;
    for (std::size_t d = 0; d < xs.size(); ++d) {
        double diff = std::abs(xs[d] - center[d]);
        diff = std::min(diff, L - diff);
        s += diff * diff;
    }
    return std::sqrt(s);
}

Field::Field(const SpectralGrid& g, int m_) : grid(g), m(m_), v(g.points() * m_, 0.0) {}

double Field::point_norm(std::size_t flat) const {
    double s = 0.0;
    for (int c = 0; c < m; ++c) s += at(c, flat) * at(c, flat);
    return std::sqrt(s);
}

double Field::max_norm() const {
    double s = 0.0;
    for (std::size_t p = 0; p < grid.points(); ++p) s = std::max(s, point_norm(p));
    return s;
}

ModeField::ModeField(const SpectralGrid& g, int m_) : grid(g), m(m_), v(g.points() * m_, cplx(0.0, 0.0)) {}

// ---------------------------------------------------------------------------
// transforms
// ---------------------------------------------------------------------------

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft_pow2(std::vector<cplx>& a, bool inverse) {
    std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = (inverse ? 2.0 : -2.0) * M_PI / static_cast<double>(len);
        cplx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                cplx u = a[i + k];
                cplx t = a[i + k + len / 2] * w;
                a[i + k] = u + t;
                a[i + k + len / 2] = u - t;
                w *= wl;
            }
        }
    }
}

void dft_naive(std::vector<cplx>& a, bool inverse) {
    std::size_t n = a.size();
    std::vector<cplx> out(n, cplx(0.0, 0.0));
    double sgn = inverse ? 2.0 : -2.0;
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            double ang = sgn * M_PI * static_cast<double>((j * k) % n) / static_cast<double>(n);
            acc += a[j] * cplx(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    a = std::move(out);
}

} // namespace

void fft_inplace(std::vector<cplx>& a, bool inverse) {
    if (is_pow2(a.size()))
        fft_pow2(a, inverse);
    else
        dft_naive(a, inverse);
}

namespace {

// unnormalized DFT along both axes of a dim-2 row-major array (or the single
// axis for dim 1)
void transform_nd(std::vector<cplx>& data, const SpectralGrid& g, bool inverse) {
    int N = g.N;
    if (g.dim == 1) {
        fft_inplace(data, inverse);
        return;
    }
    std::vector<cplx> line(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) { // rows (contiguous)
        std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(i) * N, N, line.begin());
        fft_inplace(line, inverse);
        std::copy_n(line.begin(), N, data.begin() + static_cast<std::ptrdiff_t>(i) * N);
    }
    for (int j = 0; j < N; ++j) { // columns (strided)
        for (int i = 0; i < N; ++i) line[static_cast<std::size_t>(i)] = data[static_cast<std::size_t>(i) * N + j];
        fft_inplace(line, inverse);
        for (int i = 0; i < N; ++i) data[static_cast<std::size_t>(i) * N + j] = line[static_cast<std::size_t>(i)];
    }
}

// (-1)^(k1 + ... + kdim) phase from the -L/2 grid offset
double offset_sign(const SpectralGrid& g, std::size_t flat) {
    int s;
    if (g.dim == 1)
        s = static_cast<int>(flat);
    else
        s = static_cast<int>(flat) / g.N + static_cast<int>(flat) % g.N;
    return (s % 2 == 0) ? 1.0 : -1.0;
}

} // namespace

ModeField spectral_forward(const Field& f) {
    f.grid.validate();
    ModeField out(f.grid, f.m);
    std::size_t pts = f.grid.points();
    double scale = std::pow(f.grid.h(), f.grid.dim);
    std::vector<cplx> work(pts);
    for (int c = 0; c < f.m; ++c) {
        for (std::size_t p = 0; p < pts; ++p) work[p] = cplx(f.at(c, p), 0.0);
        transform_nd(work, f.grid, false);
        for (std::size_t p = 0; p < pts; ++p) out.at(c, p) = work[p] * (scale * offset_sign(f.grid, p));
    }
    return out;
}

Field spectral_inverse(const ModeField& mf, double* max_imag_residue) {
    mf.grid.validate();
    Field out(mf.grid, mf.m);
    std::size_t pts = mf.grid.points();
    double inv_scale = 1.0 / std::pow(mf.grid.L, mf.grid.dim);
    double residue = 0.0;
    std::vector<cplx> work(pts);
    for (int c = 0; c < mf.m; ++c) {
        for (std::size_t p = 0; p < pts; ++p) work[p] = mf.at(c, p) * offset_sign(mf.grid, p);
        transform_nd(work, mf.grid, true);
        for (std::size_t p = 0; p < pts; ++p) {
            cplx z = work[p] * inv_scale;
            out.at(c, p) = z.real();
            residue = std::max(residue, std::abs(z.imag()));
        }
    }
    if (max_imag_residue) *max_imag_residue = residue;
    return out;
}

double hermitian_asymmetry(const ModeField& mf) {
    // the symmetry is between lattice pairs (xi, -xi); modes on a Nyquist
    // line have no partner (+N/2 is not a lattice frequency: the conjugate
    // slot folds back onto the same line), so they carry no constraint
    const SpectralGrid& g = mf.grid;
    auto on_nyquist = [&g](std::size_t flat) {
        if (g.dim == 1) return static_cast<int>(flat) == g.N / 2;
        return static_cast<int>(flat) / g.N == g.N / 2 || static_cast<int>(flat) % g.N == g.N / 2;
    };
    double worst = 0.0;
    std::size_t pts = g.points();
    for (int c = 0; c < mf.m; ++c)
        for (std::size_t p = 0; p < pts; ++p) {
            if (on_nyquist(p)) continue;
            std::size_t q = g.conjugate_index(p);
            worst = std::max(worst, std::abs(mf.at(c, q) - std::conj(mf.at(c, p))));
        }
    return worst;
}

} // namespace hypercone
