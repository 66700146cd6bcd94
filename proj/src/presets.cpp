#include "hypercone/presets.hpp"

#include <cmath>

namespace hypercone::presets {

Mat base_symmetric_wave() { return Mat::real({{0.0, 1.0}, {1.0, 0.0}}); }

Mat base_shear() { return Mat::real({{1.0, 1.0}, {0.0, -1.0}}); }

namespace {

double bump_profile(double s) {
    if (s >= 1.0) return 0.0;
    double d = 1.0 - s * s;
    double e = 1.0 - 1.0 / d;
    if (e < -700.0) return 0.0;
    return std::exp(e);
}

double dist(const std::vector<double>& x, const std::vector<double>& c) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - c[i]) * (x[i] - c[i]);
    return std::sqrt(s);
}

Field fill(const SpectralGrid& grid, int m, const std::vector<double>& components,
           const std::function<double(const std::vector<double>&)>& profile) {
    Field f(grid, m);
    for (std::size_t p = 0; p < grid.points(); ++p) {
        double v = profile(grid.x(p));
        for (int c = 0; c < m; ++c) f.at(c, p) = components[static_cast<std::size_t>(c)] * v;
    }
    return f;
}

} // namespace

Field bump_field(const SpectralGrid& grid, int m, double r0, const std::vector<double>& center,
                 const std::vector<double>& components, double amplitude) {
    return fill(grid, m, components, [&](const std::vector<double>& x) {
        return amplitude * bump_profile(dist(x, center) / r0);
    });
}

Field plateau_field(const SpectralGrid& grid, int m, double r0, const std::vector<double>& center,
                    const std::vector<double>& components, double amplitude, double sigma) {
    double s2 = std::sqrt(2.0) * sigma;
    if (grid.dim == 1) {
        return fill(grid, m, components, [&](const std::vector<double>& x) {
            double d = x[0] - center[0];
            return amplitude * 0.5 * (std::erf((r0 - d) / s2) + std::erf((r0 + d) / s2));
        });
    }
    return fill(grid, m, components, [&](const std::vector<double>& x) {
        return amplitude * 0.5 * std::erfc((dist(x, center) - r0) / s2);
    });
}

Field zero_field(const SpectralGrid& grid, int m) { return Field(grid, m); }

std::function<Field(double)> bump_pulse_forcing(const SpectralGrid& grid, int m, double r0,
                                                const std::vector<double>& center,
                                                const std::vector<double>& components,
                                                double amplitude, double t_on, double t_off) {
    return [=](double t) {
        double w = 0.0;
        if (t > t_on && t < t_off) {
            double s = 2.0 * (t - t_on) / (t_off - t_on) - 1.0;
            w = bump_profile(std::abs(s));
        }
        return bump_field(grid, m, r0, center, components, amplitude * w);
    };
}

} // namespace hypercone::presets
