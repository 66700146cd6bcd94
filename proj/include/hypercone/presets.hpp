#pragma once

// Canned coefficient bases and physical data fields used by the experiment
// driver and the test suites.

#include <functional>

#include "hypercone/fft.hpp"

namespace hypercone::presets {

/// [[0,1],[1,0]]: symmetric, strictly hyperbolic, identity symmetrizer works.
Mat base_symmetric_wave();
/// [[1,1],[0,-1]]: strictly hyperbolic but not symmetric; needs a built
/// symmetrizer.
Mat base_shear();

/// Smooth radial bump amp * exp(1 - 1/(1 - s^2)), s = |x - center| / r0.
Field bump_field(const SpectralGrid& grid, int m, double r0, const std::vector<double>& center,
                 const std::vector<double>& components, double amplitude = 1.0);

/// erf-edged box of radius r0 (edge scale sigma): flat top, sharp but
/// spectrally clean edges.
Field plateau_field(const SpectralGrid& grid, int m, double r0, const std::vector<double>& center,
                    const std::vector<double>& components, double amplitude, double sigma);

Field zero_field(const SpectralGrid& grid, int m);

/// Smooth bump in space times a smooth [t_on, t_off] window in time.
std::function<Field(double)> bump_pulse_forcing(const SpectralGrid& grid, int m, double r0,
                                                const std::vector<double>& center,
                                                const std::vector<double>& components,
                                                double amplitude, double t_on, double t_off);

} // namespace hypercone::presets
