#pragma once

#include <array>
#include <string>
#include <vector>

#include "colddamp/grid.hpp"
#include "colddamp/model.hpp"
#include "colddamp/spectra.hpp"
#include "colddamp/thermo.hpp"

// Presets for the two reference scenarios: velocity spectra of the cooled
// mirror for increasing gain, and the effective temperature versus zeta.

namespace colddamp::figures {

struct SpectraScenario {
    double quality_factor = 1e6;
    double n_theta = 1e5;
    double zeta = 1.0;
    std::array<double, 5> gains{0.0, 10.0, 1e2, 1e3, 1e4};
    std::array<const char*, 5> labels{"a", "b", "c", "d", "e"};
};

struct SpectrumCurve {
    std::string label;
    double gain = 0.0;
    ValidatedConfig config;
    Spectrum spectrum;
};

/// Grid shared by every curve: resolves the narrowest line (100 points per
/// free linewidth at the centre) and spans Omega_m (1 +- 0.1).
inline FrequencyGrid spectra_grid(const SpectraScenario& s = {}) {
    const double width = 1.0 / s.quality_factor;
    return FrequencyGrid::adaptive(1.0, width / 100.0, 0.002, 0.9, 1.1);
}

inline std::vector<SpectrumCurve> velocity_spectra(const SpectraScenario& s = {}) {
    const FrequencyGrid grid = spectra_grid(s);
    std::vector<SpectrumCurve> curves;
    for (std::size_t i = 0; i < s.gains.size(); ++i) {
        SpectrumCurve c;
        c.label = s.labels[i];
        c.gain = s.gains[i];
        c.config = normalized_config(s.quality_factor, s.n_theta, s.zeta, s.gains[i]);
        c.spectrum = evaluate_spectrum(c.config, grid, {SpectrumVariant::Simplified, true});
        curves.push_back(std::move(c));
    }
    return curves;
}

struct TemperatureScenario {
    double n_theta = 1e5;
    // not fixed by the scenario; only needs to exceed every gain
    double quality_factor = 1e12;
    std::array<double, 4> gains{10.0, 1e3, 1e5, 1e7};
    std::array<const char*, 4> labels{"a", "b", "c", "d"};
    double zeta_lo = 1e-2;
    double zeta_hi = 1e10;
    std::size_t points_per_decade = 100;
};

struct TemperatureCurve {
    std::string label;
    double gain = 0.0;
    std::vector<SweepRow> rows;
};

inline FrequencyGrid zeta_grid(const TemperatureScenario& s = {}) {
    const double decades = std::log10(s.zeta_hi) - std::log10(s.zeta_lo);
    const auto points = static_cast<std::size_t>(std::lround(decades * static_cast<double>(s.points_per_decade))) + 1;
    return FrequencyGrid::logarithmic(s.zeta_lo, s.zeta_hi, points);
}

inline std::vector<TemperatureCurve> temperature_curves(const TemperatureScenario& s = {}) {
    const ValidatedConfig base = normalized_config(s.quality_factor, s.n_theta, 1.0, 0.0);
    const FrequencyGrid zetas = zeta_grid(s);
    std::vector<TemperatureCurve> curves;
    for (std::size_t i = 0; i < s.gains.size(); ++i) {
        const double g[1] = {s.gains[i]};
        curves.push_back({s.labels[i], s.gains[i], temperature_sweep(base, g, zetas.samples())});
    }
    return curves;
}

/// Locus of the per-gain minima: zeta = g, Theta = 1 + 2 n_theta / (1 + g).
inline std::vector<SweepRow> optimum_locus(const TemperatureScenario& s = {}) {
    std::vector<SweepRow> rows;
    for (double g : zeta_grid(s)) {
        const double t = optimal_temperature_normalized(s.n_theta, g);
        rows.push_back({g, g, t, t / 2.0 - 0.5, true});
    }
    return rows;
}

} // namespace colddamp::figures
