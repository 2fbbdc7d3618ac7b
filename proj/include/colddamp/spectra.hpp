#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "colddamp/error.hpp"
#include "colddamp/grid.hpp"
#include "colddamp/model.hpp"
#include "colddamp/response.hpp"

namespace colddamp {

enum class SpectrumVariant { Free, Simplified, General };

inline const char* to_string(SpectrumVariant v) noexcept {
    switch (v) {
    case SpectrumVariant::Free: return "free";
    case SpectrumVariant::Simplified: return "simplified";
    case SpectrumVariant::General: return "general";
    }
    return "?";
}

struct SpectrumOptions {
    SpectrumVariant variant = SpectrumVariant::General;
    // Simplified variant only: evaluate the measurement term at Omega_m,
    // which makes |Z|^2 sigma_VV frequency independent.
    bool flat = false;
};

struct SpectrumMetadata {
    SpectrumOptions options;
    bool white_noise = true;
    double omega_m = 0.0;
    double noise_unit = 0.0;  // hbar Omega_m / H_m
    std::uint64_t config_digest = 0;
    std::vector<std::string> notes;
};

/// Two-sided symmetrized velocity noise spectrum, (m/s)^2 s.
struct Spectrum {
    FrequencyGrid grid;
    std::vector<double> values;
    SpectrumMetadata meta;

    /// 10 log10(sigma_VV / (hbar Omega_m / H_m)).
    double db(std::size_t i) const { return 10.0 * std::log10(values[i] / meta.noise_unit); }
};

/// 2 hbar |Omega| H_m sigma_mm, the force spectrum of the mechanical bath.
/// In white-noise mode Omega is replaced by Omega_m, giving 2 H_m kB Theta_m.
inline double thermal_force_spectrum(const ValidatedConfig& cfg, double omega) {
    const double h_m = cfg.oscillator.damping;
    if (cfg.white_noise) return h_m * cfg.hbar_omega_m() * (2.0 * cfg.n_theta + 1.0);
    const double w = std::abs(omega);
    if (cfg.bath_temperature == 0.0) return cfg.constants.hbar * w * h_m;
    // coth(x/2) = 1 + 2 / expm1(x)
    const double x = cfg.constants.hbar * w / (cfg.constants.kB * cfg.bath_temperature);
    return cfg.constants.hbar * w * h_m * (1.0 + 2.0 / std::expm1(x));
}

/// Free oscillator: |Z_m|^2 sigma_VV = thermal force spectrum.
inline double free_spectrum(const ValidatedConfig& cfg, double omega) {
    return thermal_force_spectrum(cfg, omega) / std::norm(mech_impedance(cfg.oscillator, omega));
}

/// Full spectrum with cavity filtering, arbitrary light state and complex Z_fb.
inline double feedback_spectrum_general(const ValidatedConfig& cfg, double omega) {
    const complex z = total_impedance(cfg, omega);
    const complex z_fb = cfg.feedback.at(omega);
    const double hbar = cfg.constants.hbar;
    const double k2 = cfg.kappa_over_sqrt_gamma * cfg.kappa_over_sqrt_gamma;  // kappa^2 / gamma
    const double x = omega / cfg.omega_cav;

    const double back_action = 2.0 * hbar * hbar * k2 / (1.0 + x * x) * cfg.light.s11;
    const double measurement = omega * omega * (1.0 + x * x) / (8.0 * k2) * std::norm(z_fb) * cfg.light.s22;
    const double correlation = -hbar * omega * z_fb.imag() * cfg.light.s12;
    return (thermal_force_spectrum(cfg, omega) + back_action + measurement + correlation) / std::norm(z);
}

namespace detail {

inline void require_cold_damping(const ValidatedConfig& cfg) {
    require(cfg.feedback.is_cold_damping(), ErrorCode::ReactiveFeedbackNotAllowed,
            "the simplified spectrum requires a real feedback impedance");
}

inline void require_gain_below_q(const ValidatedConfig& cfg) {
    require(cfg.g_diss < cfg.quality_factor, ErrorCode::GainExceedsQ,
            "gain g = " + std::to_string(cfg.g_diss) + " must be below Q = " +
                std::to_string(cfg.quality_factor) + " for the flat spectrum");
}

/// 2n + 1 + (zeta/2) s11 + (g^2 / 2 zeta) s22; the light terms can be dropped.
inline double resonance_noise_sum(const ValidatedConfig& cfg, bool include_light = true) {
    const double thermal = 2.0 * cfg.n_theta + 1.0;
    if (!include_light) return thermal;
    const double g = cfg.g_diss;
    return thermal + 0.5 * cfg.zeta * cfg.light.s11 + g * g / (2.0 * cfg.zeta) * cfg.light.s22;
}

} // namespace detail

/// Wide-cavity cold-damping spectrum with a white mechanical force.
/// With `flat` the measurement noise is evaluated at Omega_m and the spectrum
/// is an exact lorentzian of width (1+g) H_m / M.
inline double feedback_spectrum_simplified(const ValidatedConfig& cfg, double omega, bool flat = true) {
    detail::require_cold_damping(cfg);
    const complex z = total_impedance(cfg, omega);
    const double h_m = cfg.oscillator.damping;
    const double unit = h_m * cfg.hbar_omega_m();
    if (flat) {
        detail::require_gain_below_q(cfg);
        return unit * detail::resonance_noise_sum(cfg) / std::norm(z);
    }
    const double g = cfg.g_diss;
    const double w = omega / cfg.oscillator.omega_m;
    const double sum = 2.0 * cfg.n_theta + 1.0 + 0.5 * cfg.zeta * cfg.light.s11 +
                       w * w * g * g / (2.0 * cfg.zeta) * cfg.light.s22;
    return unit * sum / std::norm(z);
}

/// sigma_VV(Omega_m) = (hbar Omega_m / H_m) (2n + 1 + zeta/2 + g^2/2zeta) / (1+g)^2
inline double resonance_noise(const ValidatedConfig& cfg) {
    detail::require_cold_damping(cfg);
    const double g = cfg.g_diss;
    return cfg.noise_unit() * detail::resonance_noise_sum(cfg) / ((1.0 + g) * (1.0 + g));
}

/// Gain minimizing the resonance noise at fixed zeta and n_theta (coherent
/// light): stationary point of (A + g^2/2zeta)/(1+g)^2, g* = 2 zeta A with
/// A = 2n + 1 + zeta/2.
inline double optimal_resonance_gain(double n_theta, double zeta) noexcept {
    return zeta * (4.0 * n_theta + 2.0 + zeta);
}

inline double spectrum_at(const ValidatedConfig& cfg, double omega, const SpectrumOptions& opt) {
    switch (opt.variant) {
    case SpectrumVariant::Free: return free_spectrum(cfg, omega);
    case SpectrumVariant::Simplified: return feedback_spectrum_simplified(cfg, omega, opt.flat);
    case SpectrumVariant::General: return feedback_spectrum_general(cfg, omega);
    }
    return 0.0;
}

inline Spectrum evaluate_spectrum(const ValidatedConfig& cfg, const FrequencyGrid& grid,
                                  const SpectrumOptions& opt = {}) {
    Spectrum out;
    out.grid = grid;
    out.meta.options = opt;
    out.meta.omega_m = cfg.oscillator.omega_m;
    out.meta.noise_unit = cfg.noise_unit();
    out.meta.config_digest = digest(cfg);
    out.meta.white_noise = opt.variant == SpectrumVariant::Simplified ? true : cfg.white_noise;

    if (opt.variant == SpectrumVariant::Simplified) {
        detail::require_cold_damping(cfg);
        if (opt.flat) detail::require_gain_below_q(cfg);
        if (cfg.omega_cav < 10.0 * cfg.oscillator.omega_m)
            out.meta.notes.push_back("cavity bandwidth below 10 Omega_m: wide-cavity approximation is poor");
        if (!cfg.white_noise)
            out.meta.notes.push_back("simplified variant always uses the white-noise bath force");
    }
    if (opt.variant == SpectrumVariant::Free && cfg.feedback.impedance != complex(0.0, 0.0))
        out.meta.notes.push_back("free variant ignores the configured feedback and light");

    out.values.reserve(grid.size());
    for (double omega : grid) out.values.push_back(spectrum_at(cfg, omega, opt));
    return out;
}

struct PeakShape {
    double omega = 0.0;  // sample of the maximum
    double value = 0.0;
    double fwhm = 0.0;  // from linear interpolation of the half-maximum crossings
};

/// Locates the largest sample and measures the full width at half maximum.
/// Returns fwhm = 0 when a crossing lies outside the grid.
inline PeakShape peak_shape(std::span<const double> omega, std::span<const double> values) {
    PeakShape p;
    if (values.empty()) return p;
    const auto it = std::max_element(values.begin(), values.end());
    const std::size_t k = static_cast<std::size_t>(it - values.begin());
    p.omega = omega[k];
    p.value = *it;
    const double half = 0.5 * p.value;

    std::size_t lo = k;
    while (lo > 0 && values[lo] > half) --lo;
    std::size_t hi = k;
    while (hi + 1 < values.size() && values[hi] > half) ++hi;
    if (values[lo] > half || values[hi] > half) return p;

    auto cross = [&](std::size_t a, std::size_t b) {
        return omega[a] + (half - values[a]) * (omega[b] - omega[a]) / (values[b] - values[a]);
    };
    p.fwhm = cross(hi - 1, hi) - cross(lo, lo + 1);
    return p;
}

inline PeakShape peak_shape(const Spectrum& s) { return peak_shape(s.grid.samples(), s.values); }

} // namespace colddamp
