#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "colddamp/error.hpp"
#include "colddamp/grid.hpp"
#include "colddamp/model.hpp"
#include "colddamp/spectra.hpp"

namespace colddamp {

/// Effective temperatures of the cooled mirror. All temperatures share the
/// config's units (K in SI mode); `zero_point` is hbar Omega_m / (2 kB).
struct TemperatureReport {
    double zero_point = 0.0;
    double theta_m = 0.0;
    double theta_fb_classical = 0.0;
    double theta_fb_quantum = 0.0;
    double theta_fb_optimal = 0.0;  // minimum over zeta at the same gain
    double n_theta = 0.0;
    double n_theta_fb = 0.0;
    double n_theta_fb_optimal = 0.0;
    // classical cold damping predicts a temperature below the zero-point limit
    bool classical_below_zero_point = false;

    double normalized(double theta) const noexcept { return theta / zero_point; }
};

/// Theta_fb = Theta_m / (1 + g)
inline double classical_cold_damping_temp(const ValidatedConfig& cfg) {
    detail::require_cold_damping(cfg);
    return cfg.theta_m / (1.0 + cfg.g_diss);
}

/// Normalized temperature kB Theta_fb / (hbar Omega_m / 2) of a cold-damped
/// mirror: (2n + 1 + (zeta/2) s11 + (g^2/2zeta) s22) / (1 + g).
inline double cold_damping_temperature_normalized(double n_theta, double gain, double zeta,
                                                  const LightState& light = LightState::coherent()) noexcept {
    return (2.0 * n_theta + 1.0 + 0.5 * zeta * light.s11 + gain * gain / (2.0 * zeta) * light.s22) /
           (1.0 + gain);
}

/// Quantum effective temperature from the flat cold-damping spectrum. With
/// `include_light = false` the back-action and measurement terms are dropped,
/// which recovers the classical result.
inline double quantum_cold_damping_temp(const ValidatedConfig& cfg, bool include_light = true) {
    detail::require_cold_damping(cfg);
    detail::require_gain_below_q(cfg);
    return cfg.zero_point_temperature() * detail::resonance_noise_sum(cfg, include_light) /
           (1.0 + cfg.g_diss);
}

struct ZetaOptimum {
    double analytic = 0.0;  // g sqrt(s22 / s11); equals g for coherent light
    double numeric = 0.0;   // minimizer on the scan grid
    double grid_step = 0.0; // log10 spacing of the scan grid
};

inline double scan_minimizer(std::span<const double> xs, auto&& f) {
    double best_x = xs.front(), best = f(xs.front());
    for (double x : xs.subspan(1)) {
        const double v = f(x);
        if (v < best) {
            best = v;
            best_x = x;
        }
    }
    return best_x;
}

inline ZetaOptimum optimal_zeta(const ValidatedConfig& cfg, double zeta_lo = 1e-3, double zeta_hi = 1e9,
                                std::size_t points = 1000) {
    detail::require_cold_damping(cfg);
    const double g = cfg.g_diss;
    ZetaOptimum out;
    out.analytic = g * std::sqrt(cfg.light.s22 / cfg.light.s11);
    const FrequencyGrid zetas = FrequencyGrid::logarithmic(zeta_lo, zeta_hi, points);
    out.numeric = scan_minimizer(zetas.samples(), [&](double zeta) {
        return cold_damping_temperature_normalized(cfg.n_theta, g, zeta, cfg.light);
    });
    out.grid_step = (std::log10(zeta_hi) - std::log10(zeta_lo)) / static_cast<double>(points - 1);
    return out;
}

/// Minimum over zeta: n_theta_fb = n_theta / (1 + g) for coherent light.
/// Squeezed light lowers the measurement/back-action floor g to g sqrt(s11 s22).
inline double optimal_temperature_normalized(double n_theta, double gain,
                                             const LightState& light = LightState::coherent()) noexcept {
    const double excess = std::sqrt(light.s11 * light.s22) - 1.0;
    return 2.0 * (n_theta / (1.0 + gain) + 0.5 + 0.5 * gain * excess / (1.0 + gain));
}

inline TemperatureReport optimal_temperature(const ValidatedConfig& cfg) {
    detail::require_cold_damping(cfg);
    TemperatureReport r;
    r.zero_point = cfg.zero_point_temperature();
    r.theta_m = cfg.theta_m;
    r.n_theta = cfg.n_theta;
    r.theta_fb_classical = classical_cold_damping_temp(cfg);
    r.theta_fb_optimal = r.zero_point * optimal_temperature_normalized(cfg.n_theta, cfg.g_diss, cfg.light);
    r.n_theta_fb_optimal = r.normalized(r.theta_fb_optimal) / 2.0 - 0.5;
    r.theta_fb_quantum = r.theta_fb_optimal;
    r.n_theta_fb = r.n_theta_fb_optimal;
    r.classical_below_zero_point = r.theta_fb_classical < r.zero_point;
    return r;
}

/// Report at the configured zeta. Refuses g >= Q (see variance_by_integration).
inline TemperatureReport temperature_report(const ValidatedConfig& cfg, bool include_light = true) {
    TemperatureReport r = optimal_temperature(cfg);
    r.theta_fb_quantum = quantum_cold_damping_temp(cfg, include_light);
    r.n_theta_fb = r.normalized(r.theta_fb_quantum) / 2.0 - 0.5;
    return r;
}

struct VarianceResult {
    double variance = 0.0;  // (m/s)^2
    double band = 0.0;      // part inside the grid
    double tails = 0.0;     // analytic tail corrections
};

struct IntegrationOptions {
    bool tail_correction = true;
    double coverage = 50.0;  // grid must reach [Omega_m / coverage, coverage * Omega_m]
};

namespace detail {

// Trapezoid over one sign of the spectrum, abscissae as |Omega| ascending.
inline VarianceResult integrate_side(std::span<const double> w, std::span<const double> s,
                                     const IntegrationOptions& opt) {
    VarianceResult r;
    for (std::size_t i = 1; i < w.size(); ++i) r.band += 0.5 * (s[i] + s[i - 1]) * (w[i] - w[i - 1]);
    if (!opt.tail_correction) return r;

    const std::size_t n = w.size();
    require(n >= 3, ErrorCode::InsufficientGridCoverage, "too few points to integrate");
    const double slope = std::log(s[n - 1] / s[n - 2]) / std::log(w[n - 1] / w[n - 2]);
    require(slope < -1.5, ErrorCode::NonIntegrableTail,
            "spectrum does not fall off as 1/Omega^2 at the top of the grid (log slope " +
                std::to_string(slope) + ")");
    // sigma ~ C / Omega^2 above the grid, sigma ~ B Omega^2 below it
    r.tails = s[n - 1] * w[n - 1] + s[0] * w[0] / 3.0;
    return r;
}

} // namespace detail

/// Variance of the velocity, (1/2pi) Int sigma_VV dOmega over both signs of
/// Omega. A grid with only positive frequencies stands for both halves.
inline VarianceResult variance_by_integration(const Spectrum& spec, const IntegrationOptions& opt = {}) {
    const auto w = spec.grid.samples();
    const auto s = std::span<const double>(spec.values);
    const double omega_m = spec.meta.omega_m;

    std::size_t first_pos = 0;
    while (first_pos < w.size() && w[first_pos] < 0.0) ++first_pos;

    auto covers = [&](double lo, double hi) {
        return lo <= omega_m / opt.coverage && hi >= omega_m * opt.coverage;
    };
    const bool has_pos = first_pos < w.size();
    const bool has_neg = first_pos > 0;
    detail::require(has_pos, ErrorCode::InsufficientGridCoverage, "no positive frequencies");
    detail::require(covers(w[first_pos], w.back()), ErrorCode::InsufficientGridCoverage,
                    "grid must span [Omega_m/50, 50 Omega_m]");

    VarianceResult total = detail::integrate_side(w.subspan(first_pos), s.subspan(first_pos), opt);
    if (has_neg) {
        std::vector<double> wn, sn;
        for (std::size_t i = first_pos; i-- > 0;) {
            wn.push_back(-w[i]);
            sn.push_back(s[i]);
        }
        detail::require(covers(wn.front(), wn.back()), ErrorCode::InsufficientGridCoverage,
                        "negative half must span [Omega_m/50, 50 Omega_m]");
        const VarianceResult neg = detail::integrate_side(wn, sn, opt);
        total.band += neg.band;
        total.tails += neg.tails;
    } else {
        total.band *= 2.0;
        total.tails *= 2.0;
    }
    const double scale = 1.0 / (2.0 * std::numbers::pi);
    total.band *= scale;
    total.tails *= scale;
    total.variance = total.band + total.tails;
    return total;
}

/// Equipartition: M <V^2> = kB Theta.
inline double equipartition_temperature(const ValidatedConfig& cfg, double variance) noexcept {
    return cfg.oscillator.mass * variance / cfg.constants.kB;
}

/// Matching sigma_VV(Omega_m) to a free oscillator of damping H_m + H_fb:
/// |Z(Omega_m)|^2 sigma = 2 (H_m + H_fb) kB Theta.
inline double resonance_matched_temperature(const ValidatedConfig& cfg, double sigma_at_resonance) noexcept {
    const double h_tot = cfg.oscillator.damping + cfg.feedback.dissipative();
    return sigma_at_resonance * h_tot / (2.0 * cfg.constants.kB);
}

/// Integration grid around Omega_m: 200 points per linewidth (1+g) H_m / M at
/// the centre, geometric growth (1%) away from it, spanning [Omega_m/50, 50 Omega_m].
inline FrequencyGrid integration_grid(const ValidatedConfig& cfg, double points_per_linewidth = 200.0,
                                      double growth = 0.01) {
    const double omega_m = cfg.oscillator.omega_m;
    const double width = (1.0 + cfg.g_diss) * cfg.oscillator.linewidth();
    return FrequencyGrid::adaptive(omega_m, width / points_per_linewidth, growth, omega_m / 50.0,
                                   omega_m * 50.0);
}

struct SweepRow {
    double gain = 0.0;
    double zeta = 0.0;
    double theta_fb_normalized = 0.0;
    double n_theta_fb = 0.0;
    bool is_optimum = false;
};

/// Normalized cold-damping temperature over a (g, zeta) grid; rows ordered
/// by gain then zeta. `is_optimum` marks the first minimizer of each gain.
inline std::vector<SweepRow> temperature_sweep(const ValidatedConfig& cfg, std::span<const double> gains,
                                               std::span<const double> zetas) {
    std::vector<SweepRow> rows;
    rows.reserve(gains.size() * zetas.size());
    for (double g : gains) {
        detail::require(g >= 0.0, ErrorCode::NonPositiveParameter, "gain must be >= 0");
        detail::require(g < cfg.quality_factor, ErrorCode::GainExceedsQ,
                        "sweep gain " + std::to_string(g) + " must be below Q");
        const std::size_t begin = rows.size();
        std::size_t best = begin;
        for (double zeta : zetas) {
            detail::require_positive(zeta, "zeta");
            const double t = cold_damping_temperature_normalized(cfg.n_theta, g, zeta, cfg.light);
            rows.push_back({g, zeta, t, t / 2.0 - 0.5, false});
            if (t < rows[best].theta_fb_normalized) best = rows.size() - 1;
        }
        if (rows.size() > begin) rows[best].is_optimum = true;
    }
    return rows;
}

} // namespace colddamp
