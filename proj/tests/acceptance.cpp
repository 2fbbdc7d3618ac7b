// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Reference values are recomputed here from the closed-form expressions
// rather than taken from the library.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "colddamp/checks.hpp"
#include "colddamp/figures.hpp"
#include "colddamp/qlimits.hpp"
#include "colddamp/spectra.hpp"
#include "colddamp/thermo.hpp"

using namespace colddamp;

namespace {

int failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail) {
    std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, title, detail.c_str());
    if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// (hbar Omega_m / H_m) (2n + 1 + zeta/2 + g^2/2zeta) / (1+g)^2 with hbar = Omega_m = 1
double resonance_oracle(double q, double n, double zeta, double g) {
    return q * (2.0 * n + 1.0 + zeta / 2.0 + g * g / (2.0 * zeta)) / ((1.0 + g) * (1.0 + g));
}

// normalized Theta_fb_in for a normalized config
double theta_in_oracle(const ValidatedConfig& c) {
    const double h_m = c.oscillator.damping;
    const double h = c.feedback.impedance.real(), x = c.feedback.impedance.imag();
    const double mod = std::hypot(h, x);
    const double g = mod / h_m;
    return mod / h * (c.zeta / (2.0 * g) * c.light.s11 + g / (2.0 * c.zeta) * c.light.s22) - x / h * c.light.s12;
}

void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    const figures::SpectraScenario s;
    const auto curves = figures::velocity_spectra(s);
    const double elapsed = seconds_since(t0);

    std::size_t points = 0;
    double worst_flat = 0.0, worst_ratio = 0.0, worst_peak = 0.0;
    const double base_width = peak_shape(curves[0].spectrum).fwhm;
    for (const auto& c : curves) {
        const Spectrum& sp = c.spectrum;
        points += sp.values.size();
        const double h_m = c.config.oscillator.damping;
        const double h_tot = (1.0 + c.gain) * h_m;
        double ref = -1.0;
        for (std::size_t i = 0; i < sp.values.size(); ++i) {
            const double w = sp.grid[i];
            const double z2 = h_tot * h_tot + (w - 1.0 / w) * (w - 1.0 / w);
            const double v = z2 * sp.values[i];
            if (ref < 0.0) ref = v;
            worst_flat = std::max(worst_flat, std::abs(v - ref) / ref);
        }
        const PeakShape p = peak_shape(sp);
        worst_ratio = std::max(worst_ratio, std::abs(p.fwhm / base_width / (1.0 + c.gain) - 1.0));
        const double oracle = resonance_oracle(s.quality_factor, s.n_theta, s.zeta, c.gain);
        worst_peak = std::max(worst_peak, std::abs(p.value - oracle) / oracle);
    }
    const bool ok = worst_flat < 1e-10 && worst_ratio < 0.01 && worst_peak < 1e-9 && elapsed < 5.0 && points >= 50000;
    report(1, "fig2 preset: lorentzian velocity spectra", ok,
           fmt("|Z|^2 sigma spread %.2e, width ratio error %.2e, peak error %.2e", worst_flat, worst_ratio, worst_peak) +
               ", " + std::to_string(points) + " points in " + fmt("%.3f s", elapsed));
}

void criterion_2() {
    const auto t0 = std::chrono::steady_clock::now();
    const figures::TemperatureScenario s;
    const auto curves = figures::temperature_curves(s);
    const auto locus = figures::optimum_locus(s);
    const double elapsed = seconds_since(t0);

    const double step = 1.0 / static_cast<double>(s.points_per_decade);
    double worst_pos = 0.0, worst_val = 0.0, last_min = 0.0;
    for (const auto& c : curves) {
        for (const SweepRow& r : c.rows) {
            if (!r.is_optimum) continue;
            worst_pos = std::max(worst_pos, std::abs(std::log10(r.zeta / c.gain)));
            const double oracle = 2.0 * s.n_theta / (1.0 + c.gain) + 1.0;
            worst_val = std::max(worst_val, std::abs(r.theta_fb_normalized - oracle) / oracle);
            last_min = r.theta_fb_normalized;
        }
    }
    double worst_locus = 0.0;
    for (const SweepRow& r : locus)
        worst_locus = std::max(worst_locus, std::abs(r.theta_fb_normalized - (2.0 * s.n_theta / (1.0 + r.gain) + 1.0)));
    const bool ok = worst_pos <= step && worst_val < 1e-9 && std::abs(last_min - 1.02) < 1e-3 && worst_locus < 1e-9 &&
                    elapsed < 5.0;
    report(2, "fig3 preset: temperature minima", ok,
           fmt("argmin offset %.3g decades, minimum error %.2e, g=1e7 minimum %.6f", worst_pos, worst_val, last_min) +
               fmt(", %.3f s", elapsed));
}

void criterion_3() {
    double worst = 0.0;
    for (double g : {0.0, 1.0, 10.0, 1e3}) {
        const ValidatedConfig cfg = normalized_config(1e6, 1e4, 2.0, g);
        const double oracle = (1e4 + 0.5) / (1.0 + g);
        worst = std::max(worst, std::abs(temperature_report(cfg, false).theta_fb_quantum - oracle) / oracle);
        worst = std::max(worst, std::abs(classical_cold_damping_temp(cfg) - oracle) / oracle);
    }
    report(3, "classical limit Theta_m/(1+g)", worst < 1e-12, fmt("max relative error %.2e", worst));
}

void criterion_4() {
    std::mt19937_64 rng(2024);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const ValidatedConfig cfg = checks::random_config(rng);
        const Spectrum s = evaluate_spectrum(cfg, integration_grid(cfg), {SpectrumVariant::Simplified, true});
        const double t_int = equipartition_temperature(cfg, variance_by_integration(s).variance);
        // (hbar Omega_m / 2 kB)(2n + 1 + zeta/2 + g^2/2zeta)/(1+g)
        const double g = cfg.g_diss;
        const double oracle = 0.5 * (2.0 * cfg.n_theta + 1.0 + cfg.zeta / 2.0 + g * g / (2.0 * cfg.zeta)) / (1.0 + g);
        worst = std::max(worst, std::abs(t_int - oracle) / oracle);
    }
    std::string near_q;
    for (double frac : {0.5, 0.9, 0.99}) {
        const ValidatedConfig cfg = normalized_config(1e3, 10.0, 1.0, frac * 1e3);
        const Spectrum s = evaluate_spectrum(cfg, integration_grid(cfg), {SpectrumVariant::Simplified, true});
        const double dev = equipartition_temperature(cfg, variance_by_integration(s).variance) /
                               quantum_cold_damping_temp(cfg) - 1.0;
        near_q += fmt(" g=%.2gQ:%.1e", frac, dev);
    }
    report(4, "equipartition closure", worst < 1e-3,
           fmt("20 configs, max relative error %.2e; reported near Q:", worst) + near_q);
}

void criterion_5() {
    std::mt19937_64 rng(55);
    checks::RandomRanges ranges;
    ranges.squeezed_light = true;
    ranges.max_reactive_ratio = 10.0;
    const FrequencyGrid freqs = FrequencyGrid::logarithmic(1e-3, 1e3, 100);
    double worst = 0.0;
    int complex_count = 0;
    for (int i = 0; i < 50; ++i) {
        const ValidatedConfig cfg = checks::random_config(rng, ranges);
        complex_count += cfg.feedback.reactive() != 0.0;
        for (double w : freqs) {
            const ForceCoefficients c = feedback_force_coeffs(cfg, w);
            const double coefficient = -4.0 * std::imag(c.a1 * std::conj(c.a2));
            const double target = 2.0 * w * cfg.feedback.dissipative();
            const double scale = target != 0.0 ? target : w * cfg.oscillator.damping;
            worst = std::max(worst, std::abs(coefficient - target) / scale);
            worst = std::max(worst, verify_feedback_commutator(cfg, w).residual);
        }
    }
    report(5, "feedback noise commutator", worst < 1e-10 && complex_count > 0,
           fmt("max relative residual %.2e over 5000 points, %g configs with complex Z_fb", worst, complex_count));
}

void criterion_6() {
    std::mt19937_64 rng(66);
    checks::RandomRanges ranges;
    ranges.squeezed_light = true;
    ranges.max_reactive_ratio = 10.0;
    double lowest = std::numeric_limits<double>::infinity(), worst_formula = 0.0;
    int samples = 0;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    while (samples < 1000) {
        ValidatedConfig cfg = checks::random_config(rng, ranges);
        if (cfg.feedback.dissipative() == 0.0) continue;
        if (samples % 2 == 1) {
            // minimum-uncertainty light, which can sit on the floor
            const LightState pure = LightState::squeezed(3.0 * u(rng), std::numbers::pi * (u(rng) - 0.5));
            cfg = normalized_config(cfg.quality_factor, cfg.n_theta, cfg.zeta, cfg.g_diss,
                                    cfg.feedback.reactive() / cfg.oscillator.damping, pure, cfg.omega_cav);
        }
        ++samples;
        const double t = feedback_noise_temperature(cfg).normalized;
        lowest = std::min(lowest, t);
        worst_formula = std::max(worst_formula, std::abs(t - theta_in_oracle(cfg)) / theta_in_oracle(cfg));
    }
    double worst_line = 0.0, worst_prescription = 0.0;
    for (double g : {1e-2, 1.0, 37.0, 1e4, 1e7}) {
        const double t = feedback_noise_temperature(normalized_config(1e9, 0.0, g, g)).normalized;
        worst_line = std::max(worst_line, std::abs(t - 1.0));
    }
    std::mt19937_64 rng2(67);
    for (int i = 0; i < 200; ++i) {
        const ValidatedConfig cfg = checks::random_config(rng2, ranges);
        if (cfg.feedback.dissipative() == 0.0) continue;
        const SqueezingPrescription p = optimize_squeezing(cfg);
        const ValidatedConfig fed = normalized_config(cfg.quality_factor, cfg.n_theta, cfg.zeta, cfg.g_diss,
                                                      cfg.feedback.reactive() / cfg.oscillator.damping, p.light(),
                                                      cfg.omega_cav);
        worst_prescription = std::max(worst_prescription, std::abs(feedback_noise_temperature(fed).normalized - 1.0));
    }
    const bool ok = lowest >= 1.0 - 1e-12 && worst_formula < 1e-12 && worst_line <= 1e-12 && worst_prescription <= 1e-12;
    report(6, "Heisenberg floor", ok,
           fmt("lowest Theta_in/zero point %.15f over 1000 samples, zeta=g deviation %.1e, prescription deviation %.1e",
               lowest, worst_line, worst_prescription));
}

void criterion_7() {
    std::mt19937_64 rng(77);
    checks::RandomRanges ranges;
    ranges.max_reactive_ratio = 10.0;
    double worst_det = 0.0;
    for (int i = 0; i < 200; ++i) {
        const ValidatedConfig cfg = checks::random_config(rng, ranges);
        if (cfg.feedback.dissipative() == 0.0) continue;
        worst_det = std::max(worst_det, std::abs(optimize_squeezing(cfg).determinant() - 1.0));
    }

    // numeric scan of the phase-squeezed temperature, 1000 points per decade
    const double g = 1e3, n = 100.0;
    double worst_shift = 0.0;
    for (double xi : {0.5, 1.0, 2.0}) {
        const LightState light = LightState::phase_squeezed(xi);
        double best_zeta = 0.0, best = std::numeric_limits<double>::infinity();
        for (int k = 0; k <= 6000; ++k) {
            const double zeta = std::pow(10.0, k / 1000.0);
            const double t = cold_damping_temperature_normalized(n, g, zeta, light);
            if (t < best) {
                best = t;
                best_zeta = zeta;
            }
        }
        worst_shift = std::max(worst_shift, std::abs(std::log10(best_zeta / (std::exp(-xi) * g))));
    }

    double worst_45 = 0.0;
    for (double ratio : {0.3, 1.0, 4.0}) {
        const double gain = 5.0, mod = gain * std::hypot(1.0, ratio);
        const ValidatedConfig cfg = normalized_config(1e6, 0.0, mod, gain, gain * ratio);
        const SqueezingPrescription p = optimize_squeezing(cfg);
        const double expected = (std::hypot(1.0, ratio) - ratio);
        worst_45 = std::max(worst_45, std::abs(std::exp(-p.xi) - expected) / expected);
        worst_45 = std::max(worst_45, std::abs(std::abs(p.quadrature_angle) - std::numbers::pi / 4.0));
    }
    const bool ok = worst_det <= 1e-12 && worst_shift <= 1e-3 && worst_45 < 1e-12;
    report(7, "squeezing optimization", ok,
           fmt("max |det-1| %.1e, minimum shift error %.1e decades, 45 degree error %.1e", worst_det, worst_shift,
               worst_45));
}

void criterion_8() {
    std::mt19937_64 rng(88);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double lowest = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 1000; ++i) {
        const double q = std::pow(10.0, 3.0 + 6.0 * u(rng));
        const double n = std::pow(10.0, -3.0 + 8.0 * u(rng)) * (u(rng) < 0.1 ? 0.0 : 1.0);
        const double zeta = std::pow(10.0, -3.0 + 9.0 * u(rng));
        const double g = q * u(rng) * 0.999;
        const ValidatedConfig cfg = normalized_config(q, n, zeta, g);
        const double floor = 1.0 / (cfg.oscillator.damping * (1.0 + g));
        lowest = std::min(lowest, resonance_noise(cfg) / floor);
    }
    const double g = 1e5;
    const ValidatedConfig best = normalized_config(1e9, 0.0, g, g);
    const double attained = resonance_noise(best) * best.oscillator.damping * (1.0 + g);
    const bool ok = lowest >= 1.0 - 1e-12 && attained <= 1.1;
    report(8, "resonance noise floor", ok,
           fmt("lowest sigma/floor %.15f over 1000 configs, g=zeta=1e5 n=0 ratio %.15f", lowest, attained));
}

} // namespace

int main() {
    const std::vector<std::function<void()>> criteria{criterion_1, criterion_2, criterion_3, criterion_4,
                                                      criterion_5, criterion_6, criterion_7, criterion_8};
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        try {
            criteria[i]();
        } catch (const std::exception& e) {
            report(static_cast<int>(i + 1), "exception", false, e.what());
        }
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
