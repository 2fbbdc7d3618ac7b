#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "colddamp/spectra.hpp"

using namespace colddamp;

namespace {

double bisect(auto&& f, double lo, double hi) {
    double flo = f(lo);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST(FreeSpectrum, ResonanceValueWhiteBath) {
    const ValidatedConfig cfg = normalized_config(1e5, 7.0, 1.0, 0.0);
    // (2n+1) hbar Omega_m / H_m
    EXPECT_NEAR(free_spectrum(cfg, 1.0), 15.0 * 1e5, 1e-9 * 15e5);
}

TEST(FreeSpectrum, ExactBathIsCothWeighted) {
    Config c;
    c.units = UnitMode::Normalized;
    c.oscillator = Oscillator::from_quality_factor(1.0, 1.0, 100.0);
    c.cavity.reduced = ReducedCavity{1.0};
    c.bath.temperature = 2.0;
    c.bath.white_noise = false;
    const ValidatedConfig cfg = validate_config(c);
    for (double w : {0.2, 1.0, 5.0}) {
        const double force = w * cfg.oscillator.damping / std::tanh(w / (2.0 * 2.0));
        EXPECT_NEAR(thermal_force_spectrum(cfg, w), force, 1e-13 * force);
        EXPECT_EQ(thermal_force_spectrum(cfg, -w), thermal_force_spectrum(cfg, w));
    }
}

TEST(FreeSpectrum, ZeroTemperatureIsVacuum) {
    Config c;
    c.units = UnitMode::Normalized;
    c.oscillator = Oscillator::from_quality_factor(1.0, 1.0, 100.0);
    c.cavity.reduced = ReducedCavity{1.0};
    c.bath.temperature = 0.0;
    c.bath.white_noise = false;
    const ValidatedConfig cfg = validate_config(c);
    EXPECT_DOUBLE_EQ(thermal_force_spectrum(cfg, 3.0), 3.0 * cfg.oscillator.damping);
}

TEST(ResonanceNoise, OptimalLineValue) {
    // n = 0, zeta = g = 100: (1 + 50 + 50) / 101^2 = 1/101
    const ValidatedConfig cfg = normalized_config(1e6, 0.0, 100.0, 100.0);
    EXPECT_NEAR(resonance_noise(cfg) / cfg.noise_unit(), 1.0 / 101.0, 1e-15);
}

TEST(ResonanceNoise, MatchesSimplifiedAndGeneralAtResonance) {
    const ValidatedConfig cfg = normalized_config(1e6, 1e3, 2.0, 30.0);
    const double s = resonance_noise(cfg);
    EXPECT_NEAR(feedback_spectrum_simplified(cfg, 1.0), s, 1e-12 * s);
    EXPECT_NEAR(feedback_spectrum_general(cfg, 1.0), s, 1e-12 * s);
}

TEST(Simplified, FlatSpectrumIsExactLorentzian) {
    const ValidatedConfig cfg = normalized_config(1e6, 1e5, 1.0, 10.0);
    const double peak = feedback_spectrum_simplified(cfg, 1.0);
    auto f = [&](double w) { return feedback_spectrum_simplified(cfg, w) - 0.5 * peak; };
    const double lo = bisect(f, 0.99, 1.0);
    const double hi = bisect(f, 1.0, 1.01);
    EXPECT_NEAR((hi - lo) / (11.0 * cfg.oscillator.linewidth()), 1.0, 1e-9);
}

TEST(Simplified, UnflattenedEqualsGeneralInWideCavity) {
    const ValidatedConfig cfg = normalized_config(1e4, 20.0, 0.5, 8.0);
    for (double w : {0.1, 0.9, 1.0, 1.3, 20.0}) {
        const double a = feedback_spectrum_simplified(cfg, w, false);
        EXPECT_NEAR(feedback_spectrum_general(cfg, w), a, 1e-12 * a) << w;
    }
}

TEST(Simplified, Preconditions) {
    EXPECT_THROW(
        {
            try {
                feedback_spectrum_simplified(normalized_config(1e4, 1.0, 1.0, 1.0, 0.5), 1.0);
            } catch (const Error& e) {
                EXPECT_EQ(e.code(), ErrorCode::ReactiveFeedbackNotAllowed);
                throw;
            }
        },
        Error);
    const ValidatedConfig over = normalized_config(100.0, 1.0, 1.0, 200.0);
    try {
        feedback_spectrum_simplified(over, 1.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::GainExceedsQ);
    }
    EXPECT_NO_THROW(feedback_spectrum_simplified(over, 1.0, false));
}

TEST(General, FiniteCavityFiltersBackActionAndBoostsMeasurement) {
    const double omega_cav = 3.0;
    const ValidatedConfig cfg = normalized_config(1e4, 2.0, 5.0, 4.0, 0.0, LightState::coherent(), omega_cav);
    const double w = 2.0;
    const double h = cfg.oscillator.damping;
    const double x2 = (w / omega_cav) * (w / omega_cav);
    // force terms in units of hbar Omega_m H_m with Omega_m = hbar = 1
    const double thermal = h * 5.0;
    const double back_action = 0.5 * 5.0 * h / (1.0 + x2);
    const double measurement = w * w * (1.0 + x2) * 16.0 * h / (2.0 * 5.0);
    const double z2 = std::norm(complex(5.0 * h, -w + 1.0 / w));
    const double expected = (thermal + back_action + measurement) / z2;
    EXPECT_NEAR(feedback_spectrum_general(cfg, w), expected, 1e-12 * expected);
}

TEST(General, CorrelationTermFollowsReactivePart) {
    const LightState light = LightState::squeezed(0.8, 0.4);
    const ValidatedConfig plus = normalized_config(1e4, 0.0, 1.0, 1.0, 3.0, light);
    const ValidatedConfig minus = normalized_config(1e4, 0.0, 1.0, 1.0, -3.0, light);
    const double w = 1.0;
    const double h = plus.oscillator.damping;
    // |Z|^2 sigma differs only by -hbar Omega Im(Z_fb) s12
    const double diff = feedback_spectrum_general(plus, w) * std::norm(total_impedance(plus, w)) -
                        feedback_spectrum_general(minus, w) * std::norm(total_impedance(minus, w));
    EXPECT_NEAR(diff, -2.0 * 3.0 * h * light.s12, 1e-12 * std::abs(6.0 * h * light.s12));
}

TEST(General, EvenAndPositive) {
    const ValidatedConfig cfg = normalized_config(1e3, 0.5, 2.0, 1.5, -0.7, LightState::squeezed(1.2, -0.3), 4.0);
    for (double w : {0.01, 0.5, 1.0, 2.5, 100.0}) {
        const double s = feedback_spectrum_general(cfg, w);
        EXPECT_GT(s, 0.0);
        EXPECT_NEAR(feedback_spectrum_general(cfg, -w), s, 1e-13 * s);
    }
}

TEST(OptimalResonanceGain, IsStationaryPoint) {
    const double n = 50.0, zeta = 0.3;
    const ValidatedConfig base = normalized_config(1e12, n, zeta, 0.0);
    auto noise = [&](double g) { return resonance_noise(normalized_config(1e12, n, zeta, g)); };
    const double g_star = optimal_resonance_gain(n, zeta);
    // derivative vanishes: central difference relative to the value
    const double dg = 1e-4 * g_star;
    const double slope = (noise(g_star + dg) - noise(g_star - dg)) / (2.0 * dg) * g_star / noise(g_star);
    EXPECT_LT(std::abs(slope), 1e-6);
    EXPECT_LT(noise(g_star), noise(0.5 * g_star));
    EXPECT_LT(noise(g_star), noise(2.0 * g_star));
    (void)base;
}

TEST(PeakShape, AnalyticLorentzian) {
    std::vector<double> w, v;
    for (int i = -2000; i <= 2000; ++i) {
        const double x = 3.0 + 1e-3 * i;
        w.push_back(x);
        v.push_back(1.0 / (1.0 + std::pow((x - 3.0) / 0.1, 2)));
    }
    const PeakShape p = peak_shape(w, v);
    EXPECT_DOUBLE_EQ(p.omega, 3.0);
    EXPECT_DOUBLE_EQ(p.value, 1.0);
    EXPECT_NEAR(p.fwhm, 0.2, 1e-5);
}

TEST(PeakShape, CrossingOutsideGrid) {
    const std::vector<double> w{1.0, 2.0, 3.0}, v{0.9, 1.0, 0.8};
    EXPECT_EQ(peak_shape(w, v).fwhm, 0.0);
}

TEST(EvaluateSpectrum, MetadataAndNotes) {
    const ValidatedConfig cfg = normalized_config(1e4, 1.0, 1.0, 2.0, 0.0, LightState::coherent(), 5.0);
    const Spectrum s = evaluate_spectrum(cfg, FrequencyGrid::linear(0.5, 1.5, 11), {SpectrumVariant::Simplified, true});
    EXPECT_EQ(s.values.size(), 11u);
    EXPECT_EQ(s.meta.notes.size(), 1u);
    EXPECT_DOUBLE_EQ(s.meta.noise_unit, 1e4);
    EXPECT_NEAR(s.db(5), 10.0 * std::log10(s.values[5] / 1e4), 1e-12);
}

TEST(ResonanceNoise, UncooledCurveHasLightTerms) {
    const ValidatedConfig cfg = normalized_config(1e6, 1e5, 1.0, 0.0);
    EXPECT_NEAR(resonance_noise(cfg) / cfg.noise_unit(), 2e5 + 1.5, 1e-9);
}

TEST(PeakShape, PeakTimesWidthInvariant) {
    // peak * FWHM = (hbar Omega_m / M) * sum / (1 + g), so dividing by sum / (1+g) leaves a constant
    const double n = 1e3, zeta = 2.0;
    double first = 0.0;
    for (double g : {0.0, 10.0, 100.0, 1000.0}) {
        const ValidatedConfig cfg = normalized_config(1e6, n, zeta, g);
        const double width = (1.0 + g) * cfg.oscillator.linewidth();
        const Spectrum s = evaluate_spectrum(cfg, FrequencyGrid::adaptive(1.0, width / 200.0, 0.002, 0.5, 1.5),
                                             {SpectrumVariant::Simplified, true});
        const PeakShape p = peak_shape(s);
        const double scaled = p.value * p.fwhm * (1.0 + g) / detail::resonance_noise_sum(cfg);
        if (first == 0.0) first = scaled;
        EXPECT_NEAR(scaled / first, 1.0, 1e-2) << g;
    }
}
