#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "colddamp/error.hpp"
#include "colddamp/model.hpp"
#include "colddamp/response.hpp"

// Quantum limits of a linear feedback force. Here the gain is the modulus
// g = |Z_fb| / H_m; the dissipative gain H_fb / H_m is carried alongside.

namespace colddamp {

struct CommutatorCheck {
    double coefficient = 0.0;  // c in [F(Omega), F(Omega')] = 2 pi delta(Omega + Omega') c
    double target = 0.0;       // 2 hbar Omega H_fb
    double residual = 0.0;     // relative to target (to hbar |Omega| H_m when target is 0)
};

/// Commutator of F_fb_in = c1 a1_in + c2 a2_in from its coefficients.
/// With [a1[W], a2[W']] = 2i * 2pi delta(W + W') and c(-W) = conj(c(W)),
/// [F, F] reduces to -4 Im(c1 conj(c2)). Independent of the light state.
inline CommutatorCheck verify_feedback_commutator(const ValidatedConfig& cfg, double omega) {
    const ForceCoefficients c = feedback_force_coeffs(cfg, omega);
    CommutatorCheck out;
    out.coefficient = -4.0 * std::imag(c.a1 * std::conj(c.a2));
    out.target = 2.0 * cfg.constants.hbar * omega * cfg.feedback.dissipative();
    const double scale = out.target != 0.0
                             ? std::abs(out.target)
                             : cfg.constants.hbar * std::abs(omega) * cfg.oscillator.damping;
    out.residual = std::abs(out.coefficient - out.target) / scale;
    return out;
}

/// Symmetrized spectrum of F_fb_in at omega, using the full cavity response.
inline double feedback_force_spectrum(const ValidatedConfig& cfg, double omega) {
    const ForceCoefficients c = feedback_force_coeffs(cfg, omega);
    const LightState& l = cfg.light;
    return std::norm(c.a1) * l.s11 + std::norm(c.a2) * l.s22 +
           2.0 * std::real(c.a1 * std::conj(c.a2)) * l.s12;
}

struct FeedbackNoiseTemperature {
    double theta = 0.0;       // kelvin in SI mode; +inf in the pure-reactive limit
    double normalized = 0.0;  // theta / (hbar Omega_m / 2 kB)
    bool is_limit = false;    // H_fb = 0: only reachable as a limit
};

/// kB Theta_fb_in = (hbar Omega_m / 2) [ (|Z_fb|/H_fb)(zeta/2g s11 + g/2zeta s22)
///                                       - (Im Z_fb / H_fb) s12 ],  g = |Z_fb| / H_m
/// in the wide-cavity limit.
inline FeedbackNoiseTemperature feedback_noise_temperature(const ValidatedConfig& cfg) {
    FeedbackNoiseTemperature out;
    const double h_fb = cfg.feedback.dissipative();
    if (h_fb == 0.0) {
        out.theta = out.normalized = std::numeric_limits<double>::infinity();
        out.is_limit = true;
        return out;
    }
    const double modulus = std::abs(cfg.feedback.impedance);
    const double g = cfg.g_mod;
    const double zeta = cfg.zeta;
    const LightState& l = cfg.light;
    out.normalized = modulus / h_fb * (zeta / (2.0 * g) * l.s11 + g / (2.0 * zeta) * l.s22) -
                     cfg.feedback.reactive() / h_fb * l.s12;
    out.theta = out.normalized * cfg.zero_point_temperature();
    return out;
}

/// Theta_fb = (H_m Theta_m + H_fb Theta_fb_in) / (H_m + H_fb)
inline double composed_system_temperature(const ValidatedConfig& cfg) {
    const double h_m = cfg.oscillator.damping;
    const double h_fb = cfg.feedback.dissipative();
    if (h_fb == 0.0) {
        // H_fb Theta_fb_in stays finite: it is half the force spectrum over kB
        const double zeta = cfg.zeta;
        const double modulus2 = std::norm(cfg.feedback.impedance);
        const double sigma_ff = cfg.hbar_omega_m() * (h_m * zeta / 2.0 * cfg.light.s11 +
                                                      modulus2 / (2.0 * zeta * h_m) * cfg.light.s22 -
                                                      cfg.feedback.reactive() * cfg.light.s12);
        return cfg.theta_m + sigma_ff / (2.0 * cfg.constants.kB * h_m);
    }
    const double theta_in = feedback_noise_temperature(cfg).theta;
    return (h_m * cfg.theta_m + h_fb * theta_in) / (h_m + h_fb);
}

struct SqueezingPrescription {
    double s11 = 1.0;
    double s22 = 1.0;
    double s12 = 0.0;
    double xi = 0.0;                // squeezed variance is exp(-xi)
    double quadrature_angle = 0.0;  // squeezed quadrature, from the amplitude quadrature, in (-pi/2, pi/2]
    bool is_limit = false;          // pure reactive feedback needs infinite squeezing

    LightState light() const noexcept { return {s11, s22, s12}; }
    double determinant() const noexcept { return s11 * s22 - s12 * s12; }
};

/// Incident covariances that bring the feedback noise temperature down to
/// hbar Omega_m / 2 kB for the configured zeta and Z_fb.
inline SqueezingPrescription optimize_squeezing(const ValidatedConfig& cfg) {
    SqueezingPrescription p;
    const double h_fb = cfg.feedback.dissipative();
    const double x_fb = cfg.feedback.reactive();
    if (h_fb == 0.0) {
        const double inf = std::numeric_limits<double>::infinity();
        p.s11 = p.s22 = inf;
        p.s12 = x_fb >= 0.0 ? inf : -inf;
        p.xi = inf;
        p.quadrature_angle = x_fb >= 0.0 ? -std::numbers::pi / 4.0 : std::numbers::pi / 4.0;
        p.is_limit = true;
        return p;
    }
    const double ratio = std::abs(cfg.feedback.impedance) / h_fb;
    const double g_over_zeta = cfg.g_mod / cfg.zeta;
    p.s11 = g_over_zeta * ratio;
    p.s22 = ratio / g_over_zeta;
    p.s12 = x_fb / h_fb;

    // eigenvalues exp(+-xi) of the unit-determinant covariance matrix
    const double half_trace = 0.5 * (p.s11 + p.s22);
    p.xi = std::acosh(std::max(half_trace, 1.0));
    double angle = 0.5 * std::atan2(2.0 * p.s12, p.s11 - p.s22) + std::numbers::pi / 2.0;
    if (angle > std::numbers::pi / 2.0) angle -= std::numbers::pi;
    p.quadrature_angle = angle;
    return p;
}

/// Coefficients of m_out = mech * m_in + force * F_fb_in.
struct OutputTransform {
    complex mech;
    complex force;
};

inline OutputTransform output_field_transform(const ValidatedConfig& cfg, double omega) {
    const complex z = total_impedance(cfg, omega);
    const double h_m = cfg.oscillator.damping;
    return {(z - 2.0 * h_m) / z, std::sqrt(2.0 * h_m / (cfg.constants.hbar * std::abs(omega))) / z};
}

/// Commutator coefficient of m_out, built from the transform and the numeric
/// F_fb_in commutator; unitarity requires sign(Omega).
inline double output_commutator(const ValidatedConfig& cfg, double omega) {
    const OutputTransform t = output_field_transform(cfg, omega);
    const double sign = omega > 0.0 ? 1.0 : -1.0;
    return std::norm(t.mech) * sign + std::norm(t.force) * verify_feedback_commutator(cfg, omega).coefficient;
}

struct FeedbackNoiseReport {
    CommutatorCheck commutator;  // at Omega_m
    double sigma_ff = 0.0;       // force spectrum at Omega_m, full cavity response
    FeedbackNoiseTemperature theta_in;
    double heisenberg_margin = 0.0;  // sigma_ff / (hbar Omega_m H_fb)
    double g_mod = 0.0;
    double g_diss = 0.0;
};

inline FeedbackNoiseReport feedback_noise_report(const ValidatedConfig& cfg) {
    FeedbackNoiseReport r;
    const double omega_m = cfg.oscillator.omega_m;
    r.commutator = verify_feedback_commutator(cfg, omega_m);
    r.sigma_ff = feedback_force_spectrum(cfg, omega_m);
    r.theta_in = feedback_noise_temperature(cfg);
    const double h_fb = cfg.feedback.dissipative();
    r.heisenberg_margin = h_fb > 0.0 ? r.sigma_ff / (cfg.hbar_omega_m() * h_fb)
                                     : std::numeric_limits<double>::infinity();
    r.g_mod = cfg.g_mod;
    r.g_diss = cfg.g_diss;
    return r;
}

} // namespace colddamp
