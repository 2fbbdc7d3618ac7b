#pragma once

#include <cmath>
#include <complex>

#include "colddamp/error.hpp"
#include "colddamp/model.hpp"

// Frequency responses use the a[Omega] = Int a(t) exp(+i Omega t) dt convention,
// so a time derivative is -i Omega.

namespace colddamp {

/// Z_m = M (-i Omega + Omega_m^2 / (-i Omega)) + H_m
inline complex mech_impedance(const Oscillator& osc, double omega) {
    detail::require_nonzero_frequency(omega);
    const complex minus_i_omega(0.0, -omega);
    return osc.mass * (minus_i_omega + osc.omega_m * osc.omega_m / minus_i_omega) + osc.damping;
}

/// Z = Z_m + Z_fb
inline complex total_impedance(const Oscillator& osc, const Feedback& fb, double omega) {
    return mech_impedance(osc, omega) + fb.at(omega);
}

inline complex total_impedance(const ValidatedConfig& cfg, double omega) {
    return total_impedance(cfg.oscillator, cfg.feedback, omega);
}

/// 1 / (1 + (Omega / Omega_cav)^2): back-action coefficient relative to its DC value.
inline double cavity_filter(double omega_cav, double omega) noexcept {
    const double x = omega / omega_cav;
    return 1.0 / (1.0 + x * x);
}

inline double cavity_filter(const ValidatedConfig& cfg, double omega) noexcept {
    return cavity_filter(cfg.omega_cav, omega);
}

/// Coefficient of a2_in in (V_est - V):
///   -i Omega (gamma + i Omega tau) / (2 sqrt(2 gamma) kappa)
/// written as -i Omega (1 + i Omega/Omega_cav) / (2 sqrt2 kappa/sqrt(gamma)),
/// which only needs the reduced cavity parameters.
inline complex velocity_estimator_noise_coeff(const ValidatedConfig& cfg, double omega) {
    const complex filter(1.0, omega / cfg.omega_cav);
    return complex(0.0, -omega) * filter / (2.0 * std::sqrt(2.0) * cfg.kappa_over_sqrt_gamma);
}

/// Coefficients of the feedback noise force F_fb_in = a1 * a1_in + a2 * a2_in.
struct ForceCoefficients {
    complex a1;  // radiation-pressure back action
    complex a2;  // measurement noise fed back through Z_fb
};

inline ForceCoefficients feedback_force_coeffs(const ValidatedConfig& cfg, double omega) {
    detail::require_nonzero_frequency(omega);
    // sqrt(2 gamma) hbar kappa / (gamma - i Omega tau)
    const complex back_action = std::sqrt(2.0) * cfg.constants.hbar * cfg.kappa_over_sqrt_gamma /
                                complex(1.0, -omega / cfg.omega_cav);
    // i Omega (gamma + i Omega tau) Z_fb / (2 sqrt(2 gamma) kappa)
    const complex measurement = -velocity_estimator_noise_coeff(cfg, omega) * cfg.feedback.at(omega);
    return {back_action, measurement};
}

} // namespace colddamp
