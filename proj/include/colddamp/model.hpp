#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "colddamp/error.hpp"

namespace colddamp {

using complex = std::complex<double>;

enum class UnitMode { SI, Normalized };

inline const char* to_string(UnitMode mode) noexcept {
    return mode == UnitMode::SI ? "si" : "normalized";
}

struct Constants {
    double hbar;  // J s
    double kB;    // J/K

    static constexpr Constants si() noexcept { return {1.054571817e-34, 1.380649e-23}; }
    static constexpr Constants normalized() noexcept { return {1.0, 1.0}; }
    static constexpr Constants for_mode(UnitMode mode) noexcept {
        return mode == UnitMode::SI ? si() : normalized();
    }
};

/// Single-mode mechanical oscillator with viscous damping.
struct Oscillator {
    double mass = 1.0;     // kg
    double omega_m = 1.0;  // rad/s
    double damping = 1.0;  // H_m, kg/s

    double quality_factor() const noexcept { return mass * omega_m / damping; }
    /// Full width of the free velocity resonance, rad/s.
    double linewidth() const noexcept { return damping / mass; }

    static Oscillator from_quality_factor(double mass, double omega_m, double q) {
        detail::require_positive(q, "quality factor");
        return {mass, omega_m, mass * omega_m / q};
    }
};

/// Cavity described by its optical parameters.
struct PhysicalCavity {
    double gamma = 0.0;   // amplitude damping per round trip
    double tau = 0.0;     // round-trip time, s
    double k0 = 0.0;      // wavevector, 1/m
    double alpha0 = 0.0;  // mean intracavity amplitude

    double kappa() const noexcept { return 2.0 * k0 * alpha0; }
    double bandwidth() const noexcept { return gamma / tau; }
};

/// Cavity described only by the combinations the noise spectra depend on.
/// An infinite bandwidth is the wide-cavity limit.
struct ReducedCavity {
    double zeta = 0.0;
    double omega_cav = std::numeric_limits<double>::infinity();
};

struct Cavity {
    std::optional<PhysicalCavity> physical;
    std::optional<ReducedCavity> reduced;
};

/// Servo impedance, constant over frequency. For negative frequencies the
/// hermitian extension conj(Z_fb) is used so that time-domain responses
/// stay real.
struct Feedback {
    complex impedance{0.0, 0.0};

    double dissipative() const noexcept { return impedance.real(); }
    double reactive() const noexcept { return impedance.imag(); }
    bool is_cold_damping() const noexcept { return impedance.imag() == 0.0; }

    complex at(double omega) const noexcept {
        return omega < 0.0 ? std::conj(impedance) : impedance;
    }

    static Feedback cold_damping(double h_fb) noexcept { return {complex(h_fb, 0.0)}; }
};

/// Symmetrized covariances of the incident quadratures (a1 amplitude, a2 phase).
struct LightState {
    double s11 = 1.0;
    double s22 = 1.0;
    double s12 = 0.0;

    double determinant() const noexcept { return s11 * s22 - s12 * s12; }
    bool is_coherent() const noexcept { return s11 == 1.0 && s22 == 1.0 && s12 == 0.0; }

    static constexpr LightState coherent() noexcept { return {1.0, 1.0, 0.0}; }
    /// Phase quadrature squeezed by exp(-xi), amplitude anti-squeezed.
    static LightState phase_squeezed(double xi) noexcept {
        return {std::exp(xi), std::exp(-xi), 0.0};
    }
    /// Minimum-uncertainty state whose squeezed quadrature sits at `angle`
    /// from the amplitude quadrature, with variance exp(-xi).
    static LightState squeezed(double xi, double angle) noexcept {
        const double c = std::cos(angle), s = std::sin(angle);
        const double lo = std::exp(-xi), hi = std::exp(xi);
        return {lo * c * c + hi * s * s, lo * s * s + hi * c * c, (lo - hi) * c * s};
    }
};

/// Mechanical bath. Either the temperature or the phonon number may be given.
struct Bath {
    std::optional<double> temperature;  // T_m, K
    std::optional<double> n_theta;
    bool white_noise = true;
};

struct Config {
    UnitMode units = UnitMode::Normalized;
    Oscillator oscillator;
    Cavity cavity;
    Feedback feedback;
    LightState light;
    Bath bath;
};

/// Bose occupation of the oscillator mode at bath temperature T_m.
inline double thermal_phonons(double temperature, double omega_m, const Constants& c) {
    if (!(temperature >= 0.0))
        throw Error(ErrorCode::NonPositiveParameter, "bath temperature must be >= 0");
    if (temperature == 0.0) return 0.0;
    return 1.0 / std::expm1(c.hbar * omega_m / (c.kB * temperature));
}

inline double thermal_phonons(const Bath& bath, const Oscillator& osc, const Constants& c) {
    if (bath.n_theta) return *bath.n_theta;
    return thermal_phonons(bath.temperature.value_or(0.0), osc.omega_m, c);
}

/// Inverse of thermal_phonons.
inline double bath_temperature(double n_theta, double omega_m, const Constants& c) {
    if (!(n_theta >= 0.0))
        throw Error(ErrorCode::NonPositiveParameter, "n_theta must be >= 0");
    if (n_theta == 0.0) return 0.0;
    return c.hbar * omega_m / (c.kB * std::log1p(1.0 / n_theta));
}

/// zeta = 4 hbar kappa^2 / (gamma Omega_m H_m)
inline double optomechanical_parameter(const PhysicalCavity& cav, const Oscillator& osc,
                                       const Constants& c) noexcept {
    const double kappa = cav.kappa();
    return 4.0 * c.hbar * kappa * kappa / (cav.gamma * osc.omega_m * osc.damping);
}

inline ReducedCavity to_reduced(const PhysicalCavity& cav, const Oscillator& osc,
                                const Constants& c) noexcept {
    return {optomechanical_parameter(cav, osc, c), cav.bandwidth()};
}

/// Picks the physical cavity with the given gamma and k0 that reproduces the
/// reduced parameters. (k0, alpha0) only enter through their product.
inline PhysicalCavity to_physical(const ReducedCavity& red, const Oscillator& osc,
                                  const Constants& c, double gamma, double k0) {
    detail::require_positive(gamma, "gamma");
    detail::require_positive(k0, "k0");
    detail::require(gamma < 1.0, ErrorCode::GammaOutOfRange, "gamma must be < 1");
    const double kappa = std::sqrt(red.zeta * gamma * osc.omega_m * osc.damping / (4.0 * c.hbar));
    return {gamma, gamma / red.omega_cav, k0, kappa / (2.0 * k0)};
}

/// Fully derived, immutable configuration.
struct ValidatedConfig {
    UnitMode units = UnitMode::Normalized;
    Constants constants = Constants::normalized();
    Oscillator oscillator;
    Feedback feedback;
    LightState light;
    std::optional<PhysicalCavity> physical_cavity;

    double zeta = 0.0;
    double omega_cav = std::numeric_limits<double>::infinity();
    // kappa / sqrt(gamma); the only way kappa and gamma enter the coefficients
    double kappa_over_sqrt_gamma = 0.0;

    double quality_factor = 0.0;
    double g_diss = 0.0;  // H_fb / H_m
    double g_mod = 0.0;   // |Z_fb| / H_m
    double n_theta = 0.0;
    double bath_temperature = 0.0;  // T_m
    double theta_m = 0.0;           // effective oscillator temperature
    bool white_noise = true;

    std::vector<std::string> warnings;

    double hbar_omega_m() const noexcept { return constants.hbar * oscillator.omega_m; }
    /// hbar Omega_m / (2 kB), the zero-point effective temperature.
    double zero_point_temperature() const noexcept {
        return hbar_omega_m() / (2.0 * constants.kB);
    }
    /// hbar Omega_m / H_m, the free zero-temperature velocity noise at resonance.
    double noise_unit() const noexcept { return hbar_omega_m() / oscillator.damping; }

    double kappa() const {
        if (!physical_cavity)
            throw Error(ErrorCode::NeedsPhysicalCavity, "kappa requires the physical cavity form");
        return physical_cavity->kappa();
    }
    double gamma() const {
        if (!physical_cavity)
            throw Error(ErrorCode::NeedsPhysicalCavity, "gamma requires the physical cavity form");
        return physical_cavity->gamma;
    }
};

namespace detail {

inline bool close_rel(double a, double b, double rel) noexcept {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

} // namespace detail

inline ValidatedConfig validate_config(const Config& cfg) {
    ValidatedConfig out;
    out.units = cfg.units;
    out.constants = Constants::for_mode(cfg.units);
    const Constants& c = out.constants;

    const Oscillator& osc = cfg.oscillator;
    detail::require_positive(osc.mass, "oscillator mass");
    detail::require_positive(osc.omega_m, "oscillator omega_m");
    detail::require_positive(osc.damping, "oscillator damping");
    if (cfg.units == UnitMode::Normalized) {
        detail::require(osc.mass == 1.0 && osc.omega_m == 1.0, ErrorCode::InvalidConfig,
                        "normalized units fix mass = omega_m = 1");
    }
    out.oscillator = osc;
    out.quality_factor = osc.quality_factor();
    if (out.quality_factor < 100.0)
        out.warnings.push_back("quality factor " + std::to_string(out.quality_factor) +
                               " < 100: narrow-resonance approximations are poor");

    // cavity
    detail::require(cfg.cavity.physical || cfg.cavity.reduced, ErrorCode::InvalidConfig,
                    "cavity needs either the physical or the reduced form");
    if (cfg.cavity.physical) {
        const PhysicalCavity& p = *cfg.cavity.physical;
        detail::require_positive(p.gamma, "cavity gamma");
        detail::require(p.gamma < 1.0, ErrorCode::GammaOutOfRange, "cavity gamma must be < 1");
        detail::require_positive(p.tau, "cavity tau");
        detail::require_positive(p.k0, "cavity k0");
        detail::require_positive(p.alpha0, "cavity alpha0");
        const ReducedCavity derived = to_reduced(p, osc, c);
        if (cfg.cavity.reduced) {
            detail::require(detail::close_rel(derived.zeta, cfg.cavity.reduced->zeta, 1e-9) &&
                                detail::close_rel(derived.omega_cav,
                                                  cfg.cavity.reduced->omega_cav, 1e-9),
                            ErrorCode::InconsistentParameterization,
                            "physical and reduced cavity forms disagree");
        }
        out.physical_cavity = p;
        out.zeta = derived.zeta;
        out.omega_cav = derived.omega_cav;
        out.kappa_over_sqrt_gamma = p.kappa() / std::sqrt(p.gamma);
    } else {
        const ReducedCavity& r = *cfg.cavity.reduced;
        detail::require_positive(r.zeta, "cavity zeta");
        detail::require_positive(r.omega_cav, "cavity omega_cav");
        out.zeta = r.zeta;
        out.omega_cav = r.omega_cav;
        out.kappa_over_sqrt_gamma = std::sqrt(r.zeta * osc.omega_m * osc.damping / (4.0 * c.hbar));
    }

    // feedback
    const Feedback& fb = cfg.feedback;
    detail::require(std::isfinite(fb.impedance.real()) && std::isfinite(fb.impedance.imag()),
                    ErrorCode::InvalidConfig, "feedback impedance must be finite");
    detail::require(fb.dissipative() >= 0.0, ErrorCode::AntiDamping,
                    "feedback dissipative part H_fb must be >= 0");
    out.feedback = fb;
    out.g_diss = fb.dissipative() / osc.damping;
    out.g_mod = std::abs(fb.impedance) / osc.damping;

    // light
    const LightState& l = cfg.light;
    detail::require_positive(l.s11, "light s11");
    detail::require_positive(l.s22, "light s22");
    // tolerate rounding in states built from (xi, angle)
    detail::require(l.determinant() >= 1.0 - 1e-12, ErrorCode::UncertaintyViolation,
                    "s11*s22 - s12^2 = " + std::to_string(l.determinant()) + " < 1");
    out.light = l;

    // bath
    const Bath& b = cfg.bath;
    detail::require(b.temperature || b.n_theta, ErrorCode::InvalidConfig,
                    "bath needs a temperature or n_theta");
    if (b.temperature) {
        detail::require(*b.temperature >= 0.0, ErrorCode::NonPositiveParameter,
                        "bath temperature must be >= 0");
    }
    if (b.n_theta) {
        detail::require(*b.n_theta >= 0.0, ErrorCode::NonPositiveParameter,
                        "n_theta must be >= 0");
        out.n_theta = *b.n_theta;
        out.bath_temperature = bath_temperature(out.n_theta, osc.omega_m, c);
        if (b.temperature) {
            const double n_from_t = thermal_phonons(*b.temperature, osc.omega_m, c);
            detail::require(detail::close_rel(n_from_t, out.n_theta, 1e-9),
                            ErrorCode::InconsistentParameterization,
                            "bath temperature and n_theta disagree");
        }
    } else {
        out.bath_temperature = *b.temperature;
        out.n_theta = thermal_phonons(out.bath_temperature, osc.omega_m, c);
    }
    out.theta_m = out.hbar_omega_m() * (out.n_theta + 0.5) / c.kB;
    out.white_noise = b.white_noise;
    return out;
}

inline ValidatedConfig validate_config(const Oscillator& osc, const Cavity& cav,
                                       const Feedback& fb, const LightState& light,
                                       const Bath& bath, UnitMode units = UnitMode::SI) {
    return validate_config(Config{units, osc, cav, fb, light, bath});
}

/// Normalized-unit configuration from the dimensionless scenario parameters
/// (quality factor, thermal phonons, zeta, dissipative gain).
inline ValidatedConfig normalized_config(double q, double n_theta, double zeta, double gain,
                                         double reactive_gain = 0.0,
                                         LightState light = LightState::coherent(),
                                         double omega_cav = std::numeric_limits<double>::infinity()) {
    Config cfg;
    cfg.units = UnitMode::Normalized;
    cfg.oscillator = Oscillator::from_quality_factor(1.0, 1.0, q);
    cfg.cavity.reduced = ReducedCavity{zeta, omega_cav};
    const double h_m = cfg.oscillator.damping;
    cfg.feedback.impedance = complex(gain * h_m, reactive_gain * h_m);
    cfg.light = light;
    cfg.bath.n_theta = n_theta;
    return validate_config(cfg);
}

/// FNV-1a digest of every derived quantity; stable for identical inputs.
inline std::uint64_t digest(const ValidatedConfig& cfg) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](double v) {
        unsigned char bytes[sizeof(double)];
        std::memcpy(bytes, &v, sizeof v);
        for (unsigned char b : bytes) {
            h ^= b;
            h *= 0x100000001b3ULL;
        }
    };
    mix(cfg.units == UnitMode::SI ? 1.0 : 0.0);
    mix(cfg.oscillator.mass);
    mix(cfg.oscillator.omega_m);
    mix(cfg.oscillator.damping);
    mix(cfg.zeta);
    mix(cfg.omega_cav);
    mix(cfg.kappa_over_sqrt_gamma);
    mix(cfg.feedback.impedance.real());
    mix(cfg.feedback.impedance.imag());
    mix(cfg.light.s11);
    mix(cfg.light.s22);
    mix(cfg.light.s12);
    mix(cfg.n_theta);
    mix(cfg.white_noise ? 1.0 : 0.0);
    return h;
}

} // namespace colddamp
