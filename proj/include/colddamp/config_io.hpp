#pragma once

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>

#include "json.hpp"

#include "colddamp/error.hpp"
#include "colddamp/model.hpp"

// JSON configuration. Unknown keys anywhere are rejected.
//
// {
//   "units": "si" | "normalized",
//   "oscillator": { "mass", "omega_m", "damping" | "quality_factor" },
//   "cavity":     { "gamma", "tau", "k0", "alpha0" } and/or { "zeta", "omega_cav" },
//   "feedback":   { "h_fb", "x_fb" } | { "gain", "reactive_gain" },
//   "light":      "coherent" | { "s11", "s22", "s12" } | { "xi", "angle" },
//   "bath":       { "temperature" | "n_theta", "white_noise" }
// }
//
// A reduced cavity without omega_cav is the wide-cavity limit.

namespace colddamp {

using json = nlohmann::json;

namespace detail {

inline void check_keys(const json& obj, std::string_view section, std::initializer_list<std::string_view> allowed) {
    require(obj.is_object(), ErrorCode::InvalidConfig, std::string(section) + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (std::string_view a : allowed) known = known || key == a;
        require(known, ErrorCode::InvalidConfig, "unknown key '" + key + "' in " + std::string(section));
    }
}

inline double number(const json& obj, const char* key, std::string_view section) {
    const json& v = obj.at(key);
    require(v.is_number(), ErrorCode::InvalidConfig,
            std::string(section) + "." + key + " must be a number");
    return v.get<double>();
}

inline std::optional<double> optional_number(const json& obj, const char* key, std::string_view section) {
    if (!obj.contains(key)) return std::nullopt;
    return number(obj, key, section);
}

inline bool has_any(const json& obj, std::initializer_list<const char*> keys) {
    for (const char* k : keys)
        if (obj.contains(k)) return true;
    return false;
}

inline bool has_all(const json& obj, std::initializer_list<const char*> keys) {
    for (const char* k : keys)
        if (!obj.contains(k)) return false;
    return true;
}

} // namespace detail

inline UnitMode parse_units(std::string_view text) {
    if (text == "si") return UnitMode::SI;
    if (text == "normalized") return UnitMode::Normalized;
    throw Error(ErrorCode::InvalidConfig, "units must be 'si' or 'normalized'");
}

inline Config parse_config(const json& root) {
    using namespace detail;
    check_keys(root, "config", {"units", "oscillator", "cavity", "feedback", "light", "bath"});
    Config cfg;

    if (root.contains("units")) {
        require(root["units"].is_string(), ErrorCode::InvalidConfig, "units must be a string");
        cfg.units = parse_units(root["units"].get<std::string>());
    } else {
        cfg.units = UnitMode::SI;
    }

    // oscillator
    const json osc = root.value("oscillator", json::object());
    check_keys(osc, "oscillator", {"mass", "omega_m", "damping", "quality_factor"});
    if (cfg.units == UnitMode::SI)
        require(has_all(osc, {"mass", "omega_m"}), ErrorCode::InvalidConfig,
                "oscillator.mass and oscillator.omega_m are required in SI units");
    cfg.oscillator.mass = optional_number(osc, "mass", "oscillator").value_or(1.0);
    cfg.oscillator.omega_m = optional_number(osc, "omega_m", "oscillator").value_or(1.0);
    require(osc.contains("damping") != osc.contains("quality_factor"), ErrorCode::InvalidConfig,
            "oscillator needs exactly one of damping, quality_factor");
    if (osc.contains("damping")) {
        cfg.oscillator.damping = number(osc, "damping", "oscillator");
    } else {
        const double q = number(osc, "quality_factor", "oscillator");
        require_positive(q, "oscillator quality_factor");
        cfg.oscillator.damping = cfg.oscillator.mass * cfg.oscillator.omega_m / q;
    }

    // cavity
    require(root.contains("cavity"), ErrorCode::InvalidConfig, "missing cavity section");
    const json& cav = root["cavity"];
    check_keys(cav, "cavity", {"gamma", "tau", "k0", "alpha0", "zeta", "omega_cav"});
    if (has_any(cav, {"gamma", "tau", "k0", "alpha0"})) {
        require(has_all(cav, {"gamma", "tau", "k0", "alpha0"}), ErrorCode::InvalidConfig,
                "physical cavity needs gamma, tau, k0 and alpha0");
        cfg.cavity.physical = PhysicalCavity{number(cav, "gamma", "cavity"), number(cav, "tau", "cavity"),
                                             number(cav, "k0", "cavity"), number(cav, "alpha0", "cavity")};
    }
    if (has_any(cav, {"zeta", "omega_cav"})) {
        require(cav.contains("zeta"), ErrorCode::InvalidConfig, "reduced cavity needs zeta");
        ReducedCavity r;
        r.zeta = number(cav, "zeta", "cavity");
        if (auto w = optional_number(cav, "omega_cav", "cavity")) r.omega_cav = *w;
        cfg.cavity.reduced = r;
    }

    // feedback
    const json fb = root.value("feedback", json::object());
    check_keys(fb, "feedback", {"h_fb", "x_fb", "gain", "reactive_gain"});
    const bool absolute = has_any(fb, {"h_fb", "x_fb"});
    const bool relative = has_any(fb, {"gain", "reactive_gain"});
    require(!(absolute && relative), ErrorCode::InvalidConfig,
            "feedback takes either h_fb/x_fb or gain/reactive_gain");
    if (relative) {
        const double h_m = cfg.oscillator.damping;
        cfg.feedback.impedance = complex(optional_number(fb, "gain", "feedback").value_or(0.0) * h_m,
                                         optional_number(fb, "reactive_gain", "feedback").value_or(0.0) * h_m);
    } else {
        cfg.feedback.impedance = complex(optional_number(fb, "h_fb", "feedback").value_or(0.0),
                                         optional_number(fb, "x_fb", "feedback").value_or(0.0));
    }

    // light
    if (root.contains("light")) {
        const json& l = root["light"];
        if (l.is_string()) {
            require(l.get<std::string>() == "coherent", ErrorCode::InvalidConfig,
                    "light must be \"coherent\" or an object");
            cfg.light = LightState::coherent();
        } else {
            check_keys(l, "light", {"s11", "s22", "s12", "xi", "angle"});
            const bool cov = has_any(l, {"s11", "s22", "s12"});
            const bool sq = has_any(l, {"xi", "angle"});
            require(!(cov && sq), ErrorCode::InvalidConfig, "light takes covariances or xi/angle, not both");
            if (sq) {
                cfg.light = LightState::squeezed(optional_number(l, "xi", "light").value_or(0.0),
                                                 optional_number(l, "angle", "light").value_or(0.0));
            } else {
                cfg.light.s11 = optional_number(l, "s11", "light").value_or(1.0);
                cfg.light.s22 = optional_number(l, "s22", "light").value_or(1.0);
                cfg.light.s12 = optional_number(l, "s12", "light").value_or(0.0);
            }
        }
    }

    // bath
    require(root.contains("bath"), ErrorCode::InvalidConfig, "missing bath section");
    const json& bath = root["bath"];
    check_keys(bath, "bath", {"temperature", "n_theta", "white_noise"});
    cfg.bath.temperature = optional_number(bath, "temperature", "bath");
    cfg.bath.n_theta = optional_number(bath, "n_theta", "bath");
    if (bath.contains("white_noise")) {
        require(bath["white_noise"].is_boolean(), ErrorCode::InvalidConfig, "bath.white_noise must be a boolean");
        cfg.bath.white_noise = bath["white_noise"].get<bool>();
    }
    return cfg;
}

inline Config parse_config_text(std::string_view text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("malformed JSON: ") + e.what());
    }
    return parse_config(root);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    detail::require(static_cast<bool>(in), ErrorCode::InvalidConfig, "cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Config load_config(const std::string& path) { return parse_config_text(read_text_file(path)); }

/// Canonical JSON form; key order is fixed so dumps are byte-stable.
inline json to_json(const Config& cfg) {
    json j;
    j["units"] = to_string(cfg.units);
    j["oscillator"] = {{"mass", cfg.oscillator.mass},
                       {"omega_m", cfg.oscillator.omega_m},
                       {"damping", cfg.oscillator.damping}};
    json cav = json::object();
    if (cfg.cavity.physical) {
        cav["gamma"] = cfg.cavity.physical->gamma;
        cav["tau"] = cfg.cavity.physical->tau;
        cav["k0"] = cfg.cavity.physical->k0;
        cav["alpha0"] = cfg.cavity.physical->alpha0;
    }
    if (cfg.cavity.reduced) {
        cav["zeta"] = cfg.cavity.reduced->zeta;
        if (std::isfinite(cfg.cavity.reduced->omega_cav)) cav["omega_cav"] = cfg.cavity.reduced->omega_cav;
    }
    j["cavity"] = cav;
    j["feedback"] = {{"h_fb", cfg.feedback.impedance.real()}, {"x_fb", cfg.feedback.impedance.imag()}};
    j["light"] = {{"s11", cfg.light.s11}, {"s22", cfg.light.s22}, {"s12", cfg.light.s12}};
    json bath = {{"white_noise", cfg.bath.white_noise}};
    if (cfg.bath.temperature) bath["temperature"] = *cfg.bath.temperature;
    if (cfg.bath.n_theta) bath["n_theta"] = *cfg.bath.n_theta;
    j["bath"] = bath;
    return j;
}

} // namespace colddamp
