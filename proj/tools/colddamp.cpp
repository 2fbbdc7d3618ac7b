// colddamp: command-line front end for the cold-damping noise model.
//
// Exit codes: 0 success, 1 failed checks, 2 invalid configuration,
// 3 approximation-domain violation, 4 invariant failure in `limits`.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "colddamp/checks.hpp"
#include "colddamp/config_io.hpp"
#include "colddamp/csv.hpp"
#include "colddamp/figures.hpp"
#include "colddamp/grid.hpp"
#include "colddamp/model.hpp"
#include "colddamp/qlimits.hpp"
#include "colddamp/spectra.hpp"
#include "colddamp/thermo.hpp"

namespace {

using namespace colddamp;

constexpr const char* kToolVersion = "0.1.0";

struct Options {
    std::string config_path;
    std::string out_path;
    std::string units;
    std::string grid;
    std::string variant = "general";
    std::string figure;
    bool one_sided = false;
    std::uint64_t seed = 12345;

    bool flat = false;
    bool db = false;
    bool classical_limit = false;
    bool gnuplot_hint = false;
    std::string format = "text";
    std::string sweep_g;
    std::string sweep_zeta;
};

struct ExitError {
    int code;
    std::string message;
};

struct LoadedConfig {
    Config raw;
    ValidatedConfig cfg;
    std::string digest;
};

LoadedConfig load(const Options& o) {
    if (o.config_path.empty()) throw ExitError{2, "--config is required for this subcommand"};
    LoadedConfig out;
    out.raw = load_config(o.config_path);
    if (!o.units.empty()) out.raw.units = parse_units(o.units);
    out.cfg = validate_config(out.raw);
    out.digest = csv::hex64(csv::fnv1a(to_json(out.raw).dump()));
    for (const std::string& w : out.cfg.warnings) std::cerr << "warning: " << w << '\n';
    return out;
}

/// Header lines shared by every output file.
void manifest(csv::Writer& w, const std::string& subcommand, const std::string& config_digest,
              const std::vector<std::pair<std::string, std::string>>& flags, const Options& o) {
    std::string flag_text;
    for (const auto& [k, v] : flags) flag_text += (flag_text.empty() ? "" : " ") + k + "=" + v;
    const std::string manifest_text = subcommand + "|" + o.config_path + "|" + flag_text +
                                      "|" + config_digest;
    w.comment("colddamp " + subcommand + " tool_version=" + kToolVersion);
    w.comment("config=" + (o.config_path.empty() ? std::string("<builtin>") : o.config_path) +
              " config_digest=" + config_digest +
              " manifest_digest=" + csv::hex64(csv::fnv1a(manifest_text)));
    w.comment("flags: " + flag_text);
}

void emit(const Options& o, const std::string& text) {
    if (o.out_path.empty()) {
        std::cout << text;
    } else {
        csv::write_atomically(o.out_path, text);
    }
}

SpectrumVariant parse_variant(const std::string& v) {
    if (v == "free") return SpectrumVariant::Free;
    if (v == "simplified") return SpectrumVariant::Simplified;
    if (v == "general") return SpectrumVariant::General;
    throw ExitError{2, "unknown variant '" + v + "'"};
}

void gnuplot_hint(const Options& o, const std::string& x, const std::string& y, bool logx, bool logy) {
    std::ostream& os = o.out_path.empty() ? std::cerr : std::cout;
    const std::string file = o.out_path.empty() ? "colddamp.csv" : o.out_path;
    os << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << (logx ? "set logscale x\n" : "") << (logy ? "set logscale y\n" : "")
       << "set xlabel '" << x << "'\nset ylabel '" << y << "'\n"
       << "plot '" << file << "' using " << x << ":" << y << " with lines\n";
}

// ---------------------------------------------------------------- spectrum

int cmd_spectrum(const Options& o) {
    csv::Writer w;
    const std::string value_col = o.one_sided ? "sigma_vv_one_sided" : "sigma_vv";
    const double side_factor = o.one_sided ? 2.0 : 1.0;

    if (o.figure == "fig2") {
        const figures::SpectraScenario scenario;
        const auto curves = figures::velocity_spectra(scenario);
        manifest(w, "spectrum", csv::hex64(csv::fnv1a("preset:fig2")),
                 {{"figure", "fig2"}, {"variant", "simplified"}, {"flat", "true"},
                  {"one_sided", o.one_sided ? "true" : "false"}},
                 o);
        w.comment("preset: Q=1e6 n_theta=1e5 zeta=1 gains=0,10,1e2,1e3,1e4 (normalized units)");
        w.comment("db_reference: 10*log10(sigma_vv / (hbar*Omega_m/H_m))");
        for (const auto& c : curves) {
            const PeakShape p = peak_shape(c.spectrum);
            w.comment("curve " + c.label + " gain=" + csv::number(c.gain) + " peak=" + csv::number(p.value) +
                      " fwhm=" + csv::number(p.fwhm));
        }
        w.header({"curve", "gain", "omega", value_col, value_col + "_db"});
        for (const auto& c : curves) {
            const Spectrum& s = c.spectrum;
            for (std::size_t i = 0; i < s.values.size(); ++i) {
                const double v = side_factor * s.values[i];
                w.field(c.label).field(c.gain).field(s.grid[i]).field(v).field(10.0 * std::log10(v / s.meta.noise_unit));
                w.end_row();
            }
        }
        emit(o, w.str());
        if (o.gnuplot_hint) gnuplot_hint(o, "omega", value_col + "_db", false, false);
        return 0;
    }
    if (!o.figure.empty()) throw ExitError{2, "spectrum supports --figure fig2 only"};

    const LoadedConfig lc = load(o);
    const ValidatedConfig& cfg = lc.cfg;
    SpectrumOptions opt{parse_variant(o.variant), o.flat};
    FrequencyGrid grid;
    if (!o.grid.empty()) {
        grid = FrequencyGrid::parse(o.grid);
    } else {
        const double omega_m = cfg.oscillator.omega_m;
        const double width = (1.0 + cfg.g_diss) * cfg.oscillator.linewidth();
        grid = FrequencyGrid::adaptive(omega_m, std::min(width / 50.0, omega_m * 1e-3), 0.01, 0.5 * omega_m,
                                       1.5 * omega_m);
    }
    if (o.one_sided) {
        std::vector<double> pos;
        for (double x : grid)
            if (x > 0.0) pos.push_back(x);
        grid = FrequencyGrid(std::move(pos), grid.spacing());
    }
    const Spectrum s = evaluate_spectrum(cfg, grid, opt);

    manifest(w, "spectrum", lc.digest,
             {{"units", to_string(cfg.units)},
              {"variant", to_string(opt.variant)},
              {"flat", opt.flat ? "true" : "false"},
              {"grid", o.grid.empty() ? "default" : o.grid},
              {"one_sided", o.one_sided ? "true" : "false"},
              {"db", o.db ? "true" : "false"}},
             o);
    w.comment(std::string("white_noise=") + (s.meta.white_noise ? "true" : "false") +
              " noise_unit=" + csv::number(s.meta.noise_unit));
    if (o.db) w.comment("db_reference: 10*log10(sigma_vv / (hbar*Omega_m/H_m))");
    for (const std::string& n : s.meta.notes) w.comment("note: " + n);
    for (const std::string& n : cfg.warnings) w.comment("warning: " + n);
    if (o.db)
        w.header({"omega", value_col, value_col + "_db"});
    else
        w.header({"omega", value_col});
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        const double v = side_factor * s.values[i];
        w.field(s.grid[i]).field(v);
        if (o.db) w.field(10.0 * std::log10(v / s.meta.noise_unit));
        w.end_row();
    }
    emit(o, w.str());
    if (o.gnuplot_hint) gnuplot_hint(o, "omega", o.db ? value_col + "_db" : value_col, false, !o.db);
    return 0;
}

// ---------------------------------------------------------------- sweep

void sweep_rows(csv::Writer& w, const std::vector<SweepRow>& rows, const std::string& curve) {
    for (const SweepRow& r : rows) {
        if (!curve.empty()) w.field(curve);
        w.field(r.gain).field(r.zeta).field(r.theta_fb_normalized).field(r.n_theta_fb).field(r.is_optimum ? "1" : "0");
        w.end_row();
    }
}

int cmd_sweep(const Options& o) {
    csv::Writer w;
    if (o.figure == "fig3") {
        const figures::TemperatureScenario scenario;
        manifest(w, "sweep", csv::hex64(csv::fnv1a("preset:fig3")), {{"figure", "fig3"}}, o);
        w.comment("preset: n_theta=1e5 gains=10,1e3,1e5,1e7 zeta=1e-2..1e10 (100 points/decade)");
        w.comment("curve 'locus' holds the per-gain minima zeta = g");
        w.header({"curve", "g", "zeta", "theta_fb_normalized", "n_theta_fb", "is_optimum"});
        for (const auto& c : figures::temperature_curves(scenario)) sweep_rows(w, c.rows, c.label);
        sweep_rows(w, figures::optimum_locus(scenario), "locus");
        emit(o, w.str());
        if (o.gnuplot_hint) gnuplot_hint(o, "zeta", "theta_fb_normalized", true, true);
        return 0;
    }
    if (!o.figure.empty()) throw ExitError{2, "sweep supports --figure fig3 only"};

    const LoadedConfig lc = load(o);
    const ValidatedConfig& cfg = lc.cfg;
    detail::require_cold_damping(cfg);
    std::vector<double> gains{cfg.g_diss}, zetas{cfg.zeta};
    if (!o.sweep_g.empty()) {
        const FrequencyGrid g = FrequencyGrid::parse(o.sweep_g);
        gains.assign(g.begin(), g.end());
    }
    if (!o.sweep_zeta.empty()) {
        const FrequencyGrid z = FrequencyGrid::parse(o.sweep_zeta);
        zetas.assign(z.begin(), z.end());
    }
    const auto rows = temperature_sweep(cfg, gains, zetas);
    manifest(w, "sweep", lc.digest,
             {{"units", to_string(cfg.units)},
              {"sweep_g", o.sweep_g.empty() ? "config" : o.sweep_g},
              {"sweep_zeta", o.sweep_zeta.empty() ? "config" : o.sweep_zeta}},
             o);
    w.header({"g", "zeta", "theta_fb_normalized", "n_theta_fb", "is_optimum"});
    sweep_rows(w, rows, "");
    emit(o, w.str());
    if (o.gnuplot_hint) gnuplot_hint(o, "zeta", "theta_fb_normalized", true, true);
    return 0;
}

// ---------------------------------------------------------------- temperature

int cmd_temperature(const Options& o) {
    const LoadedConfig lc = load(o);
    const ValidatedConfig& cfg = lc.cfg;
    detail::require_cold_damping(cfg);

    std::vector<std::pair<std::string, double>> fields;
    std::vector<std::string> notes;
    const double zp = cfg.zero_point_temperature();
    auto temp = [&](const std::string& name, double theta) {
        fields.emplace_back(name, theta);
        fields.emplace_back(name + "_normalized", theta / zp);
    };
    temp("theta_m", cfg.theta_m);
    fields.emplace_back("n_theta", cfg.n_theta);
    fields.emplace_back("g", cfg.g_diss);
    fields.emplace_back("zeta", cfg.zeta);
    fields.emplace_back("quality_factor", cfg.quality_factor);
    temp("theta_fb_classical", classical_cold_damping_temp(cfg));

    if (cfg.g_diss < cfg.quality_factor) {
        const TemperatureReport r = temperature_report(cfg, !o.classical_limit);
        temp("theta_fb_quantum", r.theta_fb_quantum);
        fields.emplace_back("n_theta_fb", r.n_theta_fb);
        temp("theta_fb_optimal", r.theta_fb_optimal);
        fields.emplace_back("n_theta_fb_optimal", r.n_theta_fb_optimal);
        const Spectrum s = evaluate_spectrum(cfg, integration_grid(cfg), {SpectrumVariant::Simplified, true});
        temp("theta_fb_equipartition", equipartition_temperature(cfg, variance_by_integration(s).variance));
        if (r.classical_below_zero_point)
            notes.push_back("classical cold damping predicts a temperature below hbar*Omega_m/2kB");
        if (o.classical_limit) notes.push_back("light terms disabled (classical limit)");
    } else {
        notes.push_back("g >= Q: flat-spectrum formulas refused; band-limited integration of the general spectrum only");
        const Spectrum s = evaluate_spectrum(cfg, integration_grid(cfg), {SpectrumVariant::General, false});
        temp("theta_fb_band_limited", equipartition_temperature(cfg, variance_by_integration(s, {false, 50.0}).variance));
    }

    std::ostringstream text;
    if (o.format == "csv") {
        csv::Writer w;
        manifest(w, "temperature", lc.digest,
                 {{"units", to_string(cfg.units)}, {"classical_limit", o.classical_limit ? "true" : "false"}}, o);
        for (const std::string& n : notes) w.comment("note: " + n);
        w.header({"quantity", "value"});
        for (const auto& [k, v] : fields) {
            w.field(k).field(v);
            w.end_row();
        }
        emit(o, w.str());
    } else {
        text << "temperature report (" << to_string(cfg.units) << " units)\n";
        for (const auto& [k, v] : fields) text << "  " << k << " = " << csv::number(v) << '\n';
        for (const std::string& n : notes) text << "  note: " << n << '\n';
        emit(o, text.str());
    }
    return 0;
}

// ---------------------------------------------------------------- limits

int cmd_limits(const Options& o) {
    const LoadedConfig lc = load(o);
    const ValidatedConfig& cfg = lc.cfg;
    const FeedbackNoiseReport r = feedback_noise_report(cfg);
    const SqueezingPrescription p = optimize_squeezing(cfg);

    const bool commutator_ok = r.commutator.residual <= 1e-10;
    const bool heisenberg_ok = r.theta_in.is_limit || r.heisenberg_margin >= 1.0 - 1e-12;

    std::ostringstream t;
    t << "feedback noise limits at Omega_m (" << to_string(cfg.units) << " units)\n"
      << "  g_mod = |Z_fb|/H_m = " << csv::number(r.g_mod) << ", g_diss = H_fb/H_m = " << csv::number(r.g_diss) << '\n'
      << "  commutator: " << (commutator_ok ? "PASS" : "FAIL") << " coefficient=" << csv::number(r.commutator.coefficient)
      << " target=" << csv::number(r.commutator.target) << " residual=" << csv::number(r.commutator.residual) << '\n'
      << "  heisenberg: " << (heisenberg_ok ? "PASS" : "FAIL") << " margin=" << csv::number(r.heisenberg_margin) << '\n'
      << "  sigma_ff = " << csv::number(r.sigma_ff) << '\n';
    if (r.theta_in.is_limit)
        t << "  theta_fb_in: infinite (pure reactive feedback, H_fb = 0)\n";
    else
        t << "  theta_fb_in = " << csv::number(r.theta_in.theta) << " (normalized " << csv::number(r.theta_in.normalized)
          << ")\n";
    t << "  theta_fb (composed) = " << csv::number(composed_system_temperature(cfg)) << '\n';
    if (p.is_limit)
        t << "  squeezing: infinite squeezing required (limit only)\n";
    else
        t << "  squeezing: s11=" << csv::number(p.s11) << " s22=" << csv::number(p.s22) << " s12=" << csv::number(p.s12)
          << " xi=" << csv::number(p.xi) << " angle=" << csv::number(p.quadrature_angle) << " rad\n";
    std::cout << t.str();

    if (!o.out_path.empty()) {
        csv::Writer w;
        manifest(w, "limits", lc.digest, {{"units", to_string(cfg.units)}}, o);
        w.header({"quantity", "value"});
        auto row = [&](const char* k, double v) {
            w.field(k).field(v);
            w.end_row();
        };
        row("commutator_coefficient", r.commutator.coefficient);
        row("commutator_target", r.commutator.target);
        row("commutator_residual", r.commutator.residual);
        row("commutator_pass", commutator_ok ? 1.0 : 0.0);
        row("sigma_ff", r.sigma_ff);
        row("heisenberg_margin", r.heisenberg_margin);
        row("heisenberg_pass", heisenberg_ok ? 1.0 : 0.0);
        row("theta_fb_in", r.theta_in.theta);
        row("theta_fb_in_normalized", r.theta_in.normalized);
        row("g_mod", r.g_mod);
        row("g_diss", r.g_diss);
        row("squeezing_s11", p.s11);
        row("squeezing_s22", p.s22);
        row("squeezing_s12", p.s12);
        row("squeezing_xi", p.xi);
        row("squeezing_angle", p.quadrature_angle);
        row("squeezing_is_limit", p.is_limit ? 1.0 : 0.0);
        csv::write_atomically(o.out_path, w.str());
    }
    if (!commutator_ok || !heisenberg_ok) {
        std::cerr << "invariant failure: commutator or Heisenberg floor violated\n";
        return 4;
    }
    return 0;
}

// ---------------------------------------------------------------- check

std::vector<std::pair<std::string, ValidatedConfig>> default_check_configs() {
    std::vector<std::pair<std::string, ValidatedConfig>> out;
    out.emplace_back("cold-damping Q=1e6 n=1e5 zeta=1 g=100", normalized_config(1e6, 1e5, 1.0, 100.0));
    out.emplace_back("complex Z_fb=(1+2i)H_m, squeezed light",
                     normalized_config(1e6, 10.0, 3.0, 1.0, 2.0, LightState::squeezed(0.7, 0.3), 50.0));
    Config si;
    si.units = UnitMode::SI;
    si.oscillator = Oscillator::from_quality_factor(1e-3, 2.0 * 3.141592653589793 * 1e6, 1e6);
    si.cavity.physical = PhysicalCavity{1e-5, 2e-9, 2.0 * 3.141592653589793 / 1.064e-6, 1e5};
    si.feedback = Feedback::cold_damping(50.0 * si.oscillator.damping);
    si.bath.temperature = 300.0;
    out.emplace_back("SI 1 MHz mirror at 300 K, physical cavity", validate_config(si));
    return out;
}

int cmd_check(const Options& o) {
    std::vector<std::pair<std::string, ValidatedConfig>> configs;
    if (!o.config_path.empty()) {
        configs.emplace_back(o.config_path, load(o).cfg);
    } else {
        configs = default_check_configs();
    }
    std::ostringstream t;
    int failures = 0;
    std::vector<std::string> failing;
    for (const auto& [name, cfg] : configs) {
        t << "== " << name << " (seed " << o.seed << ")\n";
        for (const auto& r : checks::run_all(cfg, o.seed)) {
            t << checks::to_string(r.status) << "  " << r.name;
            if (r.status != checks::Status::Skipped)
                t << "  residual=" << csv::number(r.residual) << " tol=" << csv::number(r.tolerance);
            if (!r.detail.empty()) t << "  (" << r.detail << ")";
            t << '\n';
            if (r.status == checks::Status::Fail) {
                ++failures;
                failing.push_back(name + ": " + r.name);
            }
        }
    }
    t << (failures == 0 ? "all checks passed\n" : std::to_string(failures) + " check(s) failed:\n");
    for (const std::string& f : failing) t << "  " << f << '\n';
    emit(o, t.str());
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum and thermal noise of a cold-damped mirror in a high-finesse cavity"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);
    app.fallthrough();

    Options o;
    app.add_option("--config", o.config_path, "JSON configuration file")->envname("COLDDAMP_CONFIG");
    app.add_option("--out", o.out_path, "output path (default: stdout)")->envname("COLDDAMP_OUT");
    app.add_option("--units", o.units, "override config units")
        ->check(CLI::IsMember({"si", "normalized"}))
        ->envname("COLDDAMP_UNITS");
    app.add_option("--grid", o.grid, "frequency grid START:STOP:POINTS:lin|log")->envname("COLDDAMP_GRID");
    app.add_option("--variant", o.variant, "spectrum variant")
        ->check(CLI::IsMember({"free", "simplified", "general"}))
        ->envname("COLDDAMP_VARIANT");
    app.add_option("--figure", o.figure, "reference scenario preset")
        ->check(CLI::IsMember({"fig2", "fig3"}))
        ->envname("COLDDAMP_FIGURE");
    app.add_flag("--one-sided", o.one_sided, "one-sided spectrum (x2, Omega > 0)")->envname("COLDDAMP_ONE_SIDED");
    app.add_option("--seed", o.seed, "seed for randomized checks")->envname("COLDDAMP_SEED");
    app.add_flag("--flat", o.flat, "simplified variant: evaluate measurement noise at Omega_m")->envname("COLDDAMP_FLAT");
    app.add_flag("--db", o.db, "add a dB column")->envname("COLDDAMP_DB");
    app.add_flag("--classical-limit", o.classical_limit, "drop the light noise terms")
        ->envname("COLDDAMP_CLASSICAL_LIMIT");
    app.add_flag("--gnuplot-hint", o.gnuplot_hint, "print a gnuplot script for the output")
        ->envname("COLDDAMP_GNUPLOT_HINT");
    app.add_option("--format", o.format, "report format")
        ->check(CLI::IsMember({"text", "csv"}))
        ->envname("COLDDAMP_FORMAT");
    app.add_option("--sweep-g", o.sweep_g, "gain range START:STOP:POINTS:lin|log")->envname("COLDDAMP_SWEEP_G");
    app.add_option("--sweep-zeta", o.sweep_zeta, "zeta range START:STOP:POINTS:lin|log")
        ->envname("COLDDAMP_SWEEP_ZETA");

    auto* spectrum = app.add_subcommand("spectrum", "velocity noise spectrum as CSV");
    auto* sweep = app.add_subcommand("sweep", "effective temperature over (g, zeta)");
    auto* temperature = app.add_subcommand("temperature", "single-point temperature report");
    auto* limits = app.add_subcommand("limits", "feedback noise commutator, Heisenberg margin, squeezing");
    auto* check = app.add_subcommand("check", "run the invariant suite");
    for (auto* sub : {spectrum, sweep, temperature, limits, check}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help and --version exit 0; every usage error is a configuration error
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (spectrum->parsed()) return cmd_spectrum(o);
        if (sweep->parsed()) return cmd_sweep(o);
        if (temperature->parsed()) return cmd_temperature(o);
        if (limits->parsed()) return cmd_limits(o);
        if (check->parsed()) return cmd_check(o);
    } catch (const ExitError& e) {
        std::cerr << "error: " << e.message << '\n';
        return e.code;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return is_domain_error(e.code()) ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
