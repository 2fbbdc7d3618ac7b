#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "colddamp/config_io.hpp"
#include "colddamp/csv.hpp"

using namespace colddamp;

namespace {

ErrorCode code_of(const std::string& text) {
    try {
        validate_config(parse_config_text(text));
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "accepted: " << text;
    return ErrorCode::InvalidConfig;
}

const char* kNormalized = R"({
  "units": "normalized",
  "oscillator": {"quality_factor": 1e6},
  "cavity": {"zeta": 100},
  "feedback": {"gain": 100},
  "bath": {"n_theta": 1e5}
})";

} // namespace

TEST(ConfigIo, NormalizedScenario) {
    const ValidatedConfig v = validate_config(parse_config_text(kNormalized));
    EXPECT_EQ(v.units, UnitMode::Normalized);
    EXPECT_DOUBLE_EQ(v.g_diss, 100.0);
    EXPECT_DOUBLE_EQ(v.zeta, 100.0);
    EXPECT_DOUBLE_EQ(v.n_theta, 1e5);
    EXPECT_TRUE(v.light.is_coherent());
}

TEST(ConfigIo, SiWithPhysicalCavity) {
    const Config c = parse_config_text(R"({
      "oscillator": {"mass": 1e-3, "omega_m": 1e6, "damping": 1e-3},
      "cavity": {"gamma": 1e-5, "tau": 1e-9, "k0": 6e6, "alpha0": 1e4},
      "feedback": {"h_fb": 2e-3, "x_fb": -1e-3},
      "light": {"xi": 0.5, "angle": 0.2},
      "bath": {"temperature": 4.2, "white_noise": false}
    })");
    EXPECT_EQ(c.units, UnitMode::SI);
    const ValidatedConfig v = validate_config(c);
    EXPECT_DOUBLE_EQ(v.g_diss, 2.0);
    EXPECT_DOUBLE_EQ(v.omega_cav, 1e4);
    EXPECT_FALSE(v.white_noise);
    EXPECT_NEAR(v.light.determinant(), 1.0, 1e-12);
}

TEST(ConfigIo, Rejections) {
    EXPECT_EQ(code_of(R"({"units": "normalized", "oscillator": {"quality_factor": 1e6}, "cavity": {"zeta": 1},
                          "bath": {"n_theta": 1}, "extra": 1})"),
              ErrorCode::InvalidConfig);
    EXPECT_EQ(code_of(R"({"units": "normalized", "oscillator": {"quality_factor": 1e6}, "cavity": {"zeta": 1},
                          "feedback": {"gain": -1}, "bath": {"n_theta": 1}})"),
              ErrorCode::AntiDamping);
    EXPECT_EQ(code_of(R"({"units": "normalized", "oscillator": {"quality_factor": 1e6}, "cavity": {"zeta": 1},
                          "light": {"s11": 0.5, "s22": 1.0}, "bath": {"n_theta": 1}})"),
              ErrorCode::UncertaintyViolation);
    EXPECT_EQ(code_of(R"({"oscillator": {"quality_factor": 1e6}, "cavity": {"zeta": 1}, "bath": {"n_theta": 1}})"),
              ErrorCode::InvalidConfig);
    EXPECT_EQ(code_of(R"({"units": "normalized", "oscillator": {"quality_factor": 1e6, "damping": 1e-6},
                          "cavity": {"zeta": 1}, "bath": {"n_theta": 1}})"),
              ErrorCode::InvalidConfig);
    EXPECT_EQ(code_of(R"({"units": "normalized", "oscillator": {"quality_factor": 1e6}, "cavity": {"zeta": 1},
                          "feedback": {"gain": 1, "h_fb": 1}, "bath": {"n_theta": 1}})"),
              ErrorCode::InvalidConfig);
    EXPECT_EQ(code_of("{not json"), ErrorCode::InvalidConfig);
}

TEST(ConfigIo, CanonicalJsonRoundTrip) {
    const Config c = parse_config_text(kNormalized);
    const Config back = parse_config(to_json(c));
    EXPECT_EQ(to_json(back).dump(), to_json(c).dump());
    EXPECT_EQ(digest(validate_config(back)), digest(validate_config(c)));
}

TEST(Csv, NumberRoundTrips) {
    for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300}) EXPECT_EQ(std::stod(csv::number(v)), v);
    EXPECT_EQ(csv::number(0.5), "0.5");
}

TEST(Csv, WriterLayout) {
    csv::Writer w;
    w.comment("digest=abc");
    w.header({"omega", "sigma_vv"});
    w.field(1.0).field(0.25);
    w.end_row();
    EXPECT_EQ(w.str(), "# digest=abc\nomega,sigma_vv\n1,0.25\n");
}

TEST(Csv, AtomicWriteLeavesNoTemp) {
    const auto dir = std::filesystem::temp_directory_path() / "colddamp_csv_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "out.csv";
    csv::write_atomically(path, "a\n");
    csv::write_atomically(path, "b\n");
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "b");
    EXPECT_FALSE(std::filesystem::exists(dir / "out.csv.tmp"));
    std::filesystem::remove_all(dir);
}
