#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>

#include "qmodes/config.hpp"
#include "qmodes/design.hpp"
#include "qmodes/errors.hpp"

using namespace qmodes;
namespace fs = std::filesystem;

namespace {

const char* kBase = R"({
  "process": {
    "kind": "SPA_PDC",
    "nl_type": "0",
    "length_mm": 2.0,
    "model": {"type": "constant", "constant_index": {"H": 2.0, "V": 2.0}},
    "fields": {
      "signal": {"polarization": "V", "wavelength_nm": 1560},
      "idler": {"polarization": "V", "wavelength_nm": 1560},
      "pump": {"polarization": "V"}
    }
  },
  "pump": {"width_nm": 5.0},
  "grid": {"n_signal": 64, "n_partner": 64}
})";

std::string replace(std::string s, const std::string& from, const std::string& to) {
    const auto at = s.find(from);
    EXPECT_NE(at, std::string::npos) << from;
    if (at != std::string::npos) s.replace(at, from.size(), to);
    return s;
}

RunConfig parse(const std::string& text) { return parse_run_config(text, "test.json", fs::current_path()); }

std::string error_of(const std::string& text) {
    try {
        parse(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(Config, ParsesAndDerivesMissingWavelength) {
    const RunConfig c = parse(kBase);
    ASSERT_TRUE(c.process.drive.wavelength_nm);
    EXPECT_NEAR(*c.process.drive.wavelength_nm, 780.0, 1e-9);
    EXPECT_EQ(c.process.kind, ProcessKind::SPA_PDC);
    EXPECT_EQ(c.grid.n_signal, 64u);
    EXPECT_EQ(c.pump.orders, (std::vector<int>{0, 1, 2}));
}

TEST(Config, DerivesSignalForSfg) {
    const std::string sps = R"({
      "process": {"kind": "SPS_SFG", "nl_type": "0", "length_mm": 1,
        "model": {"type": "constant", "constant_index": {"H": 2.0, "V": 2.0}},
        "fields": {"signal": {"polarization": "V"},
                   "gate": {"polarization": "V", "wavelength_nm": 780},
                   "upconverted": {"polarization": "V", "wavelength_nm": 520}}},
      "pump": {"width_nm": 5.0}})";
    const RunConfig c = parse(sps);
    EXPECT_NEAR(*c.process.signal.wavelength_nm, 1560.0, 1e-9);
}

TEST(Config, UnknownKeyNamesItsLine) {
    const std::string text = replace(kBase, "\"length_mm\": 2.0,", "\"length_mm\": 2.0,\n    \"lenght\": 3,");
    const std::string e = error_of(text);
    EXPECT_NE(e.find("test.json:6: process.lenght: unknown key"), std::string::npos) << e;
}

TEST(Config, MissingAndMistypedFields) {
    EXPECT_NE(error_of(replace(kBase, "\"pump\": {\"width_nm\": 5.0},", "")).find("missing required key 'pump'"),
              std::string::npos);
    EXPECT_NE(error_of(replace(kBase, "\"length_mm\": 2.0", "\"length_mm\": \"2\"")).find("process.length_mm"),
              std::string::npos);
    EXPECT_NE(error_of(replace(kBase, "\"length_mm\": 2.0", "\"length_mm\": -1")).find("process.length_mm"),
              std::string::npos);
    EXPECT_FALSE(error_of(replace(kBase, "\"n_signal\": 64", "\"n_signal\": 1")).empty());
    EXPECT_FALSE(error_of(replace(kBase, "\"polarization\": \"V\", \"wavelength_nm\": 1560}",
                                  "\"polarization\": \"X\", \"wavelength_nm\": 1560}"))
                     .empty());
}

TEST(Config, EnergyConservation) {
    const std::string text = replace(kBase, "\"pump\": {\"polarization\": \"V\"}",
                                     "\"pump\": {\"polarization\": \"V\", \"wavelength_nm\": 781}");
    EXPECT_NE(error_of(text).find("energy conservation"), std::string::npos);
    const std::string two = replace(kBase, "\"idler\": {\"polarization\": \"V\", \"wavelength_nm\": 1560}",
                                    "\"idler\": {\"polarization\": \"V\"}");
    EXPECT_NE(error_of(two).find("at most one field"), std::string::npos);
}

TEST(Config, MalformedJsonReportsLine) {
    const std::string text = replace(kBase, "\"length_mm\": 2.0,", "\"length_mm\": 2.0,,");
    const std::string e = error_of(text);
    EXPECT_NE(e.find("test.json:5: malformed JSON"), std::string::npos) << e;
}

TEST(Config, GaSectionValidated) {
    const std::string ga = replace(kBase, "\"grid\":",
                                   "\"ga\": {\"population\": 8, \"generations\": 2, \"genes\": ["
                                   "{\"name\": \"length_mm\", \"mean\": 2, \"sigma\": 0.5, \"min\": 0.5}]},\n  \"grid\":");
    const RunConfig c = parse(ga);
    ASSERT_TRUE(c.ga);
    EXPECT_EQ(c.ga->ga.population, 8);
    EXPECT_EQ(c.ga->ga.genome.at(0).name, "length_mm");
    EXPECT_FALSE(error_of(replace(ga, "\"population\": 8", "\"population\": 7")).empty());
    EXPECT_FALSE(error_of(replace(ga, "\"sigma\": 0.5", "\"sigma\": 0")).empty());
    EXPECT_FALSE(error_of(replace(ga, "\"min\": 0.5}", "\"min\": 0.5, \"max\": 0.2}")).empty());
    EXPECT_THROW(Design{parse(replace(ga, "\"name\": \"length_mm\"", "\"name\": \"colour\""))}, ConfigError);
}

TEST(Config, HashIsStableAndIgnoresOutputDirAndThreads) {
    const RunConfig a = parse(kBase);
    RunConfig b = parse(kBase);
    EXPECT_EQ(config_hash(a), config_hash(b));
    EXPECT_EQ(config_hash(a).size(), 64u);
    EXPECT_TRUE(std::regex_match(config_hash(a), std::regex("[0-9a-f]{64}")));
    b.output.dir = "elsewhere";
    b.grid.threads = 7;
    EXPECT_EQ(config_hash(a), config_hash(b));
    b.pump.width_nm = 5.5;
    EXPECT_NE(config_hash(a), config_hash(b));
    // Whitespace in the source does not matter.
    const RunConfig c = parse(replace(kBase, "\"pump\": {\"width_nm\": 5.0}", "\"pump\":{ \"width_nm\" : 5.0 }"));
    EXPECT_EQ(config_hash(a), config_hash(c));
}

TEST(Config, Sha256KnownVector) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Config, PathsResolveAgainstConfigDirectory) {
    RunConfig c = parse_run_config(kBase, "x.json", "/data/configs");
    EXPECT_EQ(resolve_path(c, "tables/a.csv"), fs::path("/data/configs/tables/a.csv"));
    EXPECT_EQ(resolve_path(c, "/abs/a.csv"), fs::path("/abs/a.csv"));
}

TEST(Config, LoadMissingFile) { EXPECT_THROW(load_run_config("/nonexistent/config.json"), ConfigError); }

TEST(Config, AllPresetsLoadAndBuild) {
    for (const char* name : {"metallic_spa_ktp", "metallic_sps_ktp", "tfln_spa", "tfln_sps"}) {
        const fs::path p = fs::path(QMODES_SOURCE_DIR) / "presets" / (std::string(name) + ".json");
        SCOPED_TRACE(name);
        const RunConfig c = load_run_config(p);
        EXPECT_NO_THROW(Design{c});
    }
}

TEST(Config, MissingTableFileIsConfigError) {
    const std::string text = replace(kBase, R"("model": {"type": "constant", "constant_index": {"H": 2.0, "V": 2.0}})",
                                     R"("model": {"type": "tables", "tables": {"TM": "no/such/table.csv"}})");
    const RunConfig c = parse(text);
    EXPECT_THROW(Design{c}, ConfigError);
}
