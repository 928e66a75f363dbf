#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qmodes/dispersion.hpp"
#include "qmodes/optimizer.hpp"
#include "qmodes/phasematch.hpp"
#include "qmodes/process.hpp"

namespace qmodes {

struct FieldConfig {
    std::string polarization;
    std::optional<double> wavelength_nm;  // one field may be left out and is derived
};

struct ModelConfig {
    std::string type;      // constant | bulk | metallic | tables | surrogate
    std::string material;  // KTP | LN (bulk, metallic)
    // H/V -> Sellmeier set name or .json path (bulk, metallic), or table label
    // (tables, surrogate). Defaults depend on material / model type.
    std::map<std::string, std::string> polarization_map;
    double width_um = 0.0;
    double height_um = 0.0;
    std::map<std::string, std::string> tables;  // label -> CSV path
    std::string surrogate;                      // manifest path
    GeometryPoint geometry;
    std::map<std::string, double> constant_index;  // H/V -> n
};

struct ProcessConfig {
    ProcessKind kind = ProcessKind::SPA_PDC;
    NonlinearType nl_type = NonlinearType::Type0;
    double length_mm = 0.0;
    std::optional<double> poling_period_um;
    ModelConfig model;
    FieldConfig signal;
    FieldConfig partner;  // idler (SPA) / upconverted (SPS)
    FieldConfig drive;    // pump (SPA) / gate (SPS)
};

struct PumpConfig {
    double width_nm = 0.0;
    int order = 0;
    std::vector<int> orders{0, 1, 2};
};

struct GridConfig {
    std::size_t n_signal = 512;
    std::size_t n_partner = 512;
    std::optional<std::array<double, 2>> signal_nm;
    std::optional<std::array<double, 2>> partner_nm;
    unsigned threads = 1;
};

struct InputConfig {
    std::vector<int> orders{0, 1, 2};
    std::vector<double> nbar{1.0, 1.0, 1.0};
    std::vector<double> xi;
    std::optional<double> width_nm;   // default: pump bandwidth carried to the signal
    std::optional<double> center_nm;  // default: signal centre
};

struct FilterConfig {
    FilterShape shape = FilterShape::Rect;
    std::optional<double> center_nm;  // default: partner centre
    double width_nm = 0.0;
    std::size_t first_bin = 0;
    std::size_t last_bin = 0;
};

struct OutputConfig {
    std::string dir = "out";
    bool heatmap = true;
    int modes = 3;
};

struct DispersionScanConfig {
    std::optional<double> from_nm;
    std::optional<double> to_nm;
    int points = 301;
};

struct GARunConfig {
    GAConfig ga;
    std::size_t fitness_grid = 256;
};

struct RunConfig {
    std::string source;
    std::filesystem::path base_dir;
    std::string notes;
    std::string reference_json;  // free-form reference values, echoed in reports
    ProcessConfig process;
    PumpConfig pump;
    GridConfig grid;
    InputConfig input_state;
    std::optional<FilterConfig> filter;
    std::optional<GARunConfig> ga;
    OutputConfig output;
    DispersionScanConfig dispersion_scan;
};

// Schema-validates before anything is computed: unknown keys, wrong types and
// missing fields raise ConfigError with "<source>:<line>: <path>: message".
RunConfig parse_run_config(const std::string& text, const std::string& source,
                           const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

// Fully resolved configuration (defaults filled in, paths as written), as
// canonical JSON text with sorted keys.
std::string resolved_config_json(const RunConfig& cfg);

std::string sha256_hex(const std::string& data);
std::string config_hash(const RunConfig& cfg);

std::filesystem::path resolve_path(const RunConfig& cfg, const std::string& path);

}  // namespace qmodes
