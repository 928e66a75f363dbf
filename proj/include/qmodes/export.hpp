#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "qmodes/process.hpp"

namespace qmodes {

// Resolved config plus its SHA-256, written into every artifact.
struct ArtifactStamp {
    std::string config_json;
    std::string config_sha256;
};

// Plain-text artifacts start with "# config_sha256: ..." and "# config: ..." lines.
std::string stamp_header(const ArtifactStamp& stamp);

// First row: axis_b frequencies (rad/s); first column: axis_a frequencies;
// body |value| (abs file) and arg(value) in rad (phase file).
void write_amplitude_csv(const SpectralAmplitude& amplitude, const std::filesystem::path& abs_path,
                         const std::filesystem::path& phase_path, const ArtifactStamp& stamp);

// Columns omega_rad_s,real,imag.
void write_mode_csv(const std::vector<double>& omega, const Eigen::VectorXcd& mode,
                    const std::filesystem::path& path, const ArtifactStamp& stamp);

// Generic numeric table with a header row.
void write_table_csv(const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows, const std::filesystem::path& path,
                     const ArtifactStamp& stamp);

// Binary PPM of |value| / max, signal along x, partner along y (high frequency
// on top), viridis colormap.
void write_heatmap_ppm(const SpectralAmplitude& amplitude, const std::filesystem::path& path);

std::array<std::uint8_t, 3> viridis(double t);

// Pretty-printed with sorted keys and a trailing newline; "config" and
// "config_sha256" are added from the stamp.
void write_json(nlohmann::json doc, const std::filesystem::path& path, const ArtifactStamp& stamp);

// Shortest round-trip decimal for a double.
std::string format_double(double x);

}  // namespace qmodes
