#pragma once

#include <filesystem>
#include <string>

#include "qmodes/dispersion.hpp"

namespace qmodes {

// Directory holding bundled data (sellmeier/*.json). QMODES_DATA_DIR in the
// environment overrides the compiled-in default.
std::filesystem::path data_directory();

// JSON: {name, form, coefficients[], valid_range_um[2], provenance}
SellmeierSet load_sellmeier_json(const std::filesystem::path& path);
SellmeierSet parse_sellmeier_json(const std::string& text, const std::string& source = "<string>");

// Looks up data_directory()/sellmeier/<name>.json.
SellmeierSet bundled_sellmeier(const std::string& name);

// CSV with header omega_rad_s,n_eff. Comment lines
//   # polarization: <label>
//   # provenance: <text>
// carry metadata; other comments are ignored.
DispersionTable load_dispersion_table_csv(const std::filesystem::path& path,
                                          const std::string& fallback_label = {});
void write_dispersion_table_csv(const DispersionTable& table, const std::filesystem::path& path);

// Manifest JSON:
// {axes: [{name, unit, values[]}], polarizations: [..], provenance,
//  nodes: [{coords: [..], tables: {pol: "file.csv"}}]}
// Table paths are relative to the manifest's directory.
GeometrySurrogate load_geometry_surrogate(const std::filesystem::path& manifest);
void write_geometry_surrogate(const GeometrySurrogate& surrogate,
                              const std::filesystem::path& directory);

}  // namespace qmodes
