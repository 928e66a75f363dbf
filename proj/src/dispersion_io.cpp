#include "qmodes/dispersion_io.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "qmodes/errors.hpp"

namespace qmodes {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

json parse_json(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(source + ": " + e.what());
    }
}

std::string trim(std::string s) {
    const char* ws = " \t\r\n";
    s.erase(0, s.find_first_not_of(ws));
    const auto end = s.find_last_not_of(ws);
    s.erase(end == std::string::npos ? 0 : end + 1);
    return s;
}

SellmeierSet sellmeier_from_json(const json& j, const std::string& source) {
    static const char* const kKeys[] = {"name", "form", "coefficients", "valid_range_um",
                                        "provenance"};
    if (!j.is_object()) throw ConfigError(source + ": Sellmeier file must hold an object");
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* k : kKeys) known = known || key == k;
        if (!known) throw ConfigError(source + ": unknown key '" + key + "'");
    }
    SellmeierSet s;
    try {
        s.name = j.at("name").get<std::string>();
        s.form = sellmeier_form_from_string(j.at("form").get<std::string>());
        s.coefficients = j.at("coefficients").get<std::vector<double>>();
        const auto range = j.at("valid_range_um").get<std::vector<double>>();
        if (range.size() != 2) throw ConfigError(source + ": valid_range_um needs two entries");
        s.min_um = range[0];
        s.max_um = range[1];
        s.provenance = j.value("provenance", std::string{});
    } catch (const json::exception& e) {
        throw ConfigError(source + ": " + e.what());
    }
    validate(s);
    return s;
}

}  // namespace

fs::path data_directory() {
    if (const char* env = std::getenv("QMODES_DATA_DIR"); env && *env) return fs::path(env);
    return fs::path(QMODES_DATA_DIR);
}

SellmeierSet parse_sellmeier_json(const std::string& text, const std::string& source) {
    return sellmeier_from_json(parse_json(text, source), source);
}

SellmeierSet load_sellmeier_json(const fs::path& path) {
    return parse_sellmeier_json(read_file(path), path.string());
}

SellmeierSet bundled_sellmeier(const std::string& name) {
    const fs::path p = data_directory() / "sellmeier" / (name + ".json");
    if (!fs::exists(p)) throw ConfigError("no bundled Sellmeier set '" + name + "' (" + p.string() + ")");
    return load_sellmeier_json(p);
}

DispersionTable load_dispersion_table_csv(const fs::path& path, const std::string& fallback_label) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open dispersion table '" + path.string() + "'");
    std::string label = fallback_label, provenance, line;
    std::vector<DispersionSample> samples;
    bool header = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string body = trim(line.substr(1));
            const auto colon = body.find(':');
            if (colon != std::string::npos) {
                const std::string key = trim(body.substr(0, colon));
                const std::string value = trim(body.substr(colon + 1));
                if (key == "polarization") label = value;
                else if (key == "provenance") provenance = value;
            }
            continue;
        }
        if (!header) {
            if (line != "omega_rad_s,n_eff")
                throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                                  ": expected header 'omega_rad_s,n_eff'");
            header = true;
            continue;
        }
        const auto comma = line.find(',');
        try {
            if (comma == std::string::npos) throw std::invalid_argument("missing comma");
            std::size_t used = 0;
            const std::string a = trim(line.substr(0, comma)), b = trim(line.substr(comma + 1));
            const double omega = std::stod(a, &used);
            if (used != a.size()) throw std::invalid_argument("trailing text");
            const double n = std::stod(b, &used);
            if (used != b.size()) throw std::invalid_argument("trailing text");
            samples.push_back({omega, n});
        } catch (const std::exception&) {
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": malformed row '" +
                              line + "'");
        }
    }
    if (!header) throw ConfigError(path.string() + ": missing header 'omega_rad_s,n_eff'");
    if (label.empty()) label = path.stem().string();
    try {
        return DispersionTable(std::move(samples), label, provenance);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void write_dispersion_table_csv(const DispersionTable& table, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << "# polarization: " << table.polarization_label() << "\n";
    if (!table.provenance().empty()) out << "# provenance: " << table.provenance() << "\n";
    out << "omega_rad_s,n_eff\n";
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto& s : table.samples()) out << s.omega << "," << s.n_eff << "\n";
}

GeometrySurrogate load_geometry_surrogate(const fs::path& manifest) {
    const std::string source = manifest.string();
    const json j = parse_json(read_file(manifest), source);
    const fs::path base = manifest.parent_path();
    try {
        std::vector<GeometryAxis> axes;
        for (const auto& a : j.at("axes")) {
            axes.push_back({a.at("name").get<std::string>(), a.value("unit", std::string{}),
                            a.at("values").get<std::vector<double>>()});
        }
        std::size_t count = 1;
        for (const auto& a : axes) count *= a.values.size();
        std::vector<std::string> pols = j.at("polarizations").get<std::vector<std::string>>();
        std::vector<std::map<std::string, DispersionTable>> nodes(count);
        std::vector<bool> seen(count, false);
        for (const auto& n : j.at("nodes")) {
            const auto coords = n.at("coords").get<std::vector<double>>();
            if (coords.size() != axes.size())
                throw ConfigError(source + ": node coords rank does not match axes");
            std::size_t flat = 0;
            for (std::size_t a = 0; a < axes.size(); ++a) {
                const auto& v = axes[a].values;
                std::size_t hit = v.size();
                for (std::size_t i = 0; i < v.size(); ++i)
                    if (std::abs(v[i] - coords[a]) <= 1e-9 * std::max(1.0, std::abs(v[i]))) hit = i;
                if (hit == v.size())
                    throw ConfigError(source + ": node coordinate " + std::to_string(coords[a]) +
                                      " is not on axis '" + axes[a].name + "'");
                flat = flat * v.size() + hit;
            }
            if (seen[flat]) throw ConfigError(source + ": duplicate node");
            seen[flat] = true;
            for (const auto& pol : pols) {
                const auto file = n.at("tables").at(pol).get<std::string>();
                nodes[flat].emplace(pol, load_dispersion_table_csv(base / file, pol));
            }
        }
        for (std::size_t k = 0; k < count; ++k)
            if (!seen[k])
                throw ConfigError(source + ": grid node " + std::to_string(k) + " is not populated");
        return GeometrySurrogate(std::move(axes), std::move(nodes),
                                 j.value("provenance", std::string{}));
    } catch (const json::exception& e) {
        throw ConfigError(source + ": " + e.what());
    }
}

void write_geometry_surrogate(const GeometrySurrogate& surrogate, const fs::path& directory) {
    fs::create_directories(directory);
    json j;
    j["provenance"] = surrogate.provenance();
    j["polarizations"] = surrogate.polarizations();
    json axes = json::array();
    for (const auto& a : surrogate.axes())
        axes.push_back({{"name", a.name}, {"unit", a.unit}, {"values", a.values}});
    j["axes"] = axes;
    json nodes = json::array();
    const auto& ax = surrogate.axes();
    std::vector<std::size_t> idx(ax.size(), 0);
    for (std::size_t k = 0; k < surrogate.node_count(); ++k) {
        std::size_t rem = k;
        for (std::size_t a = ax.size(); a-- > 0;) {
            idx[a] = rem % ax[a].values.size();
            rem /= ax[a].values.size();
        }
        json coords = json::array();
        for (std::size_t a = 0; a < ax.size(); ++a) coords.push_back(ax[a].values[idx[a]]);
        json tables = json::object();
        std::ostringstream stem;
        stem << "node_" << std::setw(5) << std::setfill('0') << k;
        for (const auto& [pol, table] : surrogate.node(idx)) {
            const std::string file = stem.str() + "_" + pol + ".csv";
            write_dispersion_table_csv(table, directory / file);
            tables[pol] = file;
        }
        nodes.push_back({{"coords", coords}, {"tables", tables}});
    }
    j["nodes"] = nodes;
    std::ofstream out(directory / "manifest.json", std::ios::binary);
    if (!out) throw ConfigError("cannot write surrogate manifest in '" + directory.string() + "'");
    out << j.dump(2) << "\n";
}

}  // namespace qmodes
