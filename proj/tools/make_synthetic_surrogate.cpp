#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "qmodes/dispersion_io.hpp"
#include "qmodes/errors.hpp"
#include "qmodes/synthetic.hpp"
#include "qmodes/units.hpp"

namespace {

// name:unit:lo:hi:count
qmodes::GeometryAxis parse_axis(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 5) throw qmodes::ConfigError("axis '" + text + "' is not name:unit:lo:hi:count");
    const double lo = std::stod(parts[2]), hi = std::stod(parts[3]);
    const int n = std::stoi(parts[4]);
    if (n < 2 || !(hi > lo)) throw qmodes::ConfigError("axis '" + text + "' needs lo < hi and count >= 2");
    qmodes::GeometryAxis a{parts[0], parts[1], {}};
    for (int i = 0; i < n; ++i) a.values.push_back(lo + (hi - lo) * i / (n - 1));
    return a;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Write a geometry surrogate sampled from the synthetic dispersion law"};
    std::string out;
    std::vector<std::string> axes;
    double from_nm = 500.0, to_nm = 1800.0;
    std::size_t samples = 200;
    std::vector<std::string> set;
    app.add_option("--out", out, "Output directory")->required();
    app.add_option("--axis", axes, "Geometry axis name:unit:lo:hi:count (repeatable)")->required();
    app.add_option("--from-nm", from_nm, "Shortest wavelength");
    app.add_option("--to-nm", to_nm, "Longest wavelength");
    app.add_option("--samples", samples, "Frequency samples per table");
    app.add_option("--set", set, "Law coefficient override, e.g. --set C=0.02");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        qmodes::SyntheticLaw law;
        std::map<std::string, double*> fields = {
            {"A", &law.A},   {"B", &law.B},   {"C", &law.C},       {"E", &law.E},   {"F", &law.F},
            {"Gh", &law.Gh}, {"Gg", &law.Gg}, {"Gphi", &law.Gphi}, {"H0", &law.H0}, {"H1", &law.H1},
            {"H2", &law.H2}, {"Ih", &law.Ih}, {"Ig", &law.Ig},     {"D0", &law.D0}, {"h0", &law.h0},
            {"g0", &law.g0}, {"phi0", &law.phi0}};
        for (const auto& kv : set) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw qmodes::ConfigError("--set expects key=value, got '" + kv + "'");
            const std::string k = kv.substr(0, eq);
            const double v = std::stod(kv.substr(eq + 1));
            auto it = fields.find(k);
            if (it == fields.end()) throw qmodes::ConfigError("unknown law coefficient '" + k + "'");
            *it->second = v;
        }
        std::vector<qmodes::GeometryAxis> parsed;
        for (const auto& a : axes) parsed.push_back(parse_axis(a));
        const auto surrogate = qmodes::make_synthetic_surrogate(
            law, parsed, qmodes::omega_from_wavelength_nm(to_nm), qmodes::omega_from_wavelength_nm(from_nm), samples);
        qmodes::write_geometry_surrogate(surrogate, out);
        std::cout << "wrote " << surrogate.node_count() << " nodes to " << out << "; group-matched D = "
                  << law.group_matched_D() << " nm\n";
    } catch (const qmodes::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
