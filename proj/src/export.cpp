#include "qmodes/export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "qmodes/errors.hpp"

namespace qmodes {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, mode | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    return out;
}

// Sampled viridis at nine equally spaced stops.
constexpr std::array<std::array<double, 3>, 9> kViridis = {{
    {68, 1, 84},
    {71, 44, 122},
    {59, 81, 139},
    {44, 113, 142},
    {33, 144, 141},
    {39, 173, 129},
    {92, 200, 99},
    {170, 220, 50},
    {253, 231, 37},
}};

}  // namespace

std::string format_double(double x) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{}) throw NumericalError("cannot format number");
    return std::string(buf, end);
}

std::string stamp_header(const ArtifactStamp& stamp) {
    return "# config_sha256: " + stamp.config_sha256 + "\n# config: " + stamp.config_json + "\n";
}

void write_amplitude_csv(const SpectralAmplitude& amplitude, const fs::path& abs_path,
                         const fs::path& phase_path, const ArtifactStamp& stamp) {
    const auto& g = amplitude.grid;
    for (int which = 0; which < 2; ++which) {
        auto out = open_out(which == 0 ? abs_path : phase_path);
        out << stamp_header(stamp);
        out << "# rows: signal omega_rad_s; columns: " << (amplitude.kind == AmplitudeKind::JSA ? "idler" : "upconverted")
            << " omega_rad_s; body: " << (which == 0 ? "|amplitude|" : "arg(amplitude) rad") << "\n";
        out << "omega_rad_s";
        for (double b : g.axis_b) out << ',' << format_double(b);
        out << '\n';
        for (std::size_t i = 0; i < g.size_a(); ++i) {
            out << format_double(g.axis_a[i]);
            for (std::size_t j = 0; j < g.size_b(); ++j) {
                const auto v = amplitude.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                out << ',' << format_double(which == 0 ? std::abs(v) : std::arg(v));
            }
            out << '\n';
        }
    }
}

void write_mode_csv(const std::vector<double>& omega, const Eigen::VectorXcd& mode, const fs::path& path,
                    const ArtifactStamp& stamp) {
    if (omega.size() != static_cast<std::size_t>(mode.size()))
        throw ContractError("mode length does not match its axis");
    auto out = open_out(path);
    out << stamp_header(stamp) << "omega_rad_s,real,imag\n";
    for (std::size_t i = 0; i < omega.size(); ++i) {
        const auto v = mode(static_cast<Eigen::Index>(i));
        out << format_double(omega[i]) << ',' << format_double(v.real()) << ',' << format_double(v.imag())
            << '\n';
    }
}

void write_table_csv(const std::vector<std::string>& columns, const std::vector<std::vector<double>>& rows,
                     const fs::path& path, const ArtifactStamp& stamp) {
    auto out = open_out(path);
    out << stamp_header(stamp);
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
    out << '\n';
    for (const auto& r : rows) {
        if (r.size() != columns.size()) throw ContractError("table row width mismatch");
        for (std::size_t c = 0; c < r.size(); ++c) out << (c ? "," : "") << format_double(r[c]);
        out << '\n';
    }
}

std::array<std::uint8_t, 3> viridis(double t) {
    t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
    const double x = t * (kViridis.size() - 1);
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(x), kViridis.size() - 2);
    const double f = x - static_cast<double>(i);
    std::array<std::uint8_t, 3> rgb{};
    for (int c = 0; c < 3; ++c)
        rgb[c] = static_cast<std::uint8_t>(std::lround(kViridis[i][c] + f * (kViridis[i + 1][c] - kViridis[i][c])));
    return rgb;
}

void write_heatmap_ppm(const SpectralAmplitude& amplitude, const fs::path& path) {
    const Eigen::MatrixXd mag = amplitude.values.cwiseAbs();
    const double peak = mag.maxCoeff();
    const auto w = mag.rows(), h = mag.cols();
    auto out = open_out(path, std::ios::out | std::ios::binary);
    out << "P6\n" << w << ' ' << h << "\n255\n";
    std::vector<char> row(static_cast<std::size_t>(3 * w));
    for (Eigen::Index y = h - 1; y >= 0; --y) {
        for (Eigen::Index x = 0; x < w; ++x) {
            const auto rgb = viridis(peak > 0.0 ? mag(x, y) / peak : 0.0);
            for (int c = 0; c < 3; ++c) row[static_cast<std::size_t>(3 * x + c)] = static_cast<char>(rgb[c]);
        }
        out.write(row.data(), static_cast<std::streamsize>(row.size()));
    }
}

void write_json(nlohmann::json doc, const fs::path& path, const ArtifactStamp& stamp) {
    doc["config"] = nlohmann::json::parse(stamp.config_json);
    doc["config_sha256"] = stamp.config_sha256;
    auto out = open_out(path);
    out << doc.dump(2) << '\n';
}

}  // namespace qmodes
