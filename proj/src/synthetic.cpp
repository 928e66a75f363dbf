#include "qmodes/synthetic.hpp"

#include <cmath>

#include "qmodes/errors.hpp"
#include "qmodes/units.hpp"

namespace qmodes {

namespace {

double offset(const GeometryPoint& g, const char* name, double ref, double scale) {
    auto it = g.find(name);
    return it == g.end() ? 0.0 : (it->second - ref) / scale;
}

}  // namespace

double SyntheticLaw::n_eff(const GeometryPoint& geometry, const std::string& pol,
                           double omega) const {
    const double u = omega / omega_from_wavelength(ref_wavelength_um * 1e-6) - 1.0;
    const double dD = offset(geometry, "D", D0, 100.0);
    const double dh = offset(geometry, "h", h0, 100.0);
    const double dg = offset(geometry, "g", g0, 100.0);
    const double dphi = offset(geometry, "phi", phi0, 10.0);
    if (pol == tm_label)
        return A + B * u + C * u * u + (E * dD + F * dD * dD + Gh * dh + Gg * dg + Gphi * dphi) * u;
    if (pol == te_label) return H0 + H1 * u + H2 * u * u + (Ih * dh + Ig * dg) * u;
    throw ConfigError("synthetic law has no polarization '" + pol + "'");
}

double SyntheticLaw::group_matched_D() const {
    const double q = 0.5 * (2.0 * B + 5.0 * C);
    double dD;
    if (F == 0.0) {
        if (E == 0.0) throw DomainError("synthetic law has no D dependence");
        dD = -q / E;
    } else {
        const double disc = E * E - 4.0 * F * q;
        if (disc < 0.0) throw DomainError("synthetic law has no group-matched D");
        dD = -2.0 * q / (E + std::copysign(std::sqrt(disc), E));
    }
    return D0 + 100.0 * dD;
}

GeometrySurrogate make_synthetic_surrogate(const SyntheticLaw& law, std::vector<GeometryAxis> axes,
                                           double omega_min, double omega_max,
                                           std::size_t samples) {
    if (samples < 4 || !(omega_max > omega_min) || !(omega_min > 0.0))
        throw ConfigError("synthetic surrogate needs >= 4 samples over a positive range");
    std::size_t count = 1;
    for (const auto& a : axes) count *= a.values.size();
    std::vector<double> omega(samples);
    for (std::size_t i = 0; i < samples; ++i)
        omega[i] = omega_min + (omega_max - omega_min) * static_cast<double>(i) /
                                   static_cast<double>(samples - 1);

    std::vector<std::map<std::string, DispersionTable>> nodes;
    nodes.reserve(count);
    std::vector<std::size_t> idx(axes.size(), 0);
    for (std::size_t k = 0; k < count; ++k) {
        std::size_t rem = k;
        for (std::size_t a = axes.size(); a-- > 0;) {
            idx[a] = rem % axes[a].values.size();
            rem /= axes[a].values.size();
        }
        GeometryPoint p;
        for (std::size_t a = 0; a < axes.size(); ++a) p[axes[a].name] = axes[a].values[idx[a]];
        std::map<std::string, DispersionTable> node;
        for (const std::string& pol : {law.te_label, law.tm_label}) {
            std::vector<DispersionSample> s(samples);
            for (std::size_t i = 0; i < samples; ++i) s[i] = {omega[i], law.n_eff(p, pol, omega[i])};
            node.emplace(pol, DispersionTable(std::move(s), pol, "synthetic analytic law"));
        }
        nodes.push_back(std::move(node));
    }
    return GeometrySurrogate(std::move(axes), std::move(nodes),
                             "synthetic analytic dispersion law (not mode-solver data)");
}

}  // namespace qmodes
