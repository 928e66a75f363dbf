#include "qmodes/pump.hpp"

#include <cmath>

#include "qmodes/errors.hpp"
#include "qmodes/units.hpp"

namespace qmodes {

void validate(const PumpSpec& spec) {
    if (!(spec.center_omega > 0.0)) throw ConfigError("pump centre frequency must be positive");
    if (!(spec.width_fwhm_nm > 0.0)) throw ConfigError("pump width must be positive");
    if (spec.order < 0 || spec.order > kMaxHermiteOrder)
        throw ConfigError("pump order must lie in [0, " + std::to_string(kMaxHermiteOrder) + "]");
}

double pump_sigma_omega(const PumpSpec& spec) {
    validate(spec);
    const double lambda0 = wavelength_from_omega(spec.center_omega);
    return sigma_from_fwhm(omega_width_from_wavelength_width(spec.width_fwhm_nm * 1e-9, lambda0));
}

double hermite_function(int n, double x) {
    if (n < 0) throw ContractError("negative Hermite order");
    const double g = std::exp(-0.5 * x * x);
    double prev = 0.0;
    double cur = std::pow(kPi, -0.25) * g;
    for (int k = 0; k < n; ++k) {
        const double next =
            std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double hg_envelope(int order, double center_omega, double sigma_omega, double omega) {
    return hermite_function(order, (omega - center_omega) / sigma_omega) / std::sqrt(sigma_omega);
}

double hg_envelope(const PumpSpec& spec, double omega) {
    return hg_envelope(spec.order, spec.center_omega, pump_sigma_omega(spec), omega);
}

double pump_on_plane(const PumpSpec& spec, ProcessKind kind, double omega_a, double omega_b) {
    const double w = kind == ProcessKind::SPA_PDC ? omega_a + omega_b : omega_b - omega_a;
    return hg_envelope(spec, w);
}

}  // namespace qmodes
