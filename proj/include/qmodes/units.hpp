#pragma once

#include <cmath>
#include <numbers>

namespace qmodes {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = std::numbers::pi;

// Vacuum wavelength (m) <-> angular frequency (rad/s).
inline double omega_from_wavelength(double wavelength_m) {
    return 2.0 * kPi * kSpeedOfLight / wavelength_m;
}
inline double wavelength_from_omega(double omega) {
    return 2.0 * kPi * kSpeedOfLight / omega;
}

inline double omega_from_wavelength_nm(double wavelength_nm) {
    return omega_from_wavelength(wavelength_nm * 1e-9);
}
inline double wavelength_nm_from_omega(double omega) {
    return wavelength_from_omega(omega) * 1e9;
}

// Small wavelength interval (m) at center wavelength -> angular-frequency interval.
inline double omega_width_from_wavelength_width(double dlambda_m, double lambda0_m) {
    return 2.0 * kPi * kSpeedOfLight * dlambda_m / (lambda0_m * lambda0_m);
}
inline double wavelength_width_from_omega_width(double domega, double lambda0_m) {
    return domega * lambda0_m * lambda0_m / (2.0 * kPi * kSpeedOfLight);
}

// sigma of exp(-x^2 / (2 sigma^2)) whose full width at half maximum is fwhm.
inline double sigma_from_fwhm(double fwhm) {
    return fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
}

}  // namespace qmodes
