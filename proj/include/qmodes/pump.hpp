#pragma once

#include "qmodes/phasematch.hpp"

namespace qmodes {

inline constexpr int kMaxHermiteOrder = 10;

// Hermite-Gauss spectral envelope of the pump (SPA) or gate (SPS).
// width_fwhm_nm is the FWHM of the HG0 Gaussian at the pump's central
// wavelength: d_omega = 2 pi c d_lambda / lambda0^2, sigma = d_omega / (2 sqrt(2 ln 2)).
// Higher orders reuse the same sigma.
struct PumpSpec {
    double center_omega = 0.0;
    double width_fwhm_nm = 0.0;
    int order = 0;
};

void validate(const PumpSpec& spec);

double pump_sigma_omega(const PumpSpec& spec);

// Orthonormal Hermite function psi_n(x) = H_n(x) exp(-x^2/2) / sqrt(2^n n! sqrt(pi)).
double hermite_function(int n, double x);

// psi_n((omega - omega0) / sigma) / sqrt(sigma): unit L2 norm over omega. Real-valued.
double hg_envelope(const PumpSpec& spec, double omega);
double hg_envelope(int order, double center_omega, double sigma_omega, double omega);

// SPA_PDC: envelope at omega_a + omega_b; SPS_SFG: envelope at omega_b - omega_a.
double pump_on_plane(const PumpSpec& spec, ProcessKind kind, double omega_a, double omega_b);

}  // namespace qmodes
