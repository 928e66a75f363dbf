#pragma once

#include <string>
#include <vector>

#include "qmodes/dispersion.hpp"

namespace qmodes {

// Analytic stand-in for mode-solver output over thin-film geometry.
// With u = omega / omega_ref - 1 and the geometry offsets
//   dD = (D - D0)/100, dh = (h - h0)/100, dg = (g - g0)/100, dphi = (phi - phi0)/10,
//   n_TM = A + B u + C u^2 + (E dD + F dD^2 + Gh dh + Gg dg + Gphi dphi) u
//   n_TE = H0 + H1 u + H2 u^2 + (Ih dh + Ig dg) u
// Axes missing from a geometry point sit at their reference value.
struct SyntheticLaw {
    double ref_wavelength_um = 1.56;
    double A = 2.10, B = 0.05, C = 0.03, E = 0.05, F = 0.0;
    double Gh = 0.0, Gg = 0.0, Gphi = 0.0;
    double H0 = 2.00, H1 = 0.10, H2 = 0.03;
    double Ih = 0.0, Ig = 0.0;
    double D0 = 850.0, h0 = 600.0, g0 = 441.0, phi0 = 78.2;
    std::string te_label = "TE";
    std::string tm_label = "TM";

    double n_eff(const GeometryPoint& geometry, const std::string& pol, double omega) const;

    // D at which a TM field at omega_ref and a TM field at 2 omega_ref share a
    // group index (the other offsets held at zero), from the closed form.
    double group_matched_D() const;
};

// Tables of the law sampled at `samples` frequencies uniformly in
// [omega_min, omega_max], one node per axis-grid point.
GeometrySurrogate make_synthetic_surrogate(const SyntheticLaw& law, std::vector<GeometryAxis> axes,
                                           double omega_min, double omega_max,
                                           std::size_t samples);

}  // namespace qmodes
