#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qmodes/phasematch.hpp"
#include "qmodes/pump.hpp"

namespace qmodes {

// axis_a runs over the signal, axis_b over the partner field
// (idler for SPA, up-converted for SPS). Both uniform, strictly increasing.
struct FrequencyGrid {
    std::vector<double> axis_a;
    std::vector<double> axis_b;

    static FrequencyGrid uniform(double a_lo, double a_hi, std::size_t n_a, double b_lo,
                                 double b_hi, std::size_t n_b);

    std::size_t size_a() const { return axis_a.size(); }
    std::size_t size_b() const { return axis_b.size(); }
    double step_a() const;
    double step_b() const;
};

void validate(const FrequencyGrid& grid);

enum class AmplitudeKind { JSA, TF };

// Discretized J(omega_s, omega_i) or T(omega_s, omega_up), normalized so that
// ||values||_F * sqrt(step_a * step_b) = 1.
struct SpectralAmplitude {
    FrequencyGrid grid;
    Eigen::MatrixXcd values;  // size_a x size_b
    AmplitudeKind kind = AmplitudeKind::JSA;
    double edge_ratio = 0.0;  // max |value| on the window border / global max
    std::vector<std::string> warnings;
};

inline constexpr double kEdgeWarningRatio = 1e-3;

// Normalizes in place; throws DomainError when the matrix is zero.
void normalize(SpectralAmplitude& amplitude);
double measure_norm(const SpectralAmplitude& amplitude);
double edge_ratio(const Eigen::MatrixXcd& values);

// Entrywise alpha * phi, normalized. threads <= 1 evaluates serially.
SpectralAmplitude build_amplitude(const ProcessSpec& spec, const PumpSpec& pump,
                                  const FrequencyGrid& grid, unsigned threads = 1);

// Window heuristic: signal +-3x the expected signal bandwidth around its centre;
// partner window spans ten phase-matching FWHM plus the ridge tilt across the
// signal window, capped by the pump-limited extent.
FrequencyGrid auto_grid(const ProcessSpec& spec, const PumpSpec& pump, std::size_t n_a = 512,
                        std::size_t n_b = 512);

// d(delta_k)/d(omega) along each axis at the centres, central differences.
struct MismatchGradient {
    double d_a = 0.0;
    double d_b = 0.0;
};
MismatchGradient mismatch_gradient(const ProcessSpec& spec);

struct SchmidtData {
    Eigen::VectorXd eigenvalues;    // descending, unit sum
    Eigen::MatrixXcd signal_modes;  // size_a x modes, L2-orthonormal under step_a
    Eigen::MatrixXcd partner_modes; // size_b x modes, L2-orthonormal under step_b
    double K = 1.0;
    double raw_weight = 0.0;        // sum of squared singular values times the grid measure
    FrequencyGrid grid;
};

inline constexpr std::size_t kMaxSchmidtModes = 64;

SchmidtData schmidt(const SpectralAmplitude& amplitude, std::size_t max_modes = kMaxSchmidtModes);

// K = (sum lambda)^2 / sum lambda^2; DomainError for negative or all-zero input.
double schmidt_number(const Eigen::VectorXd& eigenvalues);
double schmidt_number(const std::vector<double>& eigenvalues);

// K from tr(M)^2 / ||M||_F^2 with M = A A^H; avoids the SVD.
double schmidt_number_fast(const SpectralAmplitude& amplitude);

// Rebuilds sum_l sqrt(lambda_l) h_l g_l^T (in normalized-amplitude units).
Eigen::MatrixXcd reconstruct(const SchmidtData& data);

enum class FilterShape { Rect, Gaussian, Bins };

// Window on the partner axis. Rect: full width; Gaussian: FWHM of the power
// transmission; Bins: inclusive index range.
struct FilterSpec {
    FilterShape shape = FilterShape::Rect;
    double center_omega = 0.0;
    double width_omega = 0.0;
    std::size_t first_bin = 0;
    std::size_t last_bin = 0;
};

struct FilterResult {
    SpectralAmplitude amplitude;
    double pass_fraction = 1.0;
};

FilterResult filter_idler(const SpectralAmplitude& amplitude, const FilterSpec& filter);

enum class Axis { Signal, Partner };

// Squared marginal sum_other |A|^2 * step_other along the axis.
std::vector<double> marginal(const SpectralAmplitude& amplitude, Axis axis);

// Full width at level * max of a sampled profile, with linearly interpolated
// crossings, converted exactly to a wavelength interval in nm.
// DomainError when the profile has no crossing on either side of its peak.
double profile_width_nm(const std::vector<double>& omega, const std::vector<double>& profile,
                        double level = 0.5);

double marginal_bandwidth(const SpectralAmplitude& amplitude, Axis axis);

// |mode|^2 FWHM in nm.
double mode_bandwidth(const std::vector<double>& omega, const Eigen::VectorXcd& mode,
                      double level = 0.5);

}  // namespace qmodes
