#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qmodes/process.hpp"

namespace qmodes {

// One input signal mode: Hermite-Gauss envelope of the given order, with
// width_nm the FWHM of the HG0 Gaussian at the centre wavelength (same
// convention as PumpSpec).
struct BasisMode {
    int hg_order = 0;
    double center_omega = 0.0;
    double width_nm = 0.0;
};

// Multimode squeezed vacuum: mode m squeezed with r_m, n_m = sinh^2 r_m.
struct InputStateSpec {
    std::vector<BasisMode> basis;
    std::vector<double> nbar;
    std::vector<double> xi;  // squeezing phases, rad; may be empty
};

void validate(const InputStateSpec& spec);

double squeezing_from_nbar(double nbar);  // asinh(sqrt(nbar))
double nbar_from_squeezing(double r);     // sinh^2 r

// Basis envelopes sampled on the axis, one column per mode.
Eigen::MatrixXd sample_basis(const InputStateSpec& spec, const std::vector<double>& axis);

// Gram matrix under the grid measure; DomainError naming the worst pair when
// any entry deviates from the identity by more than tolerance.
void check_orthonormal(const Eigen::MatrixXd& basis, double step, double tolerance = 1e-3);

// O_lm = Re sum_i h_l(omega_i) phi_m(omega_i) * step.
Eigen::MatrixXd overlap_matrix(const Eigen::MatrixXcd& process_modes, const Eigen::MatrixXd& basis,
                               double step);
Eigen::MatrixXd overlap_matrix(const SchmidtData& schmidt, const InputStateSpec& input);

struct CompletedOverlap {
    Eigen::MatrixXd O;     // L x (M + added)
    Eigen::VectorXd nbar;  // occupations, zero for the added vacuum modes
    std::size_t added = 0;
};

// Extends the basis with vacuum modes by Gram-Schmidt on the residuals of the
// process modes, so every row of O carries the full norm of its mode.
// NumericalError when a row still captures less than `capture` afterwards.
CompletedOverlap complete_with_vacuum(const Eigen::MatrixXcd& process_modes,
                                      const Eigen::MatrixXd& basis, const Eigen::VectorXd& nbar,
                                      double step, double capture = 0.999);

struct PurityResult {
    double purity = 1.0;
    double probability = 0.0;
};

// mu- = sum_lk lt_l lt_k (sum_m O_lm O_km n_m)^2, P- = sum_lm lambda_l O_lm^2 n_m,
// lt = lambda / P-.
PurityResult sps_purity(const Eigen::VectorXd& lambda, const Eigen::MatrixXd& O,
                        const Eigen::VectorXd& nbar);

// mu+ = sum_lk lt_l lt_k |sum_m O_lm O_km (1 + n_m)|^2,
// P+ = sum_l lambda_l + sum_lm lambda_l O_lm^2 n_m. O must span the process
// modes (see complete_with_vacuum).
PurityResult spa_purity(const Eigen::VectorXd& lambda, const Eigen::MatrixXd& O,
                        const Eigen::VectorXd& nbar);

// Default report occupations: HG0..HG2 at the signal centre with n = 1 each.
InputStateSpec default_input_state(double signal_center_omega, double width_nm,
                                   int modes = 3, double nbar = 1.0);

}  // namespace qmodes
