#pragma once

#include <optional>

#include <Eigen/Dense>

namespace qmodes {

// Brute-force check of the purity formulas in a truncated Fock space.
//
// Signal space: one bosonic mode per input mode m (squeezed vacuum, r_m, xi_m).
// Herald space: one idler mode B_l per process mode l. Process mode operators
// are A_l = sum_m O_lm a_m. The heralding POVM is a non-resolving single click
// over the single-photon idler states |1_l>.
//
//   SPS: U = exp(theta sum_l sqrt(lambda_l) (A_l B_l^dag - A_l^dag B_l))
//   SPA: U = exp(-i theta sum_l sqrt(lambda_l) (A_l^dag B_l^dag + A_l B_l))
//
// The state vector is propagated with a scaled Taylor series of the sparse
// generator, which is never stored.
struct FockOracleOptions {
    int cutoff = 8;         // highest signal photon number carried by the input
    int idler_cutoff = 2;   // highest idler photon number
    double leakage_limit = 1e-6;
};

struct FockOracleResult {
    std::optional<double> purity;  // empty when nothing is heralded
    double probability = 0.0;
};

inline constexpr int kMaxOracleModes = 3;
inline constexpr int kMaxOracleCutoff = 8;
inline constexpr double kMaxOracleTheta = 0.05;

// Truncation loss 1 - sum_{2n <= cutoff} |c_n|^2 of one squeezed vacuum.
double squeezed_vacuum_tail(double r, int cutoff);

FockOracleResult fock_oracle_sps(double theta, const Eigen::VectorXd& lambda,
                                 const Eigen::MatrixXd& O, const Eigen::VectorXd& r,
                                 const Eigen::VectorXd& xi = {}, const FockOracleOptions& opt = {});

FockOracleResult fock_oracle_spa(double theta, const Eigen::VectorXd& lambda,
                                 const Eigen::MatrixXd& O, const Eigen::VectorXd& r,
                                 const Eigen::VectorXd& xi = {}, const FockOracleOptions& opt = {});

}  // namespace qmodes
