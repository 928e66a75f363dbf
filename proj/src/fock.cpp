#include "qmodes/fock.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "qmodes/errors.hpp"

namespace qmodes {

namespace {

using cd = std::complex<double>;
using StateVector = Eigen::VectorXcd;

enum class Generator { BeamSplitter, TwoModeSqueezer };

struct Space {
    int signals = 0;
    int idlers = 0;
    int d_signal = 0;
    int d_idler = 0;
    std::vector<long> stride;  // signals first, then idlers
    long dim = 0;

    Space(int m, int l, int ds, int di) : signals(m), idlers(l), d_signal(ds), d_idler(di) {
        stride.resize(static_cast<std::size_t>(m + l));
        long s = 1;
        for (int k = m + l - 1; k >= 0; --k) {
            stride[static_cast<std::size_t>(k)] = s;
            s *= k < m ? ds : di;
        }
        dim = s;
    }
    int levels(int k) const { return k < signals ? d_signal : d_idler; }
    int occupation(long idx, int k) const {
        return static_cast<int>((idx / stride[static_cast<std::size_t>(k)]) % levels(k));
    }
};

std::vector<cd> squeezed_vacuum(double r, double xi, int cutoff) {
    std::vector<cd> c(static_cast<std::size_t>(cutoff + 1), 0.0);
    const cd z = std::polar(std::tanh(r), -xi);
    double amp = 1.0 / std::sqrt(std::cosh(r));
    cd power = 1.0;
    // sqrt((2n)!) / (2^n n!) built incrementally.
    double ratio = 1.0;
    for (int n = 0; 2 * n <= cutoff; ++n) {
        if (n > 0) {
            ratio *= std::sqrt((2.0 * n - 1.0) * (2.0 * n)) / (2.0 * n);
            power *= z;
        }
        c[static_cast<std::size_t>(2 * n)] = amp * ratio * power;
    }
    return c;
}

void apply_generator(Generator kind, const Space& sp, const Eigen::VectorXd& sqrt_lambda,
                     const Eigen::MatrixXd& O, const StateVector& x, StateVector& y) {
    y.setZero(sp.dim);
    const int M = sp.signals, L = sp.idlers;
    for (long idx = 0; idx < sp.dim; ++idx) {
        const cd v = x(idx);
        if (v == 0.0) continue;
        for (int l = 0; l < L; ++l) {
            const int kb = M + l;
            const int b = sp.occupation(idx, kb);
            const long sb = sp.stride[static_cast<std::size_t>(kb)];
            for (int m = 0; m < M; ++m) {
                const double g = sqrt_lambda(l) * O(l, m);
                if (g == 0.0) continue;
                const int n = sp.occupation(idx, m);
                const long sa = sp.stride[static_cast<std::size_t>(m)];
                if (kind == Generator::BeamSplitter) {
                    // a_m B_l^dag
                    if (n > 0 && b + 1 < sp.d_idler)
                        y(idx - sa + sb) += g * std::sqrt(double(n) * (b + 1)) * v;
                    // -a_m^dag B_l
                    if (n + 1 < sp.d_signal && b > 0)
                        y(idx + sa - sb) -= g * std::sqrt(double(n + 1) * b) * v;
                } else {
                    const cd mi(0.0, -g);
                    // -i a_m^dag B_l^dag
                    if (n + 1 < sp.d_signal && b + 1 < sp.d_idler)
                        y(idx + sa + sb) += mi * std::sqrt(double(n + 1) * (b + 1)) * v;
                    // -i a_m B_l
                    if (n > 0 && b > 0) y(idx - sa - sb) += mi * std::sqrt(double(n) * b) * v;
                }
            }
        }
    }
}

StateVector propagate(Generator kind, const Space& sp, double theta,
                      const Eigen::VectorXd& sqrt_lambda, const Eigen::MatrixXd& O,
                      StateVector x) {
    double bound = 0.0;
    for (int l = 0; l < sp.idlers; ++l)
        for (int m = 0; m < sp.signals; ++m) bound += sqrt_lambda(l) * std::abs(O(l, m));
    bound *= 2.0 * std::sqrt(double(sp.d_signal - 1)) * std::sqrt(double(sp.d_idler - 1));
    const double beta = std::abs(theta) * bound;
    const int steps = std::max(1, static_cast<int>(std::ceil(beta / 0.5)));
    const double h = theta / steps;

    StateVector term(sp.dim), next(sp.dim);
    for (int s = 0; s < steps; ++s) {
        StateVector sum = x;
        term = x;
        for (int k = 1; k <= 60; ++k) {
            apply_generator(kind, sp, sqrt_lambda, O, term, next);
            term = next * (h / k);
            sum += term;
            if (term.norm() <= 1e-16 * sum.norm()) break;
            if (k == 60) throw NumericalError("Fock propagation series did not converge");
        }
        x = std::move(sum);
    }
    return x;
}

FockOracleResult run_oracle(Generator kind, double theta, const Eigen::VectorXd& lambda,
                            const Eigen::MatrixXd& O, const Eigen::VectorXd& r,
                            const Eigen::VectorXd& xi_in, const FockOracleOptions& opt) {
    const int L = static_cast<int>(lambda.size());
    const int M = static_cast<int>(r.size());
    if (L < 1 || M < 1 || L > kMaxOracleModes || M > kMaxOracleModes)
        throw ContractError("Fock oracle supports 1.." + std::to_string(kMaxOracleModes) +
                            " process and input modes");
    if (O.rows() != L || O.cols() != M) throw ContractError("overlap matrix shape mismatch");
    if (opt.cutoff < 1 || opt.cutoff > kMaxOracleCutoff)
        throw ContractError("Fock oracle cutoff must lie in [1, " +
                            std::to_string(kMaxOracleCutoff) + "]");
    if (opt.idler_cutoff < 1) throw ContractError("idler cutoff must be at least 1");
    if (!(std::abs(theta) <= kMaxOracleTheta))
        throw ContractError("Fock oracle is meant for weak coupling, |theta| <= 0.05");
    if ((lambda.array() < 0.0).any() || (r.array() < 0.0).any())
        throw DomainError("negative eigenvalue or squeezing");
    Eigen::VectorXd xi = xi_in.size() == 0 ? Eigen::VectorXd::Zero(M) : xi_in;
    if (xi.size() != M) throw ContractError("xi needs one entry per input mode");

    for (int m = 0; m < M; ++m) {
        const double tail = squeezed_vacuum_tail(r(m), opt.cutoff);
        if (tail > opt.leakage_limit) {
            std::ostringstream os;
            os << "Fock truncation leaks " << tail << " of input mode " << m << " (r = " << r(m)
               << ", cutoff " << opt.cutoff << "); raise the cutoff or lower the squeezing";
            throw NumericalError(os.str());
        }
    }

    const int ds = opt.cutoff + 1 + (kind == Generator::TwoModeSqueezer ? 1 : 0);
    const Space sp(M, L, ds, opt.idler_cutoff + 1);

    StateVector psi = StateVector::Zero(sp.dim);
    std::vector<std::vector<cd>> single(static_cast<std::size_t>(M));
    for (int m = 0; m < M; ++m) single[static_cast<std::size_t>(m)] = squeezed_vacuum(r(m), xi(m), opt.cutoff);
    // Idlers start in vacuum, so only signal occupations vary.
    std::vector<int> occ(static_cast<std::size_t>(M), 0);
    while (true) {
        cd amp = 1.0;
        long idx = 0;
        for (int m = 0; m < M; ++m) {
            const int n = occ[static_cast<std::size_t>(m)];
            amp *= single[static_cast<std::size_t>(m)][static_cast<std::size_t>(n)];
            idx += n * sp.stride[static_cast<std::size_t>(m)];
        }
        psi(idx) = amp;
        int k = M - 1;
        while (k >= 0 && ++occ[static_cast<std::size_t>(k)] > opt.cutoff) occ[static_cast<std::size_t>(k--)] = 0;
        if (k < 0) break;
    }

    const Eigen::VectorXd sqrt_lambda = lambda.array().sqrt();
    const StateVector out = propagate(kind, sp, theta, sqrt_lambda, O, psi);

    const long signal_dim = sp.dim / static_cast<long>(std::pow(sp.d_idler, L));
    const long idler_block = sp.dim / signal_dim;
    std::vector<StateVector> phi(static_cast<std::size_t>(L), StateVector(signal_dim));
    for (int l = 0; l < L; ++l) {
        const long offset = sp.stride[static_cast<std::size_t>(M + l)];
        for (long s = 0; s < signal_dim; ++s) phi[static_cast<std::size_t>(l)](s) = out(s * idler_block + offset);
    }

    FockOracleResult res;
    for (const auto& p : phi) res.probability += p.squaredNorm();
    if (!(res.probability > 1e-300)) return res;
    double tr = 0.0;
    for (int l = 0; l < L; ++l)
        for (int k = 0; k < L; ++k)
            tr += std::norm(phi[static_cast<std::size_t>(l)].dot(phi[static_cast<std::size_t>(k)]));
    res.purity = tr / (res.probability * res.probability);
    return res;
}

}  // namespace

double squeezed_vacuum_tail(double r, int cutoff) {
    const auto c = squeezed_vacuum(r, 0.0, cutoff);
    double kept = 0.0;
    for (const auto& v : c) kept += std::norm(v);
    return std::max(0.0, 1.0 - kept);
}

FockOracleResult fock_oracle_sps(double theta, const Eigen::VectorXd& lambda,
                                 const Eigen::MatrixXd& O, const Eigen::VectorXd& r,
                                 const Eigen::VectorXd& xi, const FockOracleOptions& opt) {
    return run_oracle(Generator::BeamSplitter, theta, lambda, O, r, xi, opt);
}

FockOracleResult fock_oracle_spa(double theta, const Eigen::VectorXd& lambda,
                                 const Eigen::MatrixXd& O, const Eigen::VectorXd& r,
                                 const Eigen::VectorXd& xi, const FockOracleOptions& opt) {
    return run_oracle(Generator::TwoModeSqueezer, theta, lambda, O, r, xi, opt);
}

}  // namespace qmodes
