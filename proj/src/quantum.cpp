#include "qmodes/quantum.hpp"

#include <cmath>
#include <sstream>

#include "qmodes/errors.hpp"
#include "qmodes/units.hpp"

namespace qmodes {

void validate(const InputStateSpec& spec) {
    if (spec.basis.empty()) throw ConfigError("input state needs at least one basis mode");
    if (spec.nbar.size() != spec.basis.size())
        throw ConfigError("input state: nbar needs one entry per basis mode");
    if (!spec.xi.empty() && spec.xi.size() != spec.basis.size())
        throw ConfigError("input state: xi needs one entry per basis mode");
    for (double n : spec.nbar)
        if (!std::isfinite(n) || n < 0.0)
            throw ConfigError("input state: occupations must be finite and non-negative");
    for (const auto& b : spec.basis) {
        if (b.hg_order < 0 || b.hg_order > kMaxHermiteOrder)
            throw ConfigError("input state: HG order out of range");
        if (!(b.center_omega > 0.0) || !(b.width_nm > 0.0))
            throw ConfigError("input state: basis modes need positive centre and width");
    }
}

double squeezing_from_nbar(double nbar) { return std::asinh(std::sqrt(nbar)); }

double nbar_from_squeezing(double r) {
    const double s = std::sinh(r);
    return s * s;
}

Eigen::MatrixXd sample_basis(const InputStateSpec& spec, const std::vector<double>& axis) {
    validate(spec);
    Eigen::MatrixXd out(static_cast<Eigen::Index>(axis.size()),
                        static_cast<Eigen::Index>(spec.basis.size()));
    for (std::size_t m = 0; m < spec.basis.size(); ++m) {
        const auto& b = spec.basis[m];
        PumpSpec shape{b.center_omega, b.width_nm, b.hg_order};
        const double sigma = pump_sigma_omega(shape);
        for (std::size_t i = 0; i < axis.size(); ++i)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m)) =
                hg_envelope(b.hg_order, b.center_omega, sigma, axis[i]);
    }
    return out;
}

void check_orthonormal(const Eigen::MatrixXd& basis, double step, double tolerance) {
    const Eigen::MatrixXd gram = basis.transpose() * basis * step;
    double worst = 0.0;
    Eigen::Index wi = 0, wj = 0;
    for (Eigen::Index i = 0; i < gram.rows(); ++i)
        for (Eigen::Index j = 0; j < gram.cols(); ++j) {
            const double dev = std::abs(gram(i, j) - (i == j ? 1.0 : 0.0));
            if (dev > worst) {
                worst = dev;
                wi = i;
                wj = j;
            }
        }
    if (worst > tolerance) {
        std::ostringstream os;
        os << "input basis is not orthonormal on the grid: modes " << wi << " and " << wj
           << " deviate by " << worst << " (widen the signal window or refine the grid)";
        throw DomainError(os.str());
    }
}

Eigen::MatrixXd overlap_matrix(const Eigen::MatrixXcd& process_modes, const Eigen::MatrixXd& basis,
                               double step) {
    if (process_modes.rows() != basis.rows())
        throw ContractError("process modes and input basis live on different grids");
    return (process_modes.transpose() * basis.cast<std::complex<double>>()).real() * step;
}

Eigen::MatrixXd overlap_matrix(const SchmidtData& schmidt, const InputStateSpec& input) {
    const Eigen::MatrixXd basis = sample_basis(input, schmidt.grid.axis_a);
    const double step = schmidt.grid.step_a();
    check_orthonormal(basis, step);
    return overlap_matrix(schmidt.signal_modes, basis, step);
}

CompletedOverlap complete_with_vacuum(const Eigen::MatrixXcd& process_modes,
                                      const Eigen::MatrixXd& basis, const Eigen::VectorXd& nbar,
                                      double step, double capture) {
    if (nbar.size() != basis.cols()) throw ContractError("nbar size does not match the basis");
    std::vector<Eigen::VectorXd> cols;
    for (Eigen::Index m = 0; m < basis.cols(); ++m) cols.emplace_back(basis.col(m));
    const std::size_t original = cols.size();

    for (Eigen::Index l = 0; l < process_modes.cols(); ++l) {
        Eigen::VectorXd res = process_modes.col(l).real();
        // Two Gram-Schmidt passes keep the new vector orthogonal to working precision.
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& c : cols) res -= c * (c.dot(res) * step);
        const double n2 = res.squaredNorm() * step;
        if (n2 > 1e-12) cols.push_back(res / std::sqrt(n2));
    }

    Eigen::MatrixXd full(basis.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t m = 0; m < cols.size(); ++m) full.col(static_cast<Eigen::Index>(m)) = cols[m];

    CompletedOverlap out;
    out.O = overlap_matrix(process_modes, full, step);
    out.nbar = Eigen::VectorXd::Zero(full.cols());
    out.nbar.head(nbar.size()) = nbar;
    out.added = cols.size() - original;
    for (Eigen::Index l = 0; l < out.O.rows(); ++l) {
        const double want = process_modes.col(l).real().squaredNorm() * step;
        if (want > 0.0 && out.O.row(l).squaredNorm() < capture * want) {
            std::ostringstream os;
            os << "vacuum completion captures only " << out.O.row(l).squaredNorm() / want
               << " of process mode " << l;
            throw NumericalError(os.str());
        }
    }
    return out;
}

namespace {

void check_shapes(const Eigen::VectorXd& lambda, const Eigen::MatrixXd& O,
                  const Eigen::VectorXd& nbar) {
    if (O.rows() != lambda.size())
        throw ContractError("overlap matrix needs one row per process mode");
    if (O.cols() != nbar.size())
        throw ContractError("overlap matrix needs one column per input mode");
    if ((lambda.array() < 0.0).any()) throw DomainError("negative Schmidt eigenvalue");
    if ((nbar.array() < 0.0).any()) throw DomainError("negative occupation");
}

double weighted_purity(const Eigen::VectorXd& lambda_t, const Eigen::MatrixXd& C) {
    double mu = 0.0;
    for (Eigen::Index l = 0; l < C.rows(); ++l)
        for (Eigen::Index k = 0; k < C.cols(); ++k) mu += lambda_t(l) * lambda_t(k) * C(l, k) * C(l, k);
    return mu;
}

}  // namespace

PurityResult sps_purity(const Eigen::VectorXd& lambda, const Eigen::MatrixXd& O,
                        const Eigen::VectorXd& nbar) {
    check_shapes(lambda, O, nbar);
    if (!(nbar.sum() > 0.0)) throw DomainError("no photons to subtract: every occupation is zero");
    const Eigen::MatrixXd C = O * nbar.asDiagonal() * O.transpose();
    PurityResult r;
    r.probability = lambda.dot(C.diagonal());
    if (!(r.probability > 0.0))
        throw DomainError("no photons to subtract: occupied modes do not overlap the process modes");
    r.purity = weighted_purity(lambda / r.probability, C);
    return r;
}

PurityResult spa_purity(const Eigen::VectorXd& lambda, const Eigen::MatrixXd& O,
                        const Eigen::VectorXd& nbar) {
    check_shapes(lambda, O, nbar);
    const Eigen::MatrixXd C =
        O * (Eigen::VectorXd::Ones(nbar.size()) + nbar).asDiagonal() * O.transpose();
    const Eigen::MatrixXd Cn = O * nbar.asDiagonal() * O.transpose();
    PurityResult r;
    r.probability = lambda.sum() + lambda.dot(Cn.diagonal());
    if (!(r.probability > 0.0)) throw DomainError("process has no weight");
    r.purity = weighted_purity(lambda / r.probability, C);
    return r;
}

InputStateSpec default_input_state(double signal_center_omega, double width_nm, int modes,
                                   double nbar) {
    InputStateSpec s;
    for (int m = 0; m < modes; ++m) {
        s.basis.push_back({m, signal_center_omega, width_nm});
        s.nbar.push_back(nbar);
        s.xi.push_back(0.0);
    }
    return s;
}

}  // namespace qmodes
