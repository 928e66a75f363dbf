#include "qmodes/process.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <sstream>
#include <thread>

#include <Eigen/SVD>

#include "qmodes/errors.hpp"
#include "qmodes/units.hpp"

namespace qmodes {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(8);
    os << v;
    return os.str();
}

template <class E>
[[noreturn]] void rethrow_as(const E& e, const std::string& context) {
    throw E(std::string(e.what()) + " " + context);
}

// Re-raises a library error with the offending grid point appended, keeping its type.
[[noreturn]] void rethrow_with_point(double wa, double wb) {
    const std::string where = "[at grid point signal " + fmt(wavelength_nm_from_omega(wa)) +
                              " nm, partner " + fmt(wavelength_nm_from_omega(wb)) + " nm]";
    try {
        throw;
    } catch (const RangeError& e) {
        rethrow_as(e, where);
    } catch (const CutoffError& e) {
        rethrow_as(e, where);
    } catch (const EmptyFilterError& e) {
        rethrow_as(e, where);
    } catch (const DomainError& e) {
        rethrow_as(e, where);
    } catch (const NumericalError& e) {
        rethrow_as(e, where);
    } catch (const InfeasibleBoundsError& e) {
        rethrow_as(e, where);
    } catch (const ConfigError& e) {
        rethrow_as(e, where);
    } catch (const ContractError& e) {
        rethrow_as(e, where);
    } catch (const Error& e) {
        rethrow_as(e, where);
    }
    throw;
}

bool is_real(const Eigen::MatrixXcd& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (m(i, j).imag() != 0.0) return false;
    return true;
}

double uniform_step(const std::vector<double>& axis) {
    return (axis.back() - axis.front()) / static_cast<double>(axis.size() - 1);
}

}  // namespace

FrequencyGrid FrequencyGrid::uniform(double a_lo, double a_hi, std::size_t n_a, double b_lo,
                                     double b_hi, std::size_t n_b) {
    if (n_a < 2 || n_b < 2) throw ConfigError("frequency grid needs at least 2 points per axis");
    if (!(a_hi > a_lo) || !(b_hi > b_lo)) throw ConfigError("frequency grid bounds are empty");
    FrequencyGrid g;
    g.axis_a.resize(n_a);
    g.axis_b.resize(n_b);
    for (std::size_t i = 0; i < n_a; ++i)
        g.axis_a[i] = a_lo + (a_hi - a_lo) * static_cast<double>(i) / static_cast<double>(n_a - 1);
    for (std::size_t j = 0; j < n_b; ++j)
        g.axis_b[j] = b_lo + (b_hi - b_lo) * static_cast<double>(j) / static_cast<double>(n_b - 1);
    return g;
}

double FrequencyGrid::step_a() const { return uniform_step(axis_a); }
double FrequencyGrid::step_b() const { return uniform_step(axis_b); }

void validate(const FrequencyGrid& grid) {
    for (const auto* axis : {&grid.axis_a, &grid.axis_b}) {
        if (axis->size() < 2) throw ConfigError("frequency grid needs at least 2 points per axis");
        const double step = uniform_step(*axis);
        if (!(step > 0.0)) throw ConfigError("frequency grid must be strictly increasing");
        for (std::size_t i = 1; i < axis->size(); ++i) {
            const double d = (*axis)[i] - (*axis)[i - 1];
            if (!(d > 0.0)) throw ConfigError("frequency grid must be strictly increasing");
            if (std::abs(d - step) > 1e-9 * step)
                throw ConfigError("frequency grid spacing is not uniform");
        }
    }
}

double measure_norm(const SpectralAmplitude& amplitude) {
    return amplitude.values.norm() *
           std::sqrt(amplitude.grid.step_a() * amplitude.grid.step_b());
}

void normalize(SpectralAmplitude& amplitude) {
    const double n = measure_norm(amplitude);
    if (!std::isfinite(n)) throw NumericalError("amplitude has non-finite entries");
    if (!(n > 0.0)) throw DomainError("amplitude vanishes on the whole grid");
    amplitude.values /= n;
}

double edge_ratio(const Eigen::MatrixXcd& values) {
    const double peak = values.cwiseAbs().maxCoeff();
    if (!(peak > 0.0)) return 0.0;
    const Eigen::Index r = values.rows(), c = values.cols();
    double edge = std::max(values.row(0).cwiseAbs().maxCoeff(),
                           values.row(r - 1).cwiseAbs().maxCoeff());
    edge = std::max({edge, values.col(0).cwiseAbs().maxCoeff(),
                     values.col(c - 1).cwiseAbs().maxCoeff()});
    return edge / peak;
}

SpectralAmplitude build_amplitude(const ProcessSpec& spec, const PumpSpec& pump,
                                  const FrequencyGrid& grid, unsigned threads) {
    validate(spec);
    validate(pump);
    validate(grid);
    const std::size_t na = grid.size_a(), nb = grid.size_b();
    const double sigma = pump_sigma_omega(pump);
    const double half_l = 0.5 * spec.length_m;
    const double grating =
        spec.poling_period_m ? spec.poling_sign * 2.0 * kPi / *spec.poling_period_m : 0.0;
    const bool spa = spec.kind == ProcessKind::SPA_PDC;

    std::vector<double> ka(na), kb(nb);
    std::size_t i0 = 0, j0 = 0;
    try {
        for (; i0 < na; ++i0) ka[i0] = wavevector(spec.signal.index, grid.axis_a[i0]);
    } catch (const Error&) {
        rethrow_with_point(grid.axis_a[i0], grid.axis_b.front());
    }
    try {
        for (; j0 < nb; ++j0) kb[j0] = wavevector(spec.partner.index, grid.axis_b[j0]);
    } catch (const Error&) {
        rethrow_with_point(grid.axis_a.front(), grid.axis_b[j0]);
    }

    SpectralAmplitude out;
    out.grid = grid;
    out.kind = spa ? AmplitudeKind::JSA : AmplitudeKind::TF;
    out.values.resize(static_cast<Eigen::Index>(na), static_cast<Eigen::Index>(nb));

    auto fill_rows = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const double wa = grid.axis_a[i];
            for (std::size_t j = 0; j < nb; ++j) {
                const double wb = grid.axis_b[j];
                double value;
                try {
                    double dk;
                    if (spa) {
                        dk = ka[i] + kb[j] - wavevector(spec.drive.index, wa + wb);
                    } else {
                        const double gate = wb - wa;
                        if (!(gate > 0.0))
                            throw DomainError(
                                "up-converted frequency below signal frequency (negative gate "
                                "frequency)");
                        dk = ka[i] + wavevector(spec.drive.index, gate) - kb[j];
                    }
                    dk -= grating;
                    value = hg_envelope(pump.order, pump.center_omega, sigma,
                                        spa ? wa + wb : wb - wa) *
                            sinc(half_l * dk);
                } catch (const Error&) {
                    rethrow_with_point(wa, wb);
                }
                out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
            }
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(na)));
    if (workers == 1) {
        fill_rows(0, na);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(workers);
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t b = na * w / workers, e = na * (w + 1) / workers;
            pool.emplace_back([&, w, b, e] {
                try {
                    fill_rows(b, e);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    normalize(out);
    out.edge_ratio = edge_ratio(out.values);
    if (out.edge_ratio > kEdgeWarningRatio)
        out.warnings.push_back("amplitude at window edge is " + fmt(out.edge_ratio) +
                               " of its maximum; widen the grid window");
    return out;
}

MismatchGradient mismatch_gradient(const ProcessSpec& spec) {
    const double wa = spec.signal.omega(), wb = spec.partner.omega();
    const double h = 1e-5 * wa;
    MismatchGradient g;
    g.d_a = (unpoled_delta_k(spec, wa + h, wb) - unpoled_delta_k(spec, wa - h, wb)) / (2.0 * h);
    g.d_b = (unpoled_delta_k(spec, wa, wb + h) - unpoled_delta_k(spec, wa, wb - h)) / (2.0 * h);
    return g;
}

FrequencyGrid auto_grid(const ProcessSpec& spec, const PumpSpec& pump, std::size_t n_a,
                        std::size_t n_b) {
    validate(spec);
    const double sigma = pump_sigma_omega(pump);
    const double spread = std::sqrt(2.0 * pump.order + 1.0);
    const double pump_fwhm = 2.0 * std::sqrt(2.0 * std::log(2.0)) * sigma * spread;
    const double half_a = 3.0 * pump_fwhm;

    const double pump_limited = half_a + 7.0 * sigma * spread;
    double half_b = pump_limited;
    const MismatchGradient g = mismatch_gradient(spec);
    if (std::abs(g.d_b) * spec.length_m > 1e-300) {
        const double pm_fwhm = 5.566 / (spec.length_m * std::abs(g.d_b));
        const double tilt = std::abs(g.d_a / g.d_b) * half_a;
        half_b = std::min(5.0 * pm_fwhm + tilt, pump_limited);
    }
    const double wa = spec.signal.omega(), wb = spec.partner.omega();
    if (!(half_a < wa) || !(half_b < wb))
        throw DomainError("automatic grid window exceeds the optical frequency");
    return FrequencyGrid::uniform(wa - half_a, wa + half_a, n_a, wb - half_b, wb + half_b, n_b);
}

double schmidt_number(const Eigen::VectorXd& eigenvalues) {
    if (eigenvalues.size() == 0) throw DomainError("empty eigenvalue list");
    if ((eigenvalues.array() < 0.0).any()) throw DomainError("negative Schmidt eigenvalue");
    const double s = eigenvalues.sum();
    const double s2 = eigenvalues.squaredNorm();
    if (!(s2 > 0.0)) throw DomainError("all Schmidt eigenvalues are zero");
    return s * s / s2;
}

double schmidt_number(const std::vector<double>& eigenvalues) {
    return schmidt_number(
        Eigen::Map<const Eigen::VectorXd>(eigenvalues.data(), static_cast<Eigen::Index>(eigenvalues.size())));
}

double schmidt_number_fast(const SpectralAmplitude& amplitude) {
    const auto& v = amplitude.values;
    const bool tall = v.rows() > v.cols();
    double tr, fro2;
    if (is_real(v)) {
        const Eigen::MatrixXd r = v.real();
        const Eigen::MatrixXd m = tall ? Eigen::MatrixXd(r.transpose() * r)
                                       : Eigen::MatrixXd(r * r.transpose());
        tr = m.trace();
        fro2 = m.squaredNorm();
    } else {
        const Eigen::MatrixXcd m = tall ? Eigen::MatrixXcd(v.adjoint() * v)
                                        : Eigen::MatrixXcd(v * v.adjoint());
        tr = m.trace().real();
        fro2 = m.squaredNorm();
    }
    if (!(fro2 > 0.0) || !std::isfinite(fro2)) throw DomainError("amplitude has no weight");
    return tr * tr / fro2;
}

SchmidtData schmidt(const SpectralAmplitude& amplitude, std::size_t max_modes) {
    const double da = amplitude.grid.step_a(), db = amplitude.grid.step_b();
    const double scale = std::sqrt(da * db);
    if (!amplitude.values.allFinite()) throw NumericalError("amplitude has non-finite entries");

    Eigen::VectorXd s;
    Eigen::MatrixXcd u, v;
    if (is_real(amplitude.values)) {
        const Eigen::MatrixXd a = amplitude.values.real() * scale;
        Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
        if (svd.info() != Eigen::Success) throw NumericalError("SVD did not converge");
        s = svd.singularValues();
        u = svd.matrixU().cast<std::complex<double>>();
        v = svd.matrixV().cast<std::complex<double>>();
    } else {
        const Eigen::MatrixXcd a = amplitude.values * scale;
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
        if (svd.info() != Eigen::Success) throw NumericalError("SVD did not converge");
        s = svd.singularValues();
        u = svd.matrixU();
        v = svd.matrixV();
    }
    if (!s.allFinite() || s.size() == 0) {
        std::ostringstream os;
        os << "SVD produced non-finite singular values (max " << s.maxCoeff() << ", min "
           << s.minCoeff() << ")";
        throw NumericalError(os.str());
    }

    SchmidtData out;
    out.grid = amplitude.grid;
    out.raw_weight = s.squaredNorm();
    if (!(out.raw_weight > 0.0)) throw DomainError("amplitude has no weight");
    const Eigen::VectorXd lambda_all = s.array().square() / out.raw_weight;
    out.K = schmidt_number(lambda_all);

    std::vector<Eigen::Index> order(static_cast<std::size_t>(lambda_all.size()));
    std::iota(order.begin(), order.end(), 0);
    auto first_abs = [&](Eigen::Index l) {
        for (Eigen::Index i = 0; i < u.rows(); ++i)
            if (std::abs(u(i, l)) > 1e-12) return std::abs(u(i, l));
        return 0.0;
    };
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
        if (lambda_all(x) != lambda_all(y)) return lambda_all(x) > lambda_all(y);
        return first_abs(x) > first_abs(y);
    });

    std::size_t keep = 0;
    const double floor = 1e-15 * lambda_all(order.front());
    while (keep < order.size() && keep < max_modes && lambda_all(order[keep]) > floor) ++keep;
    keep = std::max<std::size_t>(keep, 1);

    const auto m = static_cast<Eigen::Index>(keep);
    out.eigenvalues.resize(m);
    out.signal_modes.resize(u.rows(), m);
    out.partner_modes.resize(v.rows(), m);
    for (Eigen::Index l = 0; l < m; ++l) {
        const Eigen::Index src = order[static_cast<std::size_t>(l)];
        Eigen::VectorXcd ul = u.col(src);
        Eigen::VectorXcd vl = v.col(src);
        for (Eigen::Index i = 0; i < ul.size(); ++i) {
            if (std::abs(ul(i)) > 1e-12) {
                const std::complex<double> phase = std::conj(ul(i)) / std::abs(ul(i));
                ul *= phase;
                vl *= phase;
                ul(i) = std::abs(ul(i));
                break;
            }
        }
        out.eigenvalues(l) = lambda_all(src);
        out.signal_modes.col(l) = ul / std::sqrt(da);
        out.partner_modes.col(l) = vl.conjugate() / std::sqrt(db);
    }
    return out;
}

Eigen::MatrixXcd reconstruct(const SchmidtData& data) {
    Eigen::MatrixXcd out =
        Eigen::MatrixXcd::Zero(data.signal_modes.rows(), data.partner_modes.rows());
    for (Eigen::Index l = 0; l < data.eigenvalues.size(); ++l)
        out += std::sqrt(data.eigenvalues(l) * data.raw_weight) * data.signal_modes.col(l) *
               data.partner_modes.col(l).transpose();
    return out;
}

FilterResult filter_idler(const SpectralAmplitude& amplitude, const FilterSpec& filter) {
    const auto& axis = amplitude.grid.axis_b;
    const std::size_t nb = axis.size();
    std::vector<double> t(nb, 0.0);
    switch (filter.shape) {
        case FilterShape::Rect: {
            if (!(filter.width_omega >= 0.0)) throw ConfigError("filter width must be non-negative");
            const double half = 0.5 * filter.width_omega + 1e-9 * amplitude.grid.step_b();
            for (std::size_t j = 0; j < nb; ++j)
                t[j] = std::abs(axis[j] - filter.center_omega) <= half ? 1.0 : 0.0;
            break;
        }
        case FilterShape::Gaussian: {
            if (!(filter.width_omega > 0.0)) throw ConfigError("filter width must be positive");
            const double c = 2.0 * std::log(2.0) / (filter.width_omega * filter.width_omega);
            for (std::size_t j = 0; j < nb; ++j) {
                const double x = axis[j] - filter.center_omega;
                t[j] = std::exp(-c * x * x);
            }
            break;
        }
        case FilterShape::Bins: {
            if (filter.first_bin > filter.last_bin || filter.last_bin >= nb)
                throw ConfigError("filter bin range [" + std::to_string(filter.first_bin) + ", " +
                                  std::to_string(filter.last_bin) + "] does not fit " +
                                  std::to_string(nb) + " partner bins");
            for (std::size_t j = filter.first_bin; j <= filter.last_bin; ++j) t[j] = 1.0;
            break;
        }
    }
    FilterResult out;
    out.amplitude = amplitude;
    for (std::size_t j = 0; j < nb; ++j) out.amplitude.values.col(static_cast<Eigen::Index>(j)) *= t[j];
    const double before = measure_norm(amplitude);
    const double after = measure_norm(out.amplitude);
    if (!(after > 0.0)) throw EmptyFilterError("filter window removes the whole amplitude");
    out.pass_fraction = (after * after) / (before * before);
    normalize(out.amplitude);
    out.amplitude.edge_ratio = edge_ratio(out.amplitude.values);
    return out;
}

std::vector<double> marginal(const SpectralAmplitude& amplitude, Axis axis) {
    const auto& v = amplitude.values;
    std::vector<double> out;
    if (axis == Axis::Signal) {
        const double db = amplitude.grid.step_b();
        out.resize(static_cast<std::size_t>(v.rows()));
        for (Eigen::Index i = 0; i < v.rows(); ++i)
            out[static_cast<std::size_t>(i)] = v.row(i).squaredNorm() * db;
    } else {
        const double da = amplitude.grid.step_a();
        out.resize(static_cast<std::size_t>(v.cols()));
        for (Eigen::Index j = 0; j < v.cols(); ++j)
            out[static_cast<std::size_t>(j)] = v.col(j).squaredNorm() * da;
    }
    return out;
}

double profile_width_nm(const std::vector<double>& omega, const std::vector<double>& profile,
                        double level) {
    if (omega.size() != profile.size() || omega.size() < 2)
        throw ContractError("profile and axis sizes differ");
    const auto peak_it = std::max_element(profile.begin(), profile.end());
    const double peak = *peak_it;
    if (!(peak > 0.0)) throw DomainError("profile has no weight");
    const double target = level * peak;
    const auto p = static_cast<std::size_t>(peak_it - profile.begin());

    auto cross = [&](std::size_t lo, std::size_t hi) {
        const double f = (target - profile[lo]) / (profile[hi] - profile[lo]);
        return omega[lo] + f * (omega[hi] - omega[lo]);
    };
    std::size_t i = p;
    while (i > 0 && profile[i - 1] >= target) --i;
    if (i == 0) throw DomainError("profile has no crossing at this level below its peak");
    const double w_lo = cross(i - 1, i);
    std::size_t j = p;
    while (j + 1 < profile.size() && profile[j + 1] >= target) ++j;
    if (j + 1 == profile.size())
        throw DomainError("profile has no crossing at this level above its peak");
    const double w_hi = cross(j + 1, j);
    return wavelength_nm_from_omega(w_lo) - wavelength_nm_from_omega(w_hi);
}

double marginal_bandwidth(const SpectralAmplitude& amplitude, Axis axis) {
    const auto& grid_axis = axis == Axis::Signal ? amplitude.grid.axis_a : amplitude.grid.axis_b;
    return profile_width_nm(grid_axis, marginal(amplitude, axis), 0.5);
}

double mode_bandwidth(const std::vector<double>& omega, const Eigen::VectorXcd& mode,
                      double level) {
    std::vector<double> p(static_cast<std::size_t>(mode.size()));
    for (Eigen::Index i = 0; i < mode.size(); ++i) p[static_cast<std::size_t>(i)] = std::norm(mode(i));
    return profile_width_nm(omega, p, level);
}

}  // namespace qmodes
