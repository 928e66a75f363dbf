#include "qmodes/dispersion.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_interp.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qmodes/errors.hpp"
#include "qmodes/units.hpp"

namespace qmodes {

namespace {

constexpr double kFixedTemperatureC = 25.0;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

bool expected_count_ok(SellmeierForm form, std::size_t n) {
    switch (form) {
        case SellmeierForm::Constant: return n == 1;
        case SellmeierForm::Sellmeier: return n >= 3 && n % 2 == 1;
        case SellmeierForm::PoleExpansion: return n >= 4 && n % 2 == 0;
        case SellmeierForm::EdwardsLawrence: return n == 7;
        case SellmeierForm::Jundt: return n == 10;
    }
    return false;
}

double index_squared(const SellmeierSet& set, double l_um) {
    const auto& c = set.coefficients;
    const double l2 = l_um * l_um;
    switch (set.form) {
        case SellmeierForm::Constant: return c[0] * c[0];
        case SellmeierForm::Sellmeier: {
            double n2 = c[0];
            for (std::size_t i = 1; i + 1 < c.size(); i += 2) n2 += c[i] * l2 / (l2 - c[i + 1]);
            return n2;
        }
        case SellmeierForm::PoleExpansion: {
            double n2 = c[0] - c[1] * l2;
            for (std::size_t i = 2; i + 1 < c.size(); i += 2) n2 += c[i] / (l2 - c[i + 1]);
            return n2;
        }
        case SellmeierForm::EdwardsLawrence: {
            const double t = kFixedTemperatureC;
            const double f = (t - 24.5) * (t + 570.5);
            const double pole = c[2] + c[5] * f;
            return c[0] + (c[1] + c[4] * f) / (l2 - pole * pole) + c[6] * f - c[3] * l2;
        }
        case SellmeierForm::Jundt: {
            const double t = kFixedTemperatureC;
            const double f = (t - 24.5) * (t + 570.82);
            const double pole = c[2] + c[8] * f;
            return c[0] + c[6] * f + (c[1] + c[7] * f) / (l2 - pole * pole) +
                   (c[3] + c[9] * f) / (l2 - c[4] * c[4]) - c[5] * l2;
        }
    }
    return 0.0;
}

}  // namespace

std::string to_string(SellmeierForm form) {
    switch (form) {
        case SellmeierForm::Constant: return "constant";
        case SellmeierForm::Sellmeier: return "sellmeier";
        case SellmeierForm::PoleExpansion: return "pole_expansion";
        case SellmeierForm::EdwardsLawrence: return "edwards_lawrence";
        case SellmeierForm::Jundt: return "jundt";
    }
    return "unknown";
}

SellmeierForm sellmeier_form_from_string(const std::string& name) {
    for (auto f : {SellmeierForm::Constant, SellmeierForm::Sellmeier, SellmeierForm::PoleExpansion,
                   SellmeierForm::EdwardsLawrence, SellmeierForm::Jundt})
        if (to_string(f) == name) return f;
    throw ConfigError("unknown Sellmeier form '" + name + "'");
}

void validate(const SellmeierSet& set) {
    if (!expected_count_ok(set.form, set.coefficients.size()))
        throw ConfigError("Sellmeier set '" + set.name + "': " +
                          std::to_string(set.coefficients.size()) +
                          " coefficients do not fit form " + to_string(set.form));
    for (double c : set.coefficients)
        if (!std::isfinite(c))
            throw ConfigError("Sellmeier set '" + set.name + "': non-finite coefficient");
    if (!(set.min_um > 0.0) || !(set.max_um > set.min_um))
        throw ConfigError("Sellmeier set '" + set.name + "': invalid valid_range");
    constexpr int kProbe = 400;
    for (int i = 0; i <= kProbe; ++i) {
        const double l = set.min_um + (set.max_um - set.min_um) * i / kProbe;
        const double n2 = index_squared(set, l);
        if (!(n2 > 1.0 && n2 < 25.0))
            throw ConfigError("Sellmeier set '" + set.name + "' leaves 1 < n < 5 at " + fmt(l) +
                              " um");
    }
}

SellmeierSet constant_index_set(double n, std::string name) {
    SellmeierSet s;
    s.name = std::move(name);
    s.form = SellmeierForm::Constant;
    s.coefficients = {n};
    s.min_um = 1e-3;
    s.max_um = 1e6;
    s.provenance = "dispersionless";
    return s;
}

double index_at_wavelength_um(const SellmeierSet& set, double wavelength_um) {
    if (!(wavelength_um >= set.min_um && wavelength_um <= set.max_um))
        throw RangeError("Sellmeier set '" + set.name + "' queried at " + fmt(wavelength_um) +
                         " um outside valid range [" + fmt(set.min_um) + ", " + fmt(set.max_um) +
                         "] um");
    const double n2 = index_squared(set, wavelength_um);
    if (!(n2 > 0.0))
        throw NumericalError("Sellmeier set '" + set.name + "' gives n^2 <= 0 at " +
                             fmt(wavelength_um) + " um");
    return std::sqrt(n2);
}

double refractive_index(const SellmeierSet& set, double omega) {
    if (!(omega > 0.0)) throw DomainError("non-positive angular frequency " + fmt(omega));
    return index_at_wavelength_um(set, wavelength_from_omega(omega) * 1e6);
}

double metallic_effective_index(const SellmeierSet& core, double width_um, double height_um,
                                double omega) {
    if (!(width_um > 0.0) || !(height_um > 0.0))
        throw ConfigError("metallic guide needs w > 0 and h > 0");
    const double n = refractive_index(core, omega);
    const double tx = kPi * kSpeedOfLight / (omega * width_um * 1e-6);
    const double ty = kPi * kSpeedOfLight / (omega * height_um * 1e-6);
    const double r = n * n - tx * tx - ty * ty;
    if (!(r > 0.0))
        throw CutoffError("metallic guide " + fmt(width_um) + " x " + fmt(height_um) +
                          " um is below cutoff at " + fmt(wavelength_from_omega(omega) * 1e9) +
                          " nm (core '" + core.name + "')");
    return std::sqrt(r);
}

double metallic_effective_index(const MetallicGuide& guide, double omega, const std::string& pol) {
    auto it = guide.core.find(pol);
    if (it == guide.core.end())
        throw ConfigError("metallic guide has no core index for polarization '" + pol + "'");
    return metallic_effective_index(it->second, guide.width_um, guide.height_um, omega);
}

struct DispersionTable::Spline {
    std::vector<double> x, y;
    gsl_interp* interp = nullptr;
    ~Spline() {
        if (interp) gsl_interp_free(interp);
    }
};

DispersionTable::DispersionTable(std::vector<DispersionSample> samples,
                                 std::string polarization_label, std::string provenance)
    : samples_(std::move(samples)),
      polarization_label_(std::move(polarization_label)),
      provenance_(std::move(provenance)) {
    if (samples_.size() < 4)
        throw ConfigError("dispersion table '" + polarization_label_ + "' needs >= 4 samples");
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const auto& s = samples_[i];
        if (!std::isfinite(s.omega) || !std::isfinite(s.n_eff) || !(s.n_eff > 1.0))
            throw ConfigError("dispersion table '" + polarization_label_ + "': row " +
                              std::to_string(i) + " needs finite omega and n_eff > 1");
        if (i > 0 && !(s.omega > samples_[i - 1].omega))
            throw ConfigError("dispersion table '" + polarization_label_ +
                              "': frequencies must be strictly increasing (row " +
                              std::to_string(i) + ")");
    }
    auto sp = std::make_shared<Spline>();
    sp->x.reserve(samples_.size());
    sp->y.reserve(samples_.size());
    for (const auto& s : samples_) {
        sp->x.push_back(s.omega);
        sp->y.push_back(s.n_eff);
    }
    sp->interp = gsl_interp_alloc(gsl_interp_cspline, samples_.size());
    if (!sp->interp || gsl_interp_init(sp->interp, sp->x.data(), sp->y.data(), sp->x.size()) !=
                           GSL_SUCCESS)
        throw NumericalError("spline setup failed for table '" + polarization_label_ + "'");
    spline_ = std::move(sp);
}

double DispersionTable::effective_index(double omega) const {
    const double lo = omega_min(), hi = omega_max();
    const double slack = 1e-12 * hi;
    if (!(omega >= lo - slack && omega <= hi + slack))
        throw RangeError("table '" + polarization_label_ + "' queried at omega " + fmt(omega) +
                         " rad/s (" + fmt(wavelength_from_omega(omega) * 1e9) +
                         " nm) outside [" + fmt(lo) + ", " + fmt(hi) + "]");
    omega = std::clamp(omega, lo, hi);
    // Null accelerator keeps evaluation reentrant.
    return gsl_interp_eval(spline_->interp, spline_->x.data(), spline_->y.data(), omega, nullptr);
}

double tabulated_effective_index(const DispersionTable& table, double omega) {
    return table.effective_index(omega);
}

GeometrySurrogate::GeometrySurrogate(std::vector<GeometryAxis> axes,
                                     std::vector<std::map<std::string, DispersionTable>> nodes,
                                     std::string provenance)
    : axes_(std::move(axes)), nodes_(std::move(nodes)), provenance_(std::move(provenance)) {
    if (axes_.empty()) throw ConfigError("geometry surrogate needs at least one axis");
    std::size_t count = 1;
    for (const auto& a : axes_) {
        if (a.values.empty()) throw ConfigError("surrogate axis '" + a.name + "' has no values");
        for (std::size_t i = 1; i < a.values.size(); ++i)
            if (!(a.values[i] > a.values[i - 1]))
                throw ConfigError("surrogate axis '" + a.name + "' must be strictly increasing");
        count *= a.values.size();
    }
    if (nodes_.size() != count)
        throw ConfigError("geometry surrogate has " + std::to_string(nodes_.size()) +
                          " nodes, grid needs " + std::to_string(count));
    for (const auto& [pol, table] : nodes_.front()) polarizations_.push_back(pol);
    if (polarizations_.empty()) throw ConfigError("surrogate node carries no tables");
    const auto& ref = nodes_.front().begin()->second.samples();
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
        const auto& node = nodes_[k];
        if (node.size() != polarizations_.size())
            throw ConfigError("surrogate node " + std::to_string(k) +
                              " does not carry every polarization");
        for (const auto& pol : polarizations_) {
            auto it = node.find(pol);
            if (it == node.end())
                throw ConfigError("surrogate node " + std::to_string(k) + " lacks polarization '" +
                                  pol + "'");
            const auto& s = it->second.samples();
            if (s.size() != ref.size())
                throw ConfigError("surrogate node " + std::to_string(k) +
                                  ": tables must share one frequency sampling");
            for (std::size_t i = 0; i < s.size(); ++i)
                if (std::abs(s[i].omega - ref[i].omega) > 1e-9 * ref[i].omega)
                    throw ConfigError("surrogate node " + std::to_string(k) +
                                      ": tables must share one frequency sampling");
        }
    }
}

const std::map<std::string, DispersionTable>& GeometrySurrogate::node(
    std::span<const std::size_t> index) const {
    if (index.size() != axes_.size()) throw ContractError("surrogate node index rank mismatch");
    std::size_t flat = 0;
    for (std::size_t a = 0; a < axes_.size(); ++a) {
        if (index[a] >= axes_[a].values.size())
            throw ContractError("surrogate node index out of range");
        flat = flat * axes_[a].values.size() + index[a];
    }
    return nodes_[flat];
}

bool GeometrySurrogate::contains(const GeometryPoint& point) const {
    for (const auto& a : axes_) {
        auto it = point.find(a.name);
        if (it == point.end()) return false;
        if (!(it->second >= a.values.front() && it->second <= a.values.back())) return false;
    }
    return true;
}

std::map<std::string, DispersionTable> surrogate_dispersion(const GeometrySurrogate& surrogate,
                                                            const GeometryPoint& geometry) {
    const auto& axes = surrogate.axes_;
    const std::size_t rank = axes.size();
    for (const auto& [name, value] : geometry) {
        bool known = std::any_of(axes.begin(), axes.end(),
                                 [&](const GeometryAxis& a) { return a.name == name; });
        if (!known) throw ConfigError("surrogate has no geometry axis '" + name + "'");
    }
    std::vector<std::size_t> lower(rank);
    std::vector<double> frac(rank);
    std::ostringstream where;
    for (std::size_t a = 0; a < rank; ++a) {
        const auto& ax = axes[a];
        auto it = geometry.find(ax.name);
        if (it == geometry.end())
            throw ConfigError("geometry point lacks axis '" + ax.name + "'");
        const double x = it->second;
        if (!(x >= ax.values.front() && x <= ax.values.back()))
            throw RangeError("geometry " + ax.name + " = " + fmt(x) + " " + ax.unit +
                             " outside surrogate box [" + fmt(ax.values.front()) + ", " +
                             fmt(ax.values.back()) + "]");
        where << (a ? ", " : "") << ax.name << "=" << fmt(x);
        if (ax.values.size() == 1) {
            lower[a] = 0;
            frac[a] = 0.0;
            continue;
        }
        auto up = std::upper_bound(ax.values.begin(), ax.values.end(), x);
        std::size_t i = static_cast<std::size_t>(up - ax.values.begin());
        i = std::clamp<std::size_t>(i, 1, ax.values.size() - 1) - 1;
        lower[a] = i;
        frac[a] = (x - ax.values[i]) / (ax.values[i + 1] - ax.values[i]);
    }

    const auto& pols = surrogate.polarizations_;
    const std::size_t ns = surrogate.nodes_.front().begin()->second.samples().size();
    std::map<std::string, std::vector<double>> acc;
    for (const auto& p : pols) acc[p].assign(ns, 0.0);

    std::vector<std::size_t> idx(rank);
    for (std::size_t corner = 0; corner < (std::size_t{1} << rank); ++corner) {
        double w = 1.0;
        for (std::size_t a = 0; a < rank; ++a) {
            const bool hi = (corner >> a) & 1u;
            if (hi && axes[a].values.size() == 1) {
                w = 0.0;
                break;
            }
            w *= hi ? frac[a] : 1.0 - frac[a];
            idx[a] = lower[a] + (hi ? 1 : 0);
        }
        if (w == 0.0) continue;
        const auto& node = surrogate.node(idx);
        for (const auto& p : pols) {
            const auto& s = node.at(p).samples();
            auto& out = acc[p];
            for (std::size_t i = 0; i < ns; ++i) out[i] += w * s[i].n_eff;
        }
    }

    const auto& omega_ref = surrogate.nodes_.front().begin()->second.samples();
    std::map<std::string, DispersionTable> result;
    for (const auto& p : pols) {
        std::vector<DispersionSample> samples(ns);
        for (std::size_t i = 0; i < ns; ++i) samples[i] = {omega_ref[i].omega, acc[p][i]};
        result.emplace(p, DispersionTable(std::move(samples), p,
                                          "surrogate interpolation at " + where.str()));
    }
    return result;
}

double effective_index(const IndexModel& model, double omega) {
    struct Visitor {
        double omega;
        double operator()(const SellmeierSet& s) const { return refractive_index(s, omega); }
        double operator()(const MetallicIndex& m) const {
            return metallic_effective_index(m.core, m.width_um, m.height_um, omega);
        }
        double operator()(const DispersionTable& t) const { return t.effective_index(omega); }
    };
    return std::visit(Visitor{omega}, model);
}

std::string describe(const IndexModel& model) {
    struct Visitor {
        std::string operator()(const SellmeierSet& s) const { return "bulk " + s.name; }
        std::string operator()(const MetallicIndex& m) const {
            return "metallic " + fmt(m.width_um) + "x" + fmt(m.height_um) + " um on " + m.core.name;
        }
        std::string operator()(const DispersionTable& t) const {
            return "table " + t.polarization_label() +
                   (t.provenance().empty() ? "" : " (" + t.provenance() + ")");
        }
    };
    return std::visit(Visitor{}, model);
}

const IndexModel& DispersionModel::curve(const std::string& pol) const {
    auto it = curves.find(pol);
    if (it == curves.end())
        throw ConfigError("dispersion model '" + name + "' has no polarization '" + pol + "'");
    return it->second;
}

double wavevector(const IndexModel& model, double omega) {
    const double k = effective_index(model, omega) * omega / kSpeedOfLight;
    if (!(k > 0.0) || !std::isfinite(k)) throw NumericalError("non-positive wavevector");
    return k;
}

double wavevector(const DispersionModel& model, double omega, const std::string& pol) {
    return wavevector(model.curve(pol), omega);
}

}  // namespace qmodes
