#pragma once

// Frequency- and polarization-dependent refractive indices.
//
// Three index models are supported: bulk Sellmeier sets, the metallic
// (perfectly conducting) rectangular waveguide built on a bulk set, and
// tabulated n_eff(omega) curves, optionally interpolated across waveguide
// geometry by a GeometrySurrogate. Every object here is immutable after
// construction and safe to share between threads.

#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qmodes {

enum class SellmeierForm {
    Constant,         // n = c0
    Sellmeier,        // n^2 = A + sum_i B_i l^2 / (l^2 - C_i);      [A, B1, C1, ...]
    PoleExpansion,    // n^2 = A - D l^2 + sum_i B_i / (l^2 - C_i);  [A, D, B1, C1, ...]
    EdwardsLawrence,  // congruent LN, published 7-coefficient form at 25 C
    Jundt,            // congruent LN extraordinary, published 10-coefficient form at 25 C
};

std::string to_string(SellmeierForm form);
SellmeierForm sellmeier_form_from_string(const std::string& name);

struct SellmeierSet {
    std::string name;
    SellmeierForm form = SellmeierForm::Constant;
    std::vector<double> coefficients;
    double min_um = 0.0;  // valid wavelength range, micrometres
    double max_um = 0.0;
    std::string provenance;
};

// Throws ConfigError when the coefficient count does not match the form,
// the range is empty, or the set leaves 1 < n < 5 anywhere inside its range.
void validate(const SellmeierSet& set);

SellmeierSet constant_index_set(double n, std::string name = "constant");

// Range-checked evaluation. Throws RangeError naming the set outside valid_range.
double index_at_wavelength_um(const SellmeierSet& set, double wavelength_um);
double refractive_index(const SellmeierSet& set, double omega);

// Fundamental mode of a perfectly conducting w x h rectangular guide filled
// with the core material: one half-wave across each transverse axis.
struct MetallicGuide {
    double width_um = 0.0;
    double height_um = 0.0;
    std::map<std::string, SellmeierSet> core;  // polarization label -> core index
};

// n_eff = sqrt(n^2 - (pi c / (omega w))^2 - (pi c / (omega h))^2); CutoffError below cutoff.
double metallic_effective_index(const SellmeierSet& core, double width_um, double height_um,
                                double omega);
double metallic_effective_index(const MetallicGuide& guide, double omega, const std::string& pol);

struct DispersionSample {
    double omega = 0.0;  // rad/s
    double n_eff = 0.0;
};

// Tabulated n_eff(omega) with natural cubic spline interpolation.
class DispersionTable {
public:
    DispersionTable(std::vector<DispersionSample> samples, std::string polarization_label,
                    std::string provenance = {});

    double effective_index(double omega) const;

    const std::vector<DispersionSample>& samples() const { return samples_; }
    const std::string& polarization_label() const { return polarization_label_; }
    const std::string& provenance() const { return provenance_; }
    double omega_min() const { return samples_.front().omega; }
    double omega_max() const { return samples_.back().omega; }

private:
    struct Spline;
    std::vector<DispersionSample> samples_;
    std::string polarization_label_;
    std::string provenance_;
    std::shared_ptr<const Spline> spline_;
};

double tabulated_effective_index(const DispersionTable& table, double omega);

struct GeometryAxis {
    std::string name;  // D, h, g, phi, ...
    std::string unit;  // nm, deg
    std::vector<double> values;
};

using GeometryPoint = std::map<std::string, double>;

// Rectilinear grid of geometry points, each carrying one DispersionTable per
// polarization label. All tables share one frequency sampling.
class GeometrySurrogate {
public:
    // nodes are row-major over axes (last axis fastest).
    GeometrySurrogate(std::vector<GeometryAxis> axes,
                      std::vector<std::map<std::string, DispersionTable>> nodes,
                      std::string provenance = {});

    const std::vector<GeometryAxis>& axes() const { return axes_; }
    const std::vector<std::string>& polarizations() const { return polarizations_; }
    const std::string& provenance() const { return provenance_; }
    std::size_t node_count() const { return nodes_.size(); }
    const std::map<std::string, DispersionTable>& node(std::span<const std::size_t> index) const;

    bool contains(const GeometryPoint& point) const;

private:
    friend std::map<std::string, DispersionTable> surrogate_dispersion(const GeometrySurrogate&,
                                                                      const GeometryPoint&);
    std::vector<GeometryAxis> axes_;
    std::vector<std::map<std::string, DispersionTable>> nodes_;
    std::vector<std::string> polarizations_;
    std::string provenance_;
};

// Multilinear interpolation across geometry axes, frequency-wise.
// Throws RangeError outside the grid's bounding box.
std::map<std::string, DispersionTable> surrogate_dispersion(const GeometrySurrogate& surrogate,
                                                            const GeometryPoint& geometry);

struct MetallicIndex {
    SellmeierSet core;
    double width_um = 0.0;
    double height_um = 0.0;
};

// One resolved index curve n_eff(omega).
using IndexModel = std::variant<SellmeierSet, MetallicIndex, DispersionTable>;

double effective_index(const IndexModel& model, double omega);
std::string describe(const IndexModel& model);

// Named material model: polarization label -> index curve.
struct DispersionModel {
    std::string name;
    std::map<std::string, IndexModel> curves;

    const IndexModel& curve(const std::string& pol) const;
};

// k = n_eff(omega) * omega / c, rad/m.
double wavevector(const IndexModel& model, double omega);
double wavevector(const DispersionModel& model, double omega, const std::string& pol);

}  // namespace qmodes
