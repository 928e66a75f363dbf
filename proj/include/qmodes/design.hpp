#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qmodes/config.hpp"
#include "qmodes/optimizer.hpp"
#include "qmodes/process.hpp"
#include "qmodes/quantum.hpp"

namespace qmodes {

// Parameter overrides applied on top of a config. Recognized names:
//   width_um, height_um (metallic), length_mm, pump_width_nm, geometry.<axis>.
using Overrides = std::map<std::string, double>;

bool is_override_name(const std::string& name);

// Resolves a RunConfig into library objects. Sellmeier sets, tables and the
// surrogate are loaded once at construction.
class Design {
public:
    explicit Design(RunConfig cfg);

    const RunConfig& config() const { return cfg_; }

    // Index curve per polarization label (H, V).
    DispersionModel dispersion(const Overrides& o = {}) const;

    // Process with fields bound to their curves. A configured poling period is
    // used as given unless overrides touch the dispersion or length; otherwise
    // the period is solved at the centres.
    ProcessSpec process(const Overrides& o = {}) const;
    PolingResult poling(const Overrides& o = {}) const;

    PumpSpec pump(const ProcessSpec& process, int order, const Overrides& o = {}) const;

    // Config windows where given, auto windows otherwise.
    FrequencyGrid grid(const ProcessSpec& process, const PumpSpec& pump, std::size_t n_a,
                       std::size_t n_b) const;
    FrequencyGrid grid(const ProcessSpec& process, const PumpSpec& pump) const;

    SpectralAmplitude amplitude(int order, const Overrides& o = {}) const;
    SpectralAmplitude amplitude(int order, const Overrides& o, std::size_t n_a, std::size_t n_b,
                                unsigned threads) const;

    // Input basis on the signal axis. The default HG width is the pump's
    // frequency bandwidth expressed in nm at the signal centre.
    InputStateSpec input_state(const ProcessSpec& process, const Overrides& o = {}) const;
    double default_basis_width_nm(const ProcessSpec& process, const Overrides& o = {}) const;

    std::optional<FilterSpec> filter(const ProcessSpec& process) const;

    Overrides decode(const std::vector<double>& genes) const;
    EvalContext eval_context() const;

private:
    IndexModel curve(const std::string& pol, const Overrides& o) const;

    RunConfig cfg_;
    std::map<std::string, SellmeierSet> sellmeier_;  // H/V
    std::map<std::string, DispersionTable> tables_;  // label
    std::optional<GeometrySurrogate> surrogate_;
};

}  // namespace qmodes
