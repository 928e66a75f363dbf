#include "qmodes/design.hpp"

#include <cmath>

#include "qmodes/dispersion_io.hpp"
#include "qmodes/errors.hpp"
#include "qmodes/units.hpp"

namespace qmodes {

namespace {

const std::map<std::string, std::map<std::string, std::string>> kMaterialDefaults = {
    {"KTP", {{"H", "ktp_y_kato2002"}, {"V", "ktp_z_kato2002"}}},
    {"LN", {{"H", "ln_o_edwards1984"}, {"V", "ln_e_jundt1997"}}},
};

const std::map<std::string, std::string> kModeLabelDefaults = {{"H", "TE"}, {"V", "TM"}};

bool ends_with(const std::string& s, const std::string& tail) {
    return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
}

std::string mapped(const ModelConfig& m, const std::string& pol,
                   const std::map<std::string, std::string>& defaults) {
    auto it = m.polarization_map.find(pol);
    if (it != m.polarization_map.end()) return it->second;
    auto d = defaults.find(pol);
    if (d == defaults.end())
        throw ConfigError("no index curve for polarization '" + pol + "' in model '" + m.type + "'");
    return d->second;
}

double get(const Overrides& o, const std::string& key, double fallback) {
    auto it = o.find(key);
    return it == o.end() ? fallback : it->second;
}

bool touches_dispersion(const Overrides& o) {
    for (const auto& [k, v] : o)
        if (k != "pump_width_nm") return true;
    return false;
}

double nm_to_omega(double nm) { return omega_from_wavelength_nm(nm); }

}  // namespace

bool is_override_name(const std::string& name) {
    return name == "width_um" || name == "height_um" || name == "length_mm" ||
           name == "pump_width_nm" || (name.rfind("geometry.", 0) == 0 && name.size() > 9);
}

Design::Design(RunConfig cfg) : cfg_(std::move(cfg)) {
    const ModelConfig& m = cfg_.process.model;
    if (m.type == "bulk" || m.type == "metallic") {
        std::map<std::string, std::string> defaults;
        if (auto it = kMaterialDefaults.find(m.material); it != kMaterialDefaults.end())
            defaults = it->second;
        for (const std::string pol : {"H", "V"}) {
            std::string name;
            try {
                name = mapped(m, pol, defaults);
            } catch (const ConfigError&) {
                continue;
            }
            sellmeier_.emplace(pol, ends_with(name, ".json")
                                        ? load_sellmeier_json(resolve_path(cfg_, name))
                                        : bundled_sellmeier(name));
        }
    } else if (m.type == "tables") {
        for (const auto& [label, path] : m.tables)
            tables_.emplace(label, load_dispersion_table_csv(resolve_path(cfg_, path), label));
    } else if (m.type == "surrogate") {
        surrogate_ = load_geometry_surrogate(resolve_path(cfg_, m.surrogate));
        for (const auto& [axis, value] : m.geometry) {
            bool known = false;
            for (const auto& a : surrogate_->axes()) known = known || a.name == axis;
            if (!known) throw ConfigError("surrogate has no geometry axis '" + axis + "'");
        }
    }
    if (cfg_.ga) {
        for (const auto& g : cfg_.ga->ga.genome) {
            if (!is_override_name(g.name))
                throw ConfigError("gene '" + g.name +
                                  "' is not a tunable parameter (width_um, height_um, length_mm, "
                                  "pump_width_nm, geometry.<axis>)");
            if (g.name.rfind("geometry.", 0) == 0 && m.type != "surrogate")
                throw ConfigError("gene '" + g.name + "' needs a surrogate model");
            if ((g.name == "width_um" || g.name == "height_um") && m.type != "metallic")
                throw ConfigError("gene '" + g.name + "' needs a metallic model");
        }
    }
    // Resolve every field once so bad polarization maps fail before any work.
    process();
}

IndexModel Design::curve(const std::string& pol, const Overrides& o) const {
    const ModelConfig& m = cfg_.process.model;
    if (m.type == "constant") {
        auto it = m.constant_index.find(pol);
        if (it == m.constant_index.end())
            throw ConfigError("constant model has no index for polarization '" + pol + "'");
        return constant_index_set(it->second, "constant " + pol);
    }
    if (m.type == "bulk" || m.type == "metallic") {
        auto it = sellmeier_.find(pol);
        if (it == sellmeier_.end())
            throw ConfigError("material '" + m.material + "' has no curve for polarization '" + pol + "'");
        if (m.type == "bulk") return it->second;
        return MetallicIndex{it->second, get(o, "width_um", m.width_um), get(o, "height_um", m.height_um)};
    }
    const std::string label = mapped(m, pol, kModeLabelDefaults);
    if (m.type == "tables") {
        auto it = tables_.find(label);
        if (it == tables_.end()) throw ConfigError("no dispersion table labelled '" + label + "'");
        return it->second;
    }
    GeometryPoint point = m.geometry;
    for (const auto& [k, v] : o)
        if (k.rfind("geometry.", 0) == 0) point[k.substr(9)] = v;
    for (const auto& a : surrogate_->axes())
        if (!point.count(a.name)) throw ConfigError("geometry misses axis '" + a.name + "'");
    auto tables = surrogate_dispersion(*surrogate_, point);
    auto it = tables.find(label);
    if (it == tables.end()) throw ConfigError("surrogate has no polarization '" + label + "'");
    return it->second;
}

DispersionModel Design::dispersion(const Overrides& o) const {
    DispersionModel model;
    model.name = cfg_.process.model.type;
    for (const std::string pol : {"H", "V"}) {
        try {
            model.curves.emplace(pol, curve(pol, o));
        } catch (const ConfigError&) {
        }
    }
    return model;
}

ProcessSpec Design::process(const Overrides& o) const {
    const ProcessConfig& p = cfg_.process;
    const bool spa = p.kind == ProcessKind::SPA_PDC;
    ProcessSpec s;
    s.kind = p.kind;
    s.nl_type = p.nl_type;
    s.length_m = get(o, "length_mm", p.length_mm) * 1e-3;
    auto field = [&](const FieldConfig& f, const char* role) {
        FieldSpec out;
        out.role = role;
        out.polarization = f.polarization;
        out.wavelength_m = *f.wavelength_nm * 1e-9;
        out.index = curve(f.polarization, o);
        return out;
    };
    s.signal = field(p.signal, "signal");
    s.partner = field(p.partner, spa ? "idler" : "upconverted");
    s.drive = field(p.drive, spa ? "pump" : "gate");
    validate(s);
    if (p.poling_period_um && !touches_dispersion(o)) {
        s.poling_period_m = *p.poling_period_um * 1e-6;
        const double dk0 = unpoled_delta_k(s, s.signal.omega(), s.partner.omega());
        s.poling_sign = dk0 < 0.0 ? -1 : +1;
        return s;
    }
    return with_solved_poling(s);
}

PolingResult Design::poling(const Overrides& o) const {
    ProcessSpec s = process(o);
    s.poling_period_m.reset();
    return solve_poling(s);
}

PumpSpec Design::pump(const ProcessSpec& process, int order, const Overrides& o) const {
    PumpSpec p;
    p.center_omega = process.drive.omega();
    p.width_fwhm_nm = get(o, "pump_width_nm", cfg_.pump.width_nm);
    p.order = order;
    validate(p);
    return p;
}

FrequencyGrid Design::grid(const ProcessSpec& process, const PumpSpec& pump, std::size_t n_a,
                           std::size_t n_b) const {
    const GridConfig& g = cfg_.grid;
    if (g.signal_nm && g.partner_nm)
        return FrequencyGrid::uniform(nm_to_omega((*g.signal_nm)[1]), nm_to_omega((*g.signal_nm)[0]), n_a,
                                      nm_to_omega((*g.partner_nm)[1]), nm_to_omega((*g.partner_nm)[0]), n_b);
    FrequencyGrid autog = auto_grid(process, pump, n_a, n_b);
    double a_lo = autog.axis_a.front(), a_hi = autog.axis_a.back();
    double b_lo = autog.axis_b.front(), b_hi = autog.axis_b.back();
    if (g.signal_nm) {
        a_lo = nm_to_omega((*g.signal_nm)[1]);
        a_hi = nm_to_omega((*g.signal_nm)[0]);
    }
    if (g.partner_nm) {
        b_lo = nm_to_omega((*g.partner_nm)[1]);
        b_hi = nm_to_omega((*g.partner_nm)[0]);
    }
    return FrequencyGrid::uniform(a_lo, a_hi, n_a, b_lo, b_hi, n_b);
}

FrequencyGrid Design::grid(const ProcessSpec& process, const PumpSpec& pump) const {
    return grid(process, pump, cfg_.grid.n_signal, cfg_.grid.n_partner);
}

SpectralAmplitude Design::amplitude(int order, const Overrides& o) const {
    return amplitude(order, o, cfg_.grid.n_signal, cfg_.grid.n_partner, cfg_.grid.threads);
}

SpectralAmplitude Design::amplitude(int order, const Overrides& o, std::size_t n_a, std::size_t n_b,
                                    unsigned threads) const {
    const ProcessSpec s = process(o);
    const PumpSpec p = pump(s, order, o);
    return build_amplitude(s, p, grid(s, p, n_a, n_b), threads);
}

double Design::default_basis_width_nm(const ProcessSpec& process, const Overrides& o) const {
    const double pump_width = get(o, "pump_width_nm", cfg_.pump.width_nm);
    const double d_omega = omega_width_from_wavelength_width(pump_width * 1e-9, process.drive.wavelength_m);
    return wavelength_width_from_omega_width(d_omega, process.signal.wavelength_m) * 1e9;
}

InputStateSpec Design::input_state(const ProcessSpec& process, const Overrides& o) const {
    const InputConfig& in = cfg_.input_state;
    InputStateSpec spec;
    const double center = in.center_nm ? nm_to_omega(*in.center_nm) : process.signal.omega();
    const double width = in.width_nm ? *in.width_nm : default_basis_width_nm(process, o);
    for (int order : in.orders) spec.basis.push_back({order, center, width});
    spec.nbar = in.nbar;
    spec.xi = in.xi;
    validate(spec);
    return spec;
}

std::optional<FilterSpec> Design::filter(const ProcessSpec& process) const {
    if (!cfg_.filter) return std::nullopt;
    const FilterConfig& f = *cfg_.filter;
    FilterSpec out;
    out.shape = f.shape;
    out.first_bin = f.first_bin;
    out.last_bin = f.last_bin;
    if (f.shape != FilterShape::Bins) {
        const double center_nm = f.center_nm ? *f.center_nm : process.partner.wavelength_m * 1e9;
        out.center_omega = nm_to_omega(center_nm);
        out.width_omega = omega_width_from_wavelength_width(f.width_nm * 1e-9, center_nm * 1e-9);
    }
    return out;
}

Overrides Design::decode(const std::vector<double>& genes) const {
    if (!cfg_.ga) throw ContractError("decode without a ga section");
    const auto& genome = cfg_.ga->ga.genome;
    if (genes.size() != genome.size()) throw ContractError("genome length mismatch");
    Overrides o;
    for (std::size_t i = 0; i < genes.size(); ++i) o[genome[i].name] = genes[i];
    return o;
}

EvalContext Design::eval_context() const {
    if (!cfg_.ga) throw ContractError("eval_context without a ga section");
    EvalContext ctx;
    ctx.mode = cfg_.ga->ga.fitness_mode;
    const std::size_t n = cfg_.ga->fitness_grid;
    ctx.schmidt_number = [this, n](const std::vector<double>& genes, int order) {
        return schmidt_number_fast(amplitude(order, decode(genes), n, n, 1));
    };
    return ctx;
}

}  // namespace qmodes
