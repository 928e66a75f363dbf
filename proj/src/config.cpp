#include "qmodes/config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qmodes/errors.hpp"

namespace qmodes {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class Reader {
public:
    Reader(const std::string& text, const std::string& source) : text_(text), source_(source) {}

    [[noreturn]] void fail(const std::vector<std::string>& path, const std::string& msg) const {
        std::string joined;
        for (const auto& p : path) joined += (joined.empty() ? "" : ".") + p;
        const int line = line_of(path);
        throw ConfigError(source_ + (line > 0 ? ":" + std::to_string(line) : std::string{}) + ": " +
                          (joined.empty() ? "" : joined + ": ") + msg);
    }

    void keys(const json& obj, const std::vector<std::string>& path,
              std::initializer_list<const char*> allowed) const {
        if (!obj.is_object()) fail(path, "expected an object");
        for (const auto& [key, value] : obj.items()) {
            bool ok = false;
            for (const char* a : allowed) ok = ok || key == a;
            if (!ok) {
                auto p = path;
                p.push_back(key);
                fail(p, "unknown key");
            }
        }
    }

    const json* find(const json& obj, const char* key) const {
        auto it = obj.find(key);
        return it == obj.end() ? nullptr : &*it;
    }

    const json& need(const json& obj, const std::vector<std::string>& path, const char* key) const {
        const json* v = find(obj, key);
        if (!v) fail(path, std::string("missing required key '") + key + "'");
        return *v;
    }

    double number(const json& v, const std::vector<std::string>& path) const {
        if (!v.is_number()) fail(path, "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail(path, "expected a finite number");
        return d;
    }

    double positive(const json& v, const std::vector<std::string>& path) const {
        const double d = number(v, path);
        if (!(d > 0.0)) fail(path, "must be positive");
        return d;
    }

    long integer(const json& v, const std::vector<std::string>& path) const {
        if (!v.is_number_integer()) fail(path, "expected an integer");
        return v.get<long>();
    }

    std::string string(const json& v, const std::vector<std::string>& path) const {
        if (!v.is_string()) fail(path, "expected a string");
        return v.get<std::string>();
    }

    bool boolean(const json& v, const std::vector<std::string>& path) const {
        if (!v.is_boolean()) fail(path, "expected true or false");
        return v.get<bool>();
    }

    std::vector<double> numbers(const json& v, const std::vector<std::string>& path) const {
        if (!v.is_array()) fail(path, "expected an array of numbers");
        std::vector<double> out;
        for (const auto& e : v) out.push_back(number(e, path));
        return out;
    }

    std::array<double, 2> range(const json& v, const std::vector<std::string>& path) const {
        const auto r = numbers(v, path);
        if (r.size() != 2 || !(r[0] > 0.0) || !(r[1] > r[0]))
            fail(path, "expected [low, high] with 0 < low < high");
        return {r[0], r[1]};
    }

private:
    int line_of(const std::vector<std::string>& path) const {
        std::size_t pos = 0;
        bool any = false;
        for (const auto& p : path) {
            const auto hit = text_.find("\"" + p + "\"", pos);
            if (hit == std::string::npos) break;
            pos = hit;
            any = true;
        }
        if (!any) return 0;
        return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<long>(pos), '\n'));
    }

    const std::string& text_;
    const std::string& source_;
};

using Path = std::vector<std::string>;

Path sub(Path p, const std::string& k) {
    p.push_back(k);
    return p;
}

FieldConfig parse_field(const Reader& r, const json& j, const Path& path) {
    r.keys(j, path, {"polarization", "wavelength_nm"});
    FieldConfig f;
    f.polarization = r.string(r.need(j, path, "polarization"), sub(path, "polarization"));
    if (f.polarization != "H" && f.polarization != "V")
        r.fail(sub(path, "polarization"), "expected H or V");
    if (const json* w = r.find(j, "wavelength_nm"))
        f.wavelength_nm = r.positive(*w, sub(path, "wavelength_nm"));
    return f;
}

ModelConfig parse_model(const Reader& r, const json& j, const Path& path) {
    r.keys(j, path, {"type", "material", "polarization_map", "width_um", "height_um", "tables",
                     "surrogate", "geometry", "constant_index"});
    ModelConfig m;
    m.type = r.string(r.need(j, path, "type"), sub(path, "type"));
    static const char* const kTypes[] = {"constant", "bulk", "metallic", "tables", "surrogate"};
    if (std::none_of(std::begin(kTypes), std::end(kTypes), [&](const char* t) { return m.type == t; }))
        r.fail(sub(path, "type"), "expected one of constant, bulk, metallic, tables, surrogate");
    if (const json* v = r.find(j, "material")) m.material = r.string(*v, sub(path, "material"));
    if (const json* v = r.find(j, "polarization_map")) {
        if (!v->is_object()) r.fail(sub(path, "polarization_map"), "expected an object");
        for (const auto& [k, val] : v->items()) {
            if (k != "H" && k != "V") r.fail(sub(sub(path, "polarization_map"), k), "expected H or V");
            m.polarization_map[k] = r.string(val, sub(sub(path, "polarization_map"), k));
        }
    }
    if (m.type == "metallic") {
        m.width_um = r.positive(r.need(j, path, "width_um"), sub(path, "width_um"));
        m.height_um = r.positive(r.need(j, path, "height_um"), sub(path, "height_um"));
    } else if (r.find(j, "width_um") || r.find(j, "height_um")) {
        r.fail(sub(path, "width_um"), "only the metallic model takes width_um / height_um");
    }
    if (m.type == "bulk" || m.type == "metallic") {
        m.material = r.string(r.need(j, path, "material"), sub(path, "material"));
        if (m.material != "KTP" && m.material != "LN" && m.polarization_map.size() < 2)
            r.fail(sub(path, "material"),
                   "unknown material; give polarization_map entries for H and V");
    }
    if (m.type == "tables") {
        const json& t = r.need(j, path, "tables");
        if (!t.is_object() || t.empty()) r.fail(sub(path, "tables"), "expected {label: csv path}");
        for (const auto& [k, val] : t.items()) m.tables[k] = r.string(val, sub(sub(path, "tables"), k));
    }
    if (m.type == "surrogate") {
        m.surrogate = r.string(r.need(j, path, "surrogate"), sub(path, "surrogate"));
        const json& g = r.need(j, path, "geometry");
        if (!g.is_object()) r.fail(sub(path, "geometry"), "expected {axis: value}");
        for (const auto& [k, val] : g.items()) m.geometry[k] = r.number(val, sub(sub(path, "geometry"), k));
    }
    if (m.type == "constant") {
        const json& c = r.need(j, path, "constant_index");
        if (!c.is_object()) r.fail(sub(path, "constant_index"), "expected {H: n, V: n}");
        for (const auto& [k, val] : c.items()) {
            if (k != "H" && k != "V") r.fail(sub(sub(path, "constant_index"), k), "expected H or V");
            const double n = r.number(val, sub(sub(path, "constant_index"), k));
            if (!(n > 1.0 && n < 5.0)) r.fail(sub(sub(path, "constant_index"), k), "expected 1 < n < 5");
            m.constant_index[k] = n;
        }
    }
    return m;
}

ProcessConfig parse_process(const Reader& r, const json& j, const Path& path) {
    r.keys(j, path, {"kind", "nl_type", "length_mm", "poling_period_um", "model", "fields"});
    ProcessConfig p;
    try {
        p.kind = process_kind_from_string(r.string(r.need(j, path, "kind"), sub(path, "kind")));
    } catch (const ConfigError& e) {
        r.fail(sub(path, "kind"), e.what());
    }
    try {
        p.nl_type = nonlinear_type_from_string(r.string(r.need(j, path, "nl_type"), sub(path, "nl_type")));
    } catch (const ConfigError& e) {
        r.fail(sub(path, "nl_type"), e.what());
    }
    p.length_mm = r.positive(r.need(j, path, "length_mm"), sub(path, "length_mm"));
    if (const json* v = r.find(j, "poling_period_um"))
        p.poling_period_um = r.positive(*v, sub(path, "poling_period_um"));
    p.model = parse_model(r, r.need(j, path, "model"), sub(path, "model"));

    const Path fp = sub(path, "fields");
    const json& f = r.need(j, path, "fields");
    const bool spa = p.kind == ProcessKind::SPA_PDC;
    const char* partner = spa ? "idler" : "upconverted";
    const char* drive = spa ? "pump" : "gate";
    if (spa) r.keys(f, fp, {"signal", "idler", "pump"});
    else r.keys(f, fp, {"signal", "upconverted", "gate"});
    p.signal = parse_field(r, r.need(f, fp, "signal"), sub(fp, "signal"));
    p.partner = parse_field(r, r.need(f, fp, partner), sub(fp, partner));
    p.drive = parse_field(r, r.need(f, fp, drive), sub(fp, drive));

    // 1/lambda adds like frequency: SPA pump = signal + idler, SPS up = signal + gate.
    auto inv = [](const std::optional<double>& w) { return w ? 1.0 / *w : 0.0; };
    int missing = !p.signal.wavelength_nm + !p.partner.wavelength_nm + !p.drive.wavelength_nm;
    if (missing > 1) r.fail(fp, "at most one field may omit wavelength_nm");
    FieldConfig& sum = spa ? p.drive : p.partner;
    FieldConfig& other = spa ? p.partner : p.drive;
    if (!sum.wavelength_nm) {
        sum.wavelength_nm = 1.0 / (inv(p.signal.wavelength_nm) + inv(other.wavelength_nm));
    } else if (!p.signal.wavelength_nm || !other.wavelength_nm) {
        FieldConfig& gap = p.signal.wavelength_nm ? other : p.signal;
        const FieldConfig& known = p.signal.wavelength_nm ? p.signal : other;
        const double x = inv(sum.wavelength_nm) - inv(known.wavelength_nm);
        if (!(x > 0.0)) r.fail(fp, "field wavelengths cannot conserve energy");
        gap.wavelength_nm = 1.0 / x;
    } else {
        const double lhs = inv(sum.wavelength_nm);
        const double rhs = inv(p.signal.wavelength_nm) + inv(other.wavelength_nm);
        if (std::abs(lhs - rhs) > 1e-12 * lhs)
            r.fail(fp, "field wavelengths violate energy conservation");
    }
    return p;
}

std::vector<int> orders_from(const Reader& r, const json& v, const Path& path) {
    if (!v.is_array() || v.empty()) r.fail(path, "expected a non-empty array of HG orders");
    std::vector<int> out;
    for (const auto& e : v) {
        const long o = r.integer(e, path);
        if (o < 0 || o > kMaxHermiteOrder) r.fail(path, "HG order out of range [0, 10]");
        out.push_back(static_cast<int>(o));
    }
    return out;
}

GeneSpec parse_gene(const Reader& r, const json& j, const Path& path) {
    r.keys(j, path, {"name", "mean", "sigma", "min", "max", "unit"});
    GeneSpec g;
    g.name = r.string(r.need(j, path, "name"), sub(path, "name"));
    g.mean = r.number(r.need(j, path, "mean"), sub(path, "mean"));
    g.sigma = r.positive(r.need(j, path, "sigma"), sub(path, "sigma"));
    g.min = r.number(r.need(j, path, "min"), sub(path, "min"));
    if (const json* v = r.find(j, "max")) g.max = r.number(*v, sub(path, "max"));
    if (const json* v = r.find(j, "unit")) g.unit = r.string(*v, sub(path, "unit"));
    return g;
}

GARunConfig parse_ga(const Reader& r, const json& j, const Path& path) {
    r.keys(j, path, {"population", "generations", "mutation_rate", "crossover_spread", "seed",
                     "fitness", "threads", "fitness_grid", "genes"});
    GARunConfig out;
    GAConfig& g = out.ga;
    if (const json* v = r.find(j, "population")) g.population = static_cast<int>(r.integer(*v, sub(path, "population")));
    if (const json* v = r.find(j, "generations")) g.generations = static_cast<int>(r.integer(*v, sub(path, "generations")));
    if (const json* v = r.find(j, "mutation_rate")) g.mutation_rate = r.number(*v, sub(path, "mutation_rate"));
    if (const json* v = r.find(j, "crossover_spread")) g.crossover_spread = r.number(*v, sub(path, "crossover_spread"));
    if (const json* v = r.find(j, "seed")) {
        if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long>() >= 0))
            r.fail(sub(path, "seed"), "expected a non-negative integer");
        g.seed = v->get<std::uint64_t>();
    }
    if (const json* v = r.find(j, "fitness")) {
        try {
            g.fitness_mode = fitness_mode_from_string(r.string(*v, sub(path, "fitness")));
        } catch (const ConfigError& e) {
            r.fail(sub(path, "fitness"), e.what());
        }
    }
    if (const json* v = r.find(j, "threads")) {
        const long t = r.integer(*v, sub(path, "threads"));
        if (t < 1) r.fail(sub(path, "threads"), "must be at least 1");
        g.threads = static_cast<unsigned>(t);
    }
    if (const json* v = r.find(j, "fitness_grid")) {
        const long n = r.integer(*v, sub(path, "fitness_grid"));
        if (n < 16) r.fail(sub(path, "fitness_grid"), "must be at least 16");
        out.fitness_grid = static_cast<std::size_t>(n);
    }
    const json& genes = r.need(j, path, "genes");
    if (!genes.is_array() || genes.empty()) r.fail(sub(path, "genes"), "expected a non-empty array");
    for (std::size_t i = 0; i < genes.size(); ++i)
        g.genome.push_back(parse_gene(r, genes[i], sub(path, "genes")));
    try {
        validate(g);
    } catch (const InfeasibleBoundsError& e) {
        r.fail(path, e.what());
    } catch (const ConfigError& e) {
        r.fail(path, e.what());
    }
    return out;
}

json field_json(const FieldConfig& f) {
    json j = {{"polarization", f.polarization}};
    if (f.wavelength_nm) j["wavelength_nm"] = *f.wavelength_nm;
    return j;
}

std::string filter_shape_name(FilterShape s) {
    switch (s) {
        case FilterShape::Rect: return "rect";
        case FilterShape::Gaussian: return "gaussian";
        case FilterShape::Bins: return "bins";
    }
    return "?";
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const std::string& source,
                           const fs::path& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto upto = std::min<std::size_t>(e.byte, text.size());
        const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n'));
        throw ConfigError(source + ":" + std::to_string(line) + ": malformed JSON (" + e.what() + ")");
    }
    const Reader r(text, source);
    const Path root;
    r.keys(j, root, {"notes", "reference", "process", "pump", "grid", "input_state", "filter", "ga",
                     "output", "dispersion_scan"});
    RunConfig cfg;
    cfg.source = source;
    cfg.base_dir = base_dir;
    if (const json* v = r.find(j, "notes")) {
        if (v->is_string()) cfg.notes = v->get<std::string>();
        else if (v->is_array()) {
            for (const auto& e : *v) cfg.notes += (cfg.notes.empty() ? "" : "\n") + r.string(e, {"notes"});
        } else r.fail({"notes"}, "expected a string or array of strings");
    }
    if (const json* v = r.find(j, "reference")) cfg.reference_json = v->dump();

    cfg.process = parse_process(r, r.need(j, root, "process"), {"process"});

    {
        const Path p{"pump"};
        const json& pj = r.need(j, root, "pump");
        r.keys(pj, p, {"width_nm", "order", "orders"});
        cfg.pump.width_nm = r.positive(r.need(pj, p, "width_nm"), sub(p, "width_nm"));
        if (const json* v = r.find(pj, "order")) {
            const long o = r.integer(*v, sub(p, "order"));
            if (o < 0 || o > kMaxHermiteOrder) r.fail(sub(p, "order"), "HG order out of range [0, 10]");
            cfg.pump.order = static_cast<int>(o);
        }
        if (const json* v = r.find(pj, "orders")) cfg.pump.orders = orders_from(r, *v, sub(p, "orders"));
    }
    if (const json* gj = r.find(j, "grid")) {
        const Path p{"grid"};
        r.keys(*gj, p, {"n_signal", "n_partner", "signal_nm", "partner_nm", "threads"});
        auto size = [&](const char* key, std::size_t& out) {
            if (const json* v = r.find(*gj, key)) {
                const long n = r.integer(*v, sub(p, key));
                if (n < 2 || n > 8192) r.fail(sub(p, key), "grid size must lie in [2, 8192]");
                out = static_cast<std::size_t>(n);
            }
        };
        size("n_signal", cfg.grid.n_signal);
        size("n_partner", cfg.grid.n_partner);
        if (const json* v = r.find(*gj, "signal_nm")) cfg.grid.signal_nm = r.range(*v, sub(p, "signal_nm"));
        if (const json* v = r.find(*gj, "partner_nm")) cfg.grid.partner_nm = r.range(*v, sub(p, "partner_nm"));
        if (const json* v = r.find(*gj, "threads")) {
            const long t = r.integer(*v, sub(p, "threads"));
            if (t < 1) r.fail(sub(p, "threads"), "must be at least 1");
            cfg.grid.threads = static_cast<unsigned>(t);
        }
    }
    if (const json* ij = r.find(j, "input_state")) {
        const Path p{"input_state"};
        r.keys(*ij, p, {"orders", "nbar", "xi", "width_nm", "center_nm"});
        if (const json* v = r.find(*ij, "orders")) cfg.input_state.orders = orders_from(r, *v, sub(p, "orders"));
        if (const json* v = r.find(*ij, "nbar")) cfg.input_state.nbar = r.numbers(*v, sub(p, "nbar"));
        if (const json* v = r.find(*ij, "xi")) cfg.input_state.xi = r.numbers(*v, sub(p, "xi"));
        if (const json* v = r.find(*ij, "width_nm")) cfg.input_state.width_nm = r.positive(*v, sub(p, "width_nm"));
        if (const json* v = r.find(*ij, "center_nm")) cfg.input_state.center_nm = r.positive(*v, sub(p, "center_nm"));
        if (cfg.input_state.nbar.size() != cfg.input_state.orders.size())
            r.fail(sub(p, "nbar"), "needs one occupation per basis order");
        if (!cfg.input_state.xi.empty() && cfg.input_state.xi.size() != cfg.input_state.orders.size())
            r.fail(sub(p, "xi"), "needs one phase per basis order");
        for (double n : cfg.input_state.nbar)
            if (n < 0.0) r.fail(sub(p, "nbar"), "occupations must be non-negative");
    }
    if (const json* fj = r.find(j, "filter")) {
        const Path p{"filter"};
        r.keys(*fj, p, {"shape", "center_nm", "width_nm", "first_bin", "last_bin"});
        FilterConfig f;
        const std::string shape = r.string(r.need(*fj, p, "shape"), sub(p, "shape"));
        if (shape == "rect") f.shape = FilterShape::Rect;
        else if (shape == "gaussian") f.shape = FilterShape::Gaussian;
        else if (shape == "bins") f.shape = FilterShape::Bins;
        else r.fail(sub(p, "shape"), "expected rect, gaussian or bins");
        if (f.shape == FilterShape::Bins) {
            const long a = r.integer(r.need(*fj, p, "first_bin"), sub(p, "first_bin"));
            const long b = r.integer(r.need(*fj, p, "last_bin"), sub(p, "last_bin"));
            if (a < 0 || b < a) r.fail(sub(p, "last_bin"), "expected 0 <= first_bin <= last_bin");
            f.first_bin = static_cast<std::size_t>(a);
            f.last_bin = static_cast<std::size_t>(b);
        } else {
            f.width_nm = r.positive(r.need(*fj, p, "width_nm"), sub(p, "width_nm"));
            if (const json* v = r.find(*fj, "center_nm")) f.center_nm = r.positive(*v, sub(p, "center_nm"));
        }
        cfg.filter = f;
    }
    if (const json* gj = r.find(j, "ga")) cfg.ga = parse_ga(r, *gj, {"ga"});
    if (const json* oj = r.find(j, "output")) {
        const Path p{"output"};
        r.keys(*oj, p, {"dir", "heatmap", "modes"});
        if (const json* v = r.find(*oj, "dir")) cfg.output.dir = r.string(*v, sub(p, "dir"));
        if (const json* v = r.find(*oj, "heatmap")) cfg.output.heatmap = r.boolean(*v, sub(p, "heatmap"));
        if (const json* v = r.find(*oj, "modes")) {
            const long m = r.integer(*v, sub(p, "modes"));
            if (m < 0 || m > 64) r.fail(sub(p, "modes"), "expected 0..64");
            cfg.output.modes = static_cast<int>(m);
        }
    }
    if (const json* dj = r.find(j, "dispersion_scan")) {
        const Path p{"dispersion_scan"};
        r.keys(*dj, p, {"from_nm", "to_nm", "points"});
        if (const json* v = r.find(*dj, "from_nm")) cfg.dispersion_scan.from_nm = r.positive(*v, sub(p, "from_nm"));
        if (const json* v = r.find(*dj, "to_nm")) cfg.dispersion_scan.to_nm = r.positive(*v, sub(p, "to_nm"));
        if (const json* v = r.find(*dj, "points")) {
            const long n = r.integer(*v, sub(p, "points"));
            if (n < 2) r.fail(sub(p, "points"), "expected at least 2");
            cfg.dispersion_scan.points = static_cast<int>(n);
        }
    }
    return cfg;
}

RunConfig load_run_config(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return parse_run_config(os.str(), path.string(), path.parent_path());
}

std::string resolved_config_json(const RunConfig& cfg) {
    json j;
    const auto& p = cfg.process;
    json model = {{"type", p.model.type}};
    if (!p.model.material.empty()) model["material"] = p.model.material;
    if (!p.model.polarization_map.empty()) model["polarization_map"] = p.model.polarization_map;
    if (p.model.type == "metallic") {
        model["width_um"] = p.model.width_um;
        model["height_um"] = p.model.height_um;
    }
    if (!p.model.tables.empty()) model["tables"] = p.model.tables;
    if (!p.model.surrogate.empty()) model["surrogate"] = p.model.surrogate;
    if (!p.model.geometry.empty()) model["geometry"] = p.model.geometry;
    if (!p.model.constant_index.empty()) model["constant_index"] = p.model.constant_index;
    const bool spa = p.kind == ProcessKind::SPA_PDC;
    j["process"] = {{"kind", to_string(p.kind)},
                    {"nl_type", to_string(p.nl_type)},
                    {"length_mm", p.length_mm},
                    {"model", model},
                    {"fields",
                     {{"signal", field_json(p.signal)},
                      {spa ? "idler" : "upconverted", field_json(p.partner)},
                      {spa ? "pump" : "gate", field_json(p.drive)}}}};
    if (p.poling_period_um) j["process"]["poling_period_um"] = *p.poling_period_um;
    j["pump"] = {{"width_nm", cfg.pump.width_nm}, {"order", cfg.pump.order}, {"orders", cfg.pump.orders}};
    j["grid"] = {{"n_signal", cfg.grid.n_signal}, {"n_partner", cfg.grid.n_partner}};
    if (cfg.grid.signal_nm) j["grid"]["signal_nm"] = *cfg.grid.signal_nm;
    if (cfg.grid.partner_nm) j["grid"]["partner_nm"] = *cfg.grid.partner_nm;
    j["input_state"] = {{"orders", cfg.input_state.orders}, {"nbar", cfg.input_state.nbar}};
    if (!cfg.input_state.xi.empty()) j["input_state"]["xi"] = cfg.input_state.xi;
    if (cfg.input_state.width_nm) j["input_state"]["width_nm"] = *cfg.input_state.width_nm;
    if (cfg.input_state.center_nm) j["input_state"]["center_nm"] = *cfg.input_state.center_nm;
    if (cfg.filter) {
        const auto& f = *cfg.filter;
        json fj = {{"shape", filter_shape_name(f.shape)}};
        if (f.shape == FilterShape::Bins) {
            fj["first_bin"] = f.first_bin;
            fj["last_bin"] = f.last_bin;
        } else {
            fj["width_nm"] = f.width_nm;
            if (f.center_nm) fj["center_nm"] = *f.center_nm;
        }
        j["filter"] = fj;
    }
    if (cfg.ga) {
        const auto& g = cfg.ga->ga;
        json genes = json::array();
        for (const auto& gene : g.genome) {
            json gj = {{"name", gene.name}, {"mean", gene.mean}, {"sigma", gene.sigma}, {"min", gene.min}};
            if (gene.max) gj["max"] = *gene.max;
            if (!gene.unit.empty()) gj["unit"] = gene.unit;
            genes.push_back(gj);
        }
        // Thread counts cannot change results and are left out.
        j["ga"] = {{"population", g.population},
                   {"generations", g.generations},
                   {"mutation_rate", g.mutation_rate},
                   {"crossover_spread", g.crossover_spread},
                   {"seed", g.seed},
                   {"fitness", to_string(g.fitness_mode)},
                   {"fitness_grid", cfg.ga->fitness_grid},
                   {"genes", genes}};
    }
    // The output directory is left out so relocated reruns hash identically.
    j["output"] = {{"heatmap", cfg.output.heatmap}, {"modes", cfg.output.modes}};
    json scan = {{"points", cfg.dispersion_scan.points}};
    if (cfg.dispersion_scan.from_nm) scan["from_nm"] = *cfg.dispersion_scan.from_nm;
    if (cfg.dispersion_scan.to_nm) scan["to_nm"] = *cfg.dispersion_scan.to_nm;
    j["dispersion_scan"] = scan;
    if (!cfg.notes.empty()) j["notes"] = cfg.notes;
    if (!cfg.reference_json.empty()) j["reference"] = json::parse(cfg.reference_json);
    return j.dump();
}

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw NumericalError("SHA-256 computation failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 15]);
    }
    return out;
}

std::string config_hash(const RunConfig& cfg) { return sha256_hex(resolved_config_json(cfg)); }

fs::path resolve_path(const RunConfig& cfg, const std::string& path) {
    const fs::path p(path);
    return p.is_absolute() ? p : cfg.base_dir / p;
}

}  // namespace qmodes
