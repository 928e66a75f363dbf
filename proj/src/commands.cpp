#include "qmodes/commands.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "qmodes/errors.hpp"
#include "qmodes/units.hpp"

namespace qmodes {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json vector_json(const Eigen::VectorXd& v, Eigen::Index limit = -1) {
    json out = json::array();
    const Eigen::Index n = limit < 0 ? v.size() : std::min(limit, v.size());
    for (Eigen::Index i = 0; i < n; ++i) out.push_back(v(i));
    return out;
}

json window_json(const std::vector<double>& axis) {
    return {{"points", axis.size()},
            {"omega_rad_s", {axis.front(), axis.back()}},
            {"wavelength_nm", {wavelength_nm_from_omega(axis.back()), wavelength_nm_from_omega(axis.front())}}};
}

// Width in nm, or null plus a note when the profile has no clean crossing.
json width_json(const std::function<double()>& f, json& notes, const std::string& what) {
    try {
        return f();
    } catch (const DomainError& e) {
        notes.push_back(what + ": " + e.what());
        return nullptr;
    }
}

std::string partner_name(const SpectralAmplitude& a) {
    return a.kind == AmplitudeKind::JSA ? "idler" : "upconverted";
}

json poling_json(const ProcessSpec& s) {
    json j = {{"delta_k0_rad_per_m", unpoled_delta_k(s, s.signal.omega(), s.partner.omega())}};
    if (s.poling_period_m) {
        j["status"] = "solved";
        j["period_um"] = *s.poling_period_m * 1e6;
        j["sign"] = s.poling_sign;
    } else {
        j["status"] = "already_phase_matched";
    }
    return j;
}

json schmidt_report(const SpectralAmplitude& amp, const SchmidtData& sd) {
    json notes = json::array();
    const auto& g = amp.grid;
    json j;
    j["K"] = sd.K;
    j["lambdas"] = vector_json(sd.eigenvalues, 10);
    j["modes_kept"] = sd.eigenvalues.size();
    j["marginal_fwhm_nm"] = {
        {"signal", width_json([&] { return marginal_bandwidth(amp, Axis::Signal); }, notes, "signal marginal")},
        {partner_name(amp),
         width_json([&] { return marginal_bandwidth(amp, Axis::Partner); }, notes, "partner marginal")}};
    j["first_mode_fwhm_nm"] = {
        {"signal", width_json([&] { return mode_bandwidth(g.axis_a, sd.signal_modes.col(0)); }, notes,
                              "signal mode")},
        {partner_name(amp), width_json([&] { return mode_bandwidth(g.axis_b, sd.partner_modes.col(0)); },
                                       notes, "partner mode")}};
    // Diagnostic only: extent where the first signal mode amplitude exceeds 1% of its peak.
    j["first_mode_span_1pct_amplitude_nm"] = {
        {"signal", width_json([&] { return mode_bandwidth(g.axis_a, sd.signal_modes.col(0), 1e-4); }, notes,
                              "signal mode 1% span")}};
    j["grid"] = {{"signal", window_json(g.axis_a)}, {partner_name(amp), window_json(g.axis_b)}};
    j["edge_ratio"] = amp.edge_ratio;
    j["warnings"] = amp.warnings;
    if (!notes.empty()) j["notes"] = notes;
    return j;
}

std::string prefix(const SpectralAmplitude& a) { return a.kind == AmplitudeKind::JSA ? "jsa" : "tf"; }

void write_amplitude_set(const SpectralAmplitude& amp, const SchmidtData& sd, const fs::path& dir,
                         const std::string& stem, const ArtifactStamp& stamp, const RunConfig& cfg) {
    write_amplitude_csv(amp, dir / (stem + "_abs.csv"), dir / (stem + "_phase.csv"), stamp);
    if (cfg.output.heatmap) write_heatmap_ppm(amp, dir / (stem + ".ppm"));
    const auto modes = std::min<Eigen::Index>(cfg.output.modes, sd.eigenvalues.size());
    for (Eigen::Index l = 0; l < modes; ++l) {
        write_mode_csv(amp.grid.axis_a, sd.signal_modes.col(l),
                       dir / (stem + "_mode" + std::to_string(l) + "_signal.csv"), stamp);
        write_mode_csv(amp.grid.axis_b, sd.partner_modes.col(l),
                       dir / (stem + "_mode" + std::to_string(l) + "_" + partner_name(amp) + ".csv"), stamp);
    }
}

json process_json(const ProcessSpec& s, const PumpSpec& p) {
    auto field = [](const FieldSpec& f) {
        return json{{"role", f.role},
                    {"polarization", f.polarization},
                    {"wavelength_nm", f.wavelength_m * 1e9},
                    {"index_model", describe(f.index)},
                    {"n_eff", effective_index(f.index, f.omega())}};
    };
    return {{"process_kind", to_string(s.kind)},
            {"nl_type", to_string(s.nl_type)},
            {"length_mm", s.length_m * 1e3},
            {"fields", {field(s.signal), field(s.partner), field(s.drive)}},
            {"poling", poling_json(s)},
            {"pump", {{"order", p.order}, {"width_fwhm_nm", p.width_fwhm_nm}, {"sigma_rad_s", pump_sigma_omega(p)}}}};
}

void say(std::ostream& log, const CommandOptions& opt, const std::string& line) {
    if (!opt.quiet) log << line << '\n';
}

std::string fixed(double x, int digits = 4) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << x;
    return os.str();
}

}  // namespace

RunConfig prepare_config(const CommandOptions& opt) {
    RunConfig cfg = load_run_config(opt.config);
    if (opt.out) cfg.output.dir = opt.out->string();
    if (opt.grid) {
        if (*opt.grid < 2 || *opt.grid > 8192) throw ConfigError("--grid must lie in [2, 8192]");
        cfg.grid.n_signal = cfg.grid.n_partner = *opt.grid;
    }
    if (opt.seed) {
        if (!cfg.ga) throw ConfigError("--seed given but the config has no ga section");
        cfg.ga->ga.seed = *opt.seed;
    }
    return cfg;
}

ArtifactStamp make_stamp(const RunConfig& cfg) {
    ArtifactStamp s;
    s.config_json = resolved_config_json(cfg);
    s.config_sha256 = sha256_hex(s.config_json);
    return s;
}

fs::path output_directory(const RunConfig& cfg, const CommandOptions& opt) {
    return opt.out ? *opt.out : fs::path(cfg.output.dir);
}

int cmd_dispersion(const CommandOptions& opt, std::ostream& log) {
    const RunConfig cfg = prepare_config(opt);
    const Design design(cfg);
    const ArtifactStamp stamp = make_stamp(cfg);
    const ProcessSpec s = design.process();
    const DispersionModel model = design.dispersion();

    const double lo_field = std::min({s.signal.wavelength_m, s.partner.wavelength_m, s.drive.wavelength_m}) * 1e9;
    const double hi_field = std::max({s.signal.wavelength_m, s.partner.wavelength_m, s.drive.wavelength_m}) * 1e9;
    const double from = cfg.dispersion_scan.from_nm.value_or(0.9 * lo_field);
    const double to = cfg.dispersion_scan.to_nm.value_or(1.1 * hi_field);
    if (!(to > from)) throw ConfigError("dispersion_scan: to_nm must exceed from_nm");
    const int n = cfg.dispersion_scan.points;

    std::vector<std::string> columns{"wavelength_nm", "omega_rad_s"};
    for (const auto& [pol, curve] : model.curves) {
        columns.push_back("n_eff_" + pol);
        columns.push_back("n_group_" + pol);
    }
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < n; ++i) {
        const double nm = from + (to - from) * i / (n - 1);
        const double w = omega_from_wavelength_nm(nm);
        std::vector<double> row{nm, w};
        for (const auto& [pol, curve] : model.curves) {
            const double h = 1e-5 * w;
            row.push_back(effective_index(curve, w));
            row.push_back(kSpeedOfLight * (wavevector(curve, w + h) - wavevector(curve, w - h)) / (2.0 * h));
        }
        rows.push_back(std::move(row));
    }
    const fs::path dir = output_directory(cfg, opt);
    write_table_csv(columns, rows, dir / "dispersion.csv", stamp);
    json curves = json::object();
    for (const auto& [pol, curve] : model.curves) curves[pol] = describe(curve);
    write_json({{"model", cfg.process.model.type}, {"curves", curves}, {"from_nm", from}, {"to_nm", to}, {"points", n}},
               dir / "dispersion.json", stamp);
    say(log, opt, "dispersion: " + std::to_string(n) + " rows over " + fixed(from, 1) + "-" + fixed(to, 1) +
                      " nm -> " + (dir / "dispersion.csv").string());
    return kExitOk;
}

int cmd_poling(const CommandOptions& opt, std::ostream& log) {
    const RunConfig cfg = prepare_config(opt);
    const Design design(cfg);
    const ArtifactStamp stamp = make_stamp(cfg);
    const PolingResult r = design.poling();
    const ProcessSpec s = design.process();
    json j = {{"delta_k0_rad_per_m", r.delta_k0}, {"sign", r.sign}};
    if (r.status == PolingStatus::AlreadyPhaseMatched) {
        j["status"] = "already_phase_matched";
        say(log, opt, "poling: already phase-matched (|dk0| = " + format_double(std::abs(r.delta_k0)) + " rad/m)");
    } else {
        j["status"] = "solved";
        j["period_um"] = r.period_m * 1e6;
        say(log, opt, "poling: period " + fixed(r.period_m * 1e6, 4) + " um, sign " + std::to_string(r.sign) +
                          ", dk0 " + format_double(r.delta_k0) + " rad/m");
    }
    if (cfg.process.poling_period_um) j["configured_period_um"] = *cfg.process.poling_period_um;
    j["process"] = process_json(s, design.pump(s, cfg.pump.order));
    write_json(j, output_directory(cfg, opt) / "poling.json", stamp);
    return kExitOk;
}

json write_jsa_outputs(const Design& design, const Overrides& overrides, int order, const fs::path& dir,
                       const ArtifactStamp& stamp) {
    const RunConfig& cfg = design.config();
    const ProcessSpec s = design.process(overrides);
    const PumpSpec p = design.pump(s, order, overrides);
    const SpectralAmplitude amp = build_amplitude(s, p, design.grid(s, p), cfg.grid.threads);
    const SchmidtData sd = schmidt(amp);
    json report = schmidt_report(amp, sd);
    report["process"] = process_json(s, p);
    if (!overrides.empty()) report["overrides"] = overrides;
    write_amplitude_set(amp, sd, dir, prefix(amp), stamp, cfg);
    write_json(report, dir / (prefix(amp) + ".json"), stamp);
    return report;
}

int cmd_jsa(const CommandOptions& opt, std::ostream& log) {
    const RunConfig cfg = prepare_config(opt);
    const Design design(cfg);
    const json r = write_jsa_outputs(design, {}, cfg.pump.order, output_directory(cfg, opt), make_stamp(cfg));
    std::string line = "jsa: HG" + std::to_string(cfg.pump.order) + " K = " + fixed(r["K"].get<double>(), 6);
    if (r["first_mode_fwhm_nm"]["signal"].is_number())
        line += ", signal mode FWHM " + fixed(r["first_mode_fwhm_nm"]["signal"].get<double>(), 1) + " nm";
    say(log, opt, line);
    for (const auto& w : r["warnings"]) say(log, opt, "warning: " + w.get<std::string>());
    return kExitOk;
}

int cmd_purity(const CommandOptions& opt, std::ostream& log) {
    const RunConfig cfg = prepare_config(opt);
    const Design design(cfg);
    const ArtifactStamp stamp = make_stamp(cfg);
    const ProcessSpec s = design.process();
    const InputStateSpec input = design.input_state(s);
    const bool spa = s.kind == ProcessKind::SPA_PDC;
    std::optional<std::vector<double>> reference;
    if (!cfg.reference_json.empty()) {
        const json ref = json::parse(cfg.reference_json);
        if (ref.contains("purity") && ref["purity"].is_array()) reference = ref["purity"].get<std::vector<double>>();
    }

    json entries = json::array();
    for (std::size_t k = 0; k < cfg.pump.orders.size(); ++k) {
        const int order = cfg.pump.orders[k];
        const PumpSpec p = design.pump(s, order);
        SpectralAmplitude amp = build_amplitude(s, p, design.grid(s, p), cfg.grid.threads);
        double pass = 1.0;
        if (auto f = design.filter(s)) {
            FilterResult fr = filter_idler(amp, *f);
            amp = std::move(fr.amplitude);
            pass = fr.pass_fraction;
        }
        const SchmidtData sd = schmidt(amp);
        const double step = amp.grid.step_a();
        const Eigen::MatrixXd basis = sample_basis(input, amp.grid.axis_a);
        check_orthonormal(basis, step);
        const Eigen::VectorXd nbar =
            Eigen::Map<const Eigen::VectorXd>(input.nbar.data(), static_cast<Eigen::Index>(input.nbar.size()));
        PurityResult pr;
        std::size_t added = 0;
        Eigen::Index cols = 0;
        if (spa) {
            const CompletedOverlap co = complete_with_vacuum(sd.signal_modes, basis, nbar, step);
            pr = spa_purity(sd.eigenvalues, co.O, co.nbar);
            added = co.added;
            cols = co.O.cols();
        } else {
            const Eigen::MatrixXd O = overlap_matrix(sd.signal_modes, basis, step);
            pr = sps_purity(sd.eigenvalues, O, nbar);
            cols = O.cols();
        }
        json e = {{"pump_order", order},
                  {"process_kind", to_string(s.kind)},
                  {"K", sd.K},
                  {"lambdas", vector_json(sd.eigenvalues, 10)},
                  {"O_shape", {sd.eigenvalues.size(), cols}},
                  {"nbar", input.nbar},
                  {"vacuum_modes_added", added},
                  {"purity", pr.purity},
                  {"herald_prob", pr.probability},
                  {"filter_pass_fraction", pass}};
        std::string line = std::string("purity: HG") + std::to_string(order) + (spa ? " mu+ = " : " mu- = ") +
                           fixed(pr.purity, 4) + ", K = " + fixed(sd.K, 4);
        if (reference && k < reference->size()) {
            e["reference_purity"] = (*reference)[k];
            e["difference"] = pr.purity - (*reference)[k];
            line += " (reference " + fixed((*reference)[k], 3) + ")";
        }
        entries.push_back(e);
        say(log, opt, line);
    }
    const bool default_occupation = cfg.input_state.orders == std::vector<int>{0, 1, 2} &&
                                    cfg.input_state.nbar == std::vector<double>{1.0, 1.0, 1.0};
    json assumptions = {
        {"occupations", default_occupation ? "default: HG0-HG2 input modes with nbar = 1 each, all others vacuum"
                                           : "configured"},
        {"basis_width_nm", input.basis.front().width_nm},
        {"basis_width_rule", cfg.input_state.width_nm ? "configured"
                                                     : "pump frequency bandwidth expressed at the signal centre"},
        {"overlap", "real inner product on the signal grid"},
        {"order", "leading order in the interaction strength"},
    };
    if (spa) assumptions["vacuum_completion"] = "Gram-Schmidt on process-mode residuals, capture >= 0.999";
    write_json({{"entries", entries}, {"assumptions", assumptions}, {"process", process_json(s, design.pump(s, 0))}},
               output_directory(cfg, opt) / "purity.json", stamp);
    return kExitOk;
}

int cmd_filter(const CommandOptions& opt, std::ostream& log) {
    const RunConfig cfg = prepare_config(opt);
    if (!cfg.filter) throw ConfigError(cfg.source + ": filter: section required by the filter command");
    const Design design(cfg);
    const ArtifactStamp stamp = make_stamp(cfg);
    const ProcessSpec s = design.process();
    const PumpSpec p = design.pump(s, cfg.pump.order);
    const SpectralAmplitude amp = build_amplitude(s, p, design.grid(s, p), cfg.grid.threads);
    const double K0 = schmidt_number_fast(amp);
    const FilterResult fr = filter_idler(amp, *design.filter(s));
    const SchmidtData sd = schmidt(fr.amplitude);
    json report = schmidt_report(fr.amplitude, sd);
    report["K_unfiltered"] = K0;
    report["pass_fraction"] = fr.pass_fraction;
    report["process"] = process_json(s, p);
    const fs::path dir = output_directory(cfg, opt);
    write_amplitude_set(fr.amplitude, sd, dir, "filtered_" + prefix(amp), stamp, cfg);
    write_json(report, dir / "filter.json", stamp);
    say(log, opt, "filter: K " + fixed(K0, 6) + " -> " + fixed(sd.K, 6) + ", pass fraction " +
                      fixed(fr.pass_fraction, 6));
    return kExitOk;
}

int cmd_optimize(const CommandOptions& opt, std::ostream& log, const std::atomic<bool>* stop) {
    const RunConfig cfg = prepare_config(opt);
    if (!cfg.ga) throw ConfigError(cfg.source + ": ga: section required by the optimize command");
    const Design design(cfg);
    const ArtifactStamp stamp = make_stamp(cfg);
    const GAConfig& ga = cfg.ga->ga;
    const fs::path dir = output_directory(cfg, opt);

    EvalContext ctx = design.eval_context();
    std::vector<std::string> columns{"generation", "best", "mean", "best_ever", "penalized"};
    for (const auto& g : ga.genome) columns.push_back(g.name);
    std::vector<std::vector<double>> rows;
    json generations = json::array();
    std::optional<GenerationStats> best_seen;

    auto flush = [&](bool done, bool interrupted) {
        json j = {{"seed", ga.seed}, {"generations", generations}, {"complete", done}, {"interrupted", interrupted}};
        if (best_seen) {
            j["best"] = {{"fitness", best_seen->best}, {"genes", design.decode(best_seen->best_genes)}};
        }
        write_json(j, dir / "history.json", stamp);
        write_table_csv(columns, rows, dir / "history.csv", stamp);
    };

    EvolveOptions eo;
    eo.stop = stop;
    eo.on_generation = [&](const GenerationStats& st, const std::vector<Individual>&) {
        std::vector<double> row{double(st.generation), st.best, st.mean, st.best_ever, double(st.penalized)};
        row.insert(row.end(), st.best_genes.begin(), st.best_genes.end());
        rows.push_back(row);
        generations.push_back({{"generation", st.generation},
                               {"best", st.best},
                               {"mean", st.mean},
                               {"best_ever", st.best_ever},
                               {"penalized", st.penalized},
                               {"best_genes", st.best_genes}});
        if (!best_seen || st.best < best_seen->best) best_seen = st;
        flush(false, false);
        say(log, opt, "generation " + std::to_string(st.generation) + ": best " + format_double(st.best) +
                          ", mean " + format_double(st.mean) + ", best-ever " + format_double(st.best_ever));
    };
    const GAResult result = evolve(ga, ctx, eo);

    json summary;
    if (result.best.fitness) {
        const Overrides best = design.decode(result.best.genes);
        const json jsa = write_jsa_outputs(design, best, cfg.pump.order, dir / "best", stamp);
        const ProcessSpec s = design.process(best);
        summary = {{"fitness", *result.best.fitness},
                   {"genes", best},
                   {"generation", result.best.generation},
                   {"decoded", process_json(s, design.pump(s, cfg.pump.order, best))},
                   {"K_full_grid", jsa["K"]}};
    }
    json j = {{"seed", ga.seed},
              {"generations", generations},
              {"complete", !result.interrupted},
              {"interrupted", result.interrupted},
              {"best", summary}};
    write_json(j, dir / "history.json", stamp);
    write_table_csv(columns, rows, dir / "history.csv", stamp);
    if (result.interrupted) {
        say(log, opt, "optimize: interrupted, partial history written");
        return kExitInterrupted;
    }
    say(log, opt, "optimize: best fitness " + format_double(*result.best.fitness) + " -> " + (dir / "best").string());
    return kExitOk;
}

int run_command(const std::string& name, const CommandOptions& opt, std::ostream& log, std::ostream& err,
                const std::atomic<bool>* stop) {
    try {
        if (name == "dispersion") return cmd_dispersion(opt, log);
        if (name == "poling") return cmd_poling(opt, log);
        if (name == "jsa") return cmd_jsa(opt, log);
        if (name == "purity") return cmd_purity(opt, log);
        if (name == "filter") return cmd_filter(opt, log);
        if (name == "optimize") return cmd_optimize(opt, log, stop);
        err << "error: unknown command '" << name << "'\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace qmodes
