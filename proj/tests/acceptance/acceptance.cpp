// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 when any fails.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmodes/config.hpp"
#include "qmodes/design.hpp"
#include "qmodes/dispersion_io.hpp"
#include "qmodes/fock.hpp"
#include "qmodes/optimizer.hpp"
#include "qmodes/process.hpp"
#include "qmodes/quantum.hpp"
#include "qmodes/synthetic.hpp"
#include "qmodes/units.hpp"

using namespace qmodes;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Tolerances and limits.
constexpr double kRankOneTol = 1e-9;
constexpr double kRankOneSeconds = 1.0;
constexpr double kHermiteOverlapMin = 0.999;
constexpr double kGeometricRatioTol = 0.01;
constexpr double kDoubleGaussianSeconds = 10.0;
constexpr int kOracleInstances = 24;
constexpr double kOracleTol = 1e-3;
constexpr double kOracleLeakage = 1e-5;
constexpr double kPureTol = 1e-12;
constexpr double kOracleSeconds = 120.0;
constexpr double kSpaKMax = 1.15, kSpaSpan = 100.0, kSpaSpanTol = 30.0;
constexpr double kSpsKMax = 1.12, kSpsSpan = 110.0, kSpsSpanTol = 35.0;
constexpr double kPresetSeconds = 60.0;
constexpr double kSpsPurityRef = 0.969, kSpaPurityRef = 0.952, kPurityTol = 0.05;
constexpr double kSurrogateTol = 1e-3;
constexpr double kGeneTol = 0.02;
constexpr double kThinFilmSeconds = 300.0;
constexpr double kQuadraticTol = 1e-2;
constexpr double kGaSeconds = 30.0;
constexpr double kFilterSeconds = 30.0;

const fs::path kSource = QMODES_SOURCE_DIR;

struct Verdict {
    bool pass = true;
    std::string detail;
    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += (ok ? "" : "MISS ") + what;
    }
};

std::string num(double x, int digits = 6) {
    std::ostringstream os;
    os.precision(digits);
    os << x;
    return os.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string("\"") + QMODES_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("qmodes_acceptance_" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int failures = 0;

void criterion(const std::string& name, double limit_seconds, const std::function<void(Verdict&)>& body) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(v);
    } catch (const std::exception& e) {
        v.require(false, std::string("exception: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.require(s < limit_seconds, "runtime " + num(s, 3) + " s < " + num(limit_seconds, 3) + " s");
    if (!v.pass) ++failures;
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << std::endl;
}

SpectralAmplitude sampled(const FrequencyGrid& g, const std::function<std::complex<double>(double, double)>& f) {
    SpectralAmplitude a;
    a.grid = g;
    a.values.resize(static_cast<Eigen::Index>(g.size_a()), static_cast<Eigen::Index>(g.size_b()));
    for (std::size_t i = 0; i < g.size_a(); ++i)
        for (std::size_t j = 0; j < g.size_b(); ++j)
            a.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = f(g.axis_a[i], g.axis_b[j]);
    normalize(a);
    return a;
}

Eigen::MatrixXd random_orthogonal(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = g(rng);
    return Eigen::HouseholderQR<Eigen::MatrixXd>(m).householderQ();
}

Design preset_design(const std::string& name) {
    return Design(load_run_config(kSource / "presets" / (name + ".json")));
}

// 1. Separable amplitudes and single-bin filtering.
void rank_one(Verdict& v) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    const FrequencyGrid grid = FrequencyGrid::uniform(1.0e15, 1.1e15, 200, 1.2e15, 1.3e15, 150);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<std::complex<double>> f(200), h(150);
        for (auto& x : f) x = {g(rng), g(rng)};
        for (auto& x : h) x = {g(rng), g(rng)};
        const auto amp = sampled(grid, [&](double a, double b) {
            const auto i = static_cast<std::size_t>(std::lround((a - 1.0e15) / grid.step_a()));
            const auto j = static_cast<std::size_t>(std::lround((b - 1.2e15) / grid.step_b()));
            return f[i] * h[j];
        });
        worst = std::max({worst, std::abs(schmidt(amp).K - 1.0), std::abs(schmidt_number_fast(amp) - 1.0)});
    }
    v.require(worst < kRankOneTol, "separable |K - 1| = " + num(worst, 3));

    const Design d = preset_design("metallic_spa_ktp");
    const SpectralAmplitude amp = d.amplitude(0, {}, 128, 128, 1);
    FilterSpec bin;
    bin.shape = FilterShape::Bins;
    bin.first_bin = bin.last_bin = 64;
    const double K = schmidt(filter_idler(amp, bin).amplitude).K;
    v.require(K == 1.0, "single-bin filtered preset K = " + num(K, 17));
}

// 2. Two-Gaussian amplitude against its closed-form Schmidt decomposition.
void double_gaussian(Verdict& v) {
    const double w0 = 1.2e15, a = 2e12, b = 0.5e12;
    const FrequencyGrid g = FrequencyGrid::uniform(w0 - 10 * a, w0 + 10 * a, 512, w0 - 10 * a, w0 + 10 * a, 512);
    const auto amp = sampled(g, [&](double s, double i) {
        const double x = s - w0, y = i - w0;
        return std::exp(-(x + y) * (x + y) / (4 * a * a) - (x - y) * (x - y) / (4 * b * b));
    });
    const SchmidtData sd = schmidt(amp);
    const double ratio = std::pow((a - b) / (a + b), 2);
    double worst_ratio = 0.0;
    for (int l = 0; l < 4; ++l)
        worst_ratio = std::max(worst_ratio, std::abs(sd.eigenvalues(l + 1) / sd.eigenvalues(l) / ratio - 1.0));
    v.require(worst_ratio < kGeometricRatioTol, "lambda ratio deviation " + num(worst_ratio, 3));
    const double w = std::sqrt(a * b);
    double min_overlap = 1.0;
    for (int n = 0; n < 3; ++n) {
        std::complex<double> os = 0, oi = 0;
        for (std::size_t k = 0; k < g.size_a(); ++k) {
            const double hn = hermite_function(n, (g.axis_a[k] - w0) / w) / std::sqrt(w);
            os += std::conj(sd.signal_modes(static_cast<Eigen::Index>(k), n)) * hn;
            oi += std::conj(sd.partner_modes(static_cast<Eigen::Index>(k), n)) * hn;
        }
        min_overlap = std::min({min_overlap, std::abs(os) * g.step_a(), std::abs(oi) * g.step_b()});
    }
    v.require(min_overlap > kHermiteOverlapMin, "min Hermite overlap " + num(min_overlap, 8));
}

// 3. Purity formulas against the truncated Fock-space oracles.
void purity_oracle(Verdict& v) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    int done = 0;
    for (int k = 0; k < kOracleInstances; ++k) {
        const bool spa = k % 2 == 1;
        const int n = 1 + (k / 2) % 3;
        const Eigen::MatrixXd O = random_orthogonal(n, rng);
        Eigen::VectorXd lambda(n), r(n);
        for (int i = 0; i < n; ++i) {
            lambda(i) = 0.05 + u(rng);
            r(i) = 0.3 * u(rng);
        }
        lambda /= lambda.sum();
        if (!spa) r(0) = std::max(r(0), 0.05);
        const double theta = 0.005 + 0.015 * u(rng);
        Eigen::VectorXd nbar(n);
        for (int i = 0; i < n; ++i) nbar(i) = nbar_from_squeezing(r(i));
        FockOracleOptions opt;
        opt.cutoff = 8;
        opt.leakage_limit = kOracleLeakage;
        const FockOracleResult f =
            spa ? fock_oracle_spa(theta, lambda, O, r, {}, opt) : fock_oracle_sps(theta, lambda, O, r, {}, opt);
        const PurityResult p = spa ? spa_purity(lambda, O, nbar) : sps_purity(lambda, O, nbar);
        if (!f.purity) throw std::runtime_error("oracle heralded nothing");
        worst = std::max(worst, std::abs(*f.purity - p.purity));
        ++done;
    }
    v.require(done >= 20 && worst < kOracleTol,
              std::to_string(done) + " random instances, max |formula - oracle| = " + num(worst, 3));

    Eigen::VectorXd one(1);
    one << 1.0;
    Eigen::MatrixXd row(1, 3);
    row << 0.6, -0.48, 0.64;
    Eigen::VectorXd nb(3);
    nb << 0.7, 1.3, 0.2;
    const double m1 = sps_purity(one, row, nb).purity, p1 = spa_purity(one, row, nb).purity;
    std::mt19937_64 rng2(9);
    const Eigen::MatrixXd O = random_orthogonal(3, rng2);
    Eigen::VectorXd lam(3), occ(3);
    lam << 0.5, 0.3, 0.2;
    occ << 1.7, 0.0, 0.0;
    const double single = sps_purity(lam, O, occ).purity;
    const double dev = std::max({std::abs(m1 - 1.0), std::abs(p1 - 1.0), std::abs(single - 1.0)});
    v.require(dev < kPureTol, "lambda=[1] and single-occupied-mode purities within " + num(dev, 3) + " of 1");
}

struct PresetRun {
    json jsa;
    json purity;
};

PresetRun run_preset(const std::string& name, Verdict& v) {
    const fs::path dir = scratch(name);
    const std::string cfg = (kSource / "presets" / (name + ".json")).string();
    PresetRun out;
    const int a = run_cli("jsa --quiet --config " + cfg + " --out " + dir.string(), dir / "jsa.log");
    const int b = run_cli("purity --quiet --config " + cfg + " --out " + dir.string(), dir / "purity.log");
    v.require(a == 0 && b == 0, name + " jsa/purity exit codes " + std::to_string(a) + "/" + std::to_string(b));
    const fs::path report = dir / (fs::exists(dir / "jsa.json") ? "jsa.json" : "tf.json");
    out.jsa = json::parse(slurp(report));
    out.purity = json::parse(slurp(dir / "purity.json"));
    return out;
}

void metallic_preset(Verdict& v, const std::string& name, double k_max, double span, double span_tol) {
    const PresetRun r = run_preset(name, v);
    const double K = r.jsa["K"];
    v.require(K >= 1.0 && K <= k_max, "K(HG0) = " + num(K) + " in [1, " + num(k_max) + "]");
    const json& fw = r.jsa["first_mode_fwhm_nm"]["signal"];
    const double fwhm = fw.is_number() ? fw.get<double>() : NAN;
    v.require(std::abs(fwhm - span) <= span_tol,
              "signal-mode FWHM " + num(fwhm, 4) + " nm vs " + num(span) + " +- " + num(span_tol) + " nm");
    const json& sp = r.jsa["first_mode_span_1pct_amplitude_nm"]["signal"];
    v.detail += "; diagnostic 1%-amplitude span " + (sp.is_number() ? num(sp.get<double>(), 4) : "n/a") + " nm";
}

// 6. HG0 purities of both metallic presets under the default occupations.
void preset_purities(Verdict& v) {
    for (const auto& [name, ref] : {std::pair{std::string("metallic_sps_ktp"), kSpsPurityRef},
                                    std::pair{std::string("metallic_spa_ktp"), kSpaPurityRef}}) {
        const fs::path dir = scratch("purity_" + name);
        const int code = run_cli("purity --quiet --config " + (kSource / "presets" / (name + ".json")).string() +
                                     " --out " + dir.string(),
                                 dir / "purity.log");
        v.require(code == 0, name + " exit " + std::to_string(code));
        const json p = json::parse(slurp(dir / "purity.json"));
        const json& e = p["entries"][0];
        const double mu = e["purity"];
        const std::string sym = name.find("sps") != std::string::npos ? "mu-" : "mu+";
        v.require(e["pump_order"] == 0 && std::abs(mu - ref) <= kPurityTol,
                  name + " " + sym + "(HG0) = " + num(mu, 4) + " vs " + num(ref, 3) + " +- " + num(kPurityTol) +
                      " [" + p["assumptions"]["occupations"].get<std::string>() + "]");
    }
}

// Golden-section minimum of f on [lo, hi].
double golden(const std::function<double(double)>& f, double lo, double hi, double tol) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi, c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Group index of the law by central differences.
double law_group_index(const SyntheticLaw& law, double D, const std::string& pol, double omega) {
    const GeometryPoint p{{"D", D}};
    const double h = 1e-4 * omega;
    return law.n_eff(p, pol, omega) +
           omega * (law.n_eff(p, pol, omega + h) - law.n_eff(p, pol, omega - h)) / (2 * h);
}

// 7. Thin-film pipeline on a synthetic D-only surrogate.
void thin_film(Verdict& v) {
    const fs::path dir = scratch("thin_film");
    const SyntheticLaw law;
    const std::vector<GeometryAxis> axes{{"D", "nm", {500, 520, 540, 560, 580, 600, 620, 640, 660, 680, 700, 720, 740, 760}}};
    const double w_lo = omega_from_wavelength_nm(4000), w_hi = omega_from_wavelength_nm(550);
    const GeometrySurrogate sur = make_synthetic_surrogate(law, axes, w_lo, w_hi, 300);
    write_geometry_surrogate(sur, dir / "surrogate");

    // Held-out geometry points and frequencies, read back from disk.
    const GeometrySurrogate loaded = load_geometry_surrogate(dir / "surrogate" / "manifest.json");
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> D(500, 760), w(omega_from_wavelength_nm(3000), omega_from_wavelength_nm(600));
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
        const GeometryPoint p{{"D", D(rng)}};
        const auto tables = surrogate_dispersion(loaded, p);
        for (const char* pol : {"TE", "TM"}) {
            const double x = w(rng);
            worst = std::max(worst, std::abs(tables.at(pol).effective_index(x) - law.n_eff(p, pol, x)));
        }
    }
    v.require(worst < kSurrogateTol, "held-out interpolation error " + num(worst, 3));

    // Planted D: TM group index at 1560 nm equals TM group index at 780 nm.
    const double ws = omega_from_wavelength_nm(1560), wp = 2 * ws;
    const double D_star = golden(
        [&](double d) {
            const double diff = law_group_index(law, d, "TM", wp) - law_group_index(law, d, "TM", ws);
            return diff * diff;
        },
        500, 760, 1e-6);
    v.require(std::abs(D_star - law.group_matched_D()) < 1e-3,
              "group-matched D " + num(D_star) + " nm (closed form " + num(law.group_matched_D()) + ")");

    const std::string config = R"({
  "notes": "Type II PDC on a synthetic thin-film surrogate: signal TM, idler TE, pump TM.",
  "process": {"kind": "SPA_PDC", "nl_type": "II", "length_mm": 7.0,
    "model": {"type": "surrogate", "surrogate": "surrogate/manifest.json", "geometry": {"D": 650}},
    "fields": {"signal": {"polarization": "V", "wavelength_nm": 1560},
               "idler": {"polarization": "H", "wavelength_nm": 1560},
               "pump": {"polarization": "V"}}},
  "pump": {"width_nm": 6.0},
  "grid": {"n_signal": 256, "n_partner": 256, "threads": 4},
  "ga": {"population": 64, "generations": 80, "seed": 11, "fitness_grid": 96, "threads": 4,
    "genes": [{"name": "geometry.D", "mean": 630, "sigma": 15, "min": 505, "max": 755},
              {"name": "pump_width_nm", "mean": 7, "sigma": 2.5, "min": 0.5, "max": 30}]}
})";
    std::ofstream(dir / "thin_film.json") << config;
    const RunConfig cfg = load_run_config(dir / "thin_film.json");
    const Design design(cfg);

    // Deterministic oracle for the width: nested golden sections on the same fitness.
    const EvalContext ctx = design.eval_context();
    auto K = [&](double d, double width) { return ctx.schmidt_number({d, width}, 0); };
    double w_at = 0.0;
    const double D_oracle = golden(
        [&](double d) {
            const double wb = golden([&](double x) { return K(d, x); }, 4.0, 25.0, 1e-3);
            return K(d, wb);
        },
        590, 612, 1e-3);
    w_at = golden([&](double x) { return K(D_oracle, x); }, 4.0, 25.0, 1e-4);
    v.require(std::abs(D_oracle - D_star) / D_star < kGeneTol,
              "oracle optimum D " + num(D_oracle, 5) + " nm, width " + num(w_at, 4) + " nm, K " +
                  num(K(D_oracle, w_at), 6));

    const int jsa = run_cli("jsa --quiet --config " + (dir / "thin_film.json").string() + " --out " +
                                (dir / "jsa").string(),
                            dir / "jsa.log");
    const int opt = run_cli("optimize --quiet --config " + (dir / "thin_film.json").string() + " --out " +
                                (dir / "ga").string(),
                            dir / "ga.log");
    v.require(jsa == 0 && opt == 0, "jsa/optimize exit codes " + std::to_string(jsa) + "/" + std::to_string(opt));
    const json h = json::parse(slurp(dir / "ga" / "history.json"));
    const double D_ga = h["best"]["genes"]["geometry.D"], w_ga = h["best"]["genes"]["pump_width_nm"];
    v.require(std::abs(D_ga - D_star) / D_star < kGeneTol,
              "GA D " + num(D_ga, 5) + " vs planted " + num(D_star, 5) + " (" +
                  num(100 * std::abs(D_ga - D_star) / D_star, 2) + "%)");
    v.require(std::abs(w_ga - w_at) / w_at < kGeneTol,
              "GA width " + num(w_ga, 4) + " vs oracle " + num(w_at, 4) + " (" +
                  num(100 * std::abs(w_ga - w_at) / w_at, 2) + "%), GA K " + num(K(D_ga, w_ga), 6));
    v.require(fs::exists(dir / "ga" / "best" / "jsa.json"), "best candidate JSA written");
}

// 8. Byte-identical GA artifacts and convergence on the quadratic.
void ga_determinism(Verdict& v) {
    const fs::path dir = scratch("ga");
    const std::string config = R"({
  "process": {"kind": "SPA_PDC", "nl_type": "II", "length_mm": 7.0,
    "model": {"type": "metallic", "material": "KTP", "width_um": 2.8, "height_um": 2.3},
    "fields": {"signal": {"polarization": "H", "wavelength_nm": 1560},
               "idler": {"polarization": "V", "wavelength_nm": 1560},
               "pump": {"polarization": "H"}}},
  "pump": {"width_nm": 7.0},
  "grid": {"n_signal": 128, "n_partner": 128},
  "ga": {"population": 8, "generations": 4, "seed": 3, "fitness_grid": 48, "threads": 2,
    "genes": [{"name": "width_um", "mean": 2.8, "sigma": 0.2, "min": 2.0},
              {"name": "pump_width_nm", "mean": 7, "sigma": 1, "min": 2, "max": 15}]}
})";
    std::ofstream(dir / "ga.json") << config;
    const std::string base = "optimize --quiet --config " + (dir / "ga.json").string() + " --out ";
    const int a = run_cli(base + (dir / "a").string(), dir / "a.log");
    const int b = run_cli(base + (dir / "b").string(), dir / "b.log");
    v.require(a == 0 && b == 0, "exit codes " + std::to_string(a) + "/" + std::to_string(b));
    const bool same = slurp(dir / "a" / "history.json") == slurp(dir / "b" / "history.json") &&
                      slurp(dir / "a" / "history.csv") == slurp(dir / "b" / "history.csv") &&
                      !slurp(dir / "a" / "history.json").empty();
    v.require(same, "same seed gives byte-identical history files");

    GAConfig c;
    c.population = 32;
    c.generations = 50;
    c.seed = 42;
    c.genome = {{"x", 0.0, 2.0, -20.0, 20.0, ""}};
    EvalContext ctx;
    ctx.schmidt_number = [](const std::vector<double>& x, int) { return 1.0 + (x[0] - 3.0) * (x[0] - 3.0); };
    const GAResult r = evolve(c, ctx);
    const double best = r.best.fitness.value();
    bool monotone = true;
    for (std::size_t g = 1; g < r.history.size(); ++g) monotone = monotone && r.history[g].best_ever <= r.history[g - 1].best_ever;
    v.require(best < kQuadraticTol && monotone,
              "quadratic best fitness " + num(best, 3) + " at x = " + num(r.best.genes[0], 6) + " after 50 generations");
}

// 9. Nested idler filters on both metallic presets.
void filter_monotonicity(Verdict& v) {
    for (const char* name : {"metallic_spa_ktp", "metallic_sps_ktp"}) {
        const Design d = preset_design(name);
        const SpectralAmplitude amp = d.amplitude(0, {}, 256, 256, 4);
        const std::size_t mid = amp.grid.size_b() / 2;
        const double centre = amp.grid.axis_b[mid];
        const double full = amp.grid.axis_b.back() - amp.grid.axis_b.front();
        std::vector<double> K{schmidt(amp).K}, pass{1.0};
        for (double f = 1.0; f * full > 2 * amp.grid.step_b(); f *= 0.5) {
            const FilterResult r = filter_idler(amp, {FilterShape::Rect, centre, f * full});
            K.push_back(schmidt(r.amplitude).K);
            pass.push_back(r.pass_fraction);
        }
        FilterSpec bin;
        bin.shape = FilterShape::Bins;
        bin.first_bin = bin.last_bin = mid;
        const FilterResult last = filter_idler(amp, bin);
        K.push_back(schmidt(last.amplitude).K);
        pass.push_back(last.pass_fraction);
        bool k_ok = true, p_ok = true;
        for (std::size_t i = 1; i < K.size(); ++i) {
            k_ok = k_ok && K[i] <= K[i - 1];
            p_ok = p_ok && pass[i] <= pass[i - 1];
        }
        std::string seq;
        for (double k : K) seq += (seq.empty() ? "" : " ") + num(k, 5);
        v.require(k_ok && K.back() == 1.0, std::string(name) + " K sequence [" + seq + "]");
        v.require(p_ok, std::string(name) + " pass fraction non-increasing down to " + num(pass.back(), 3));
    }
}

}  // namespace

int main() {
    std::cout << "acceptance: " << 9 << " criteria" << std::endl;
    criterion("1 rank-1 exactness", kRankOneSeconds, rank_one);
    criterion("2 double-Gaussian Schmidt oracle", kDoubleGaussianSeconds, double_gaussian);
    criterion("3 purity formulas vs Fock oracle", kOracleSeconds, purity_oracle);
    criterion("4 metallic SPA preset", kPresetSeconds,
              [](Verdict& v) { metallic_preset(v, "metallic_spa_ktp", kSpaKMax, kSpaSpan, kSpaSpanTol); });
    criterion("5 metallic SPS preset", kPresetSeconds,
              [](Verdict& v) { metallic_preset(v, "metallic_sps_ktp", kSpsKMax, kSpsSpan, kSpsSpanTol); });
    criterion("6 purity tables (default occupations)", 2 * kPresetSeconds, preset_purities);
    criterion("7 thin-film surrogate pipeline", kThinFilmSeconds, thin_film);
    criterion("8 GA determinism and convergence", kGaSeconds, ga_determinism);
    criterion("9 nested filter monotonicity", kFilterSeconds, filter_monotonicity);
    fs::remove_all(fs::temp_directory_path() / ("qmodes_acceptance_" + std::to_string(::getpid())));
    std::cout << (failures == 0 ? "acceptance: all criteria pass" : "acceptance: " + std::to_string(failures) + " failing")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
