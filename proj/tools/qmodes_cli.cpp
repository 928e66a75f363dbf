#include <atomic>
#include <csignal>
#include <iostream>

#include <CLI11.hpp>

#include "qmodes/commands.hpp"

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_sigint(int) { g_stop.store(true); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mode-selective photon addition and subtraction in chi(2) waveguides"};
    app.require_subcommand(1);
    app.fallthrough();

    qmodes::CommandOptions opt;
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    std::size_t grid = 0;
    app.add_option("--config", config, "Run config (JSON)")->required();
    auto* out_opt = app.add_option("--out", out, "Output directory (overrides output.dir)");
    auto* seed_opt = app.add_option("--seed", seed, "GA seed (overrides ga.seed)");
    auto* grid_opt = app.add_option("--grid", grid, "Grid points per axis");
    app.add_flag("--quiet", opt.quiet, "Suppress progress output");

    const char* commands[][2] = {
        {"dispersion", "Tabulate n_eff and group index of the configured model"},
        {"poling", "Solve the quasi-phase-matching period"},
        {"jsa", "Build the JSA / TF, Schmidt-decompose and export"},
        {"purity", "Heralded-state purities for the configured pump orders"},
        {"filter", "Apply the partner-arm filter and report K and pass fraction"},
        {"optimize", "Genetic search over the configured genes"},
    };
    for (const auto& c : commands) app.add_subcommand(c[0], c[1]);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : qmodes::kExitConfig;
    }

    opt.config = config;
    if (*out_opt) opt.out = out;
    if (*seed_opt) opt.seed = seed;
    if (*grid_opt) opt.grid = grid;

    std::signal(SIGINT, on_sigint);
    const std::string name = app.get_subcommands().front()->get_name();
    return qmodes::run_command(name, opt, std::cout, std::cerr, &g_stop);
}
