#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "qmodes/config.hpp"
#include "qmodes/design.hpp"
#include "qmodes/export.hpp"

namespace qmodes {

struct CommandOptions {
    std::filesystem::path config;
    std::optional<std::filesystem::path> out;  // overrides output.dir
    std::optional<std::uint64_t> seed;         // overrides ga.seed
    std::optional<std::size_t> grid;           // sets both grid sizes
    bool quiet = false;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitInterrupted = 130;

// Loads the config and applies command-line overrides.
RunConfig prepare_config(const CommandOptions& opt);
ArtifactStamp make_stamp(const RunConfig& cfg);
std::filesystem::path output_directory(const RunConfig& cfg, const CommandOptions& opt);

// Each command writes its artifacts and returns an exit code; library errors
// propagate as exceptions.
int cmd_dispersion(const CommandOptions& opt, std::ostream& log);
int cmd_poling(const CommandOptions& opt, std::ostream& log);
int cmd_jsa(const CommandOptions& opt, std::ostream& log);
int cmd_purity(const CommandOptions& opt, std::ostream& log);
int cmd_filter(const CommandOptions& opt, std::ostream& log);
int cmd_optimize(const CommandOptions& opt, std::ostream& log,
                 const std::atomic<bool>* stop = nullptr);

// JSA/TF artifacts of one design point into dir; returns the report.
nlohmann::json write_jsa_outputs(const Design& design, const Overrides& overrides, int order,
                                 const std::filesystem::path& dir, const ArtifactStamp& stamp);

// Runs a command by name and maps errors to exit codes (2 config, 3 other),
// printing the message to err.
int run_command(const std::string& name, const CommandOptions& opt, std::ostream& log,
                std::ostream& err, const std::atomic<bool>* stop = nullptr);

}  // namespace qmodes
