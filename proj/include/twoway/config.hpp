// Run configuration: a strict flat key-value text format with dotted
// section prefixes. Unknown keys, keys that a command does not accept,
// type errors, and out-of-range values are all rejected by name with the
// line number; silent typos cannot redefine an experiment.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "twoway/bootstrap.hpp"
#include "twoway/decision.hpp"
#include "twoway/experiments.hpp"

namespace twoway {

enum class Command { Simulate, CoverageGrid, Qq, Diagnose, Decide, BootstrapCi };

std::string command_name(Command c);

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    Command command = Command::Simulate;
    std::optional<DgpSpec> spec;
    std::optional<GridSpec> grid;  // master_seed/correction filled at resolve time
    BootstrapConfig bootstrap;
    std::string output_path;  // empty means stdout
    std::string input_path;   // bootstrap-ci panel file
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    int replications = 2000;          // qq
    std::size_t mc_draws = 100000;    // diagnose
    double correction_factor = 1.0;   // coverage-grid
    int j_small_threshold = 10;
    // Explicit decide inputs; any that are set override what a spec implies.
    std::optional<bool> j_small, alpha0_degenerate, gamma0_degenerate, eps_degenerate;
    std::optional<bool> nondegenerate, sparse_network, very_few_factors;
};

// Parses and validates one config document. Throws ConfigError naming the
// offending key (and line where applicable).
RunConfig parse_config(const std::string& text);

// Seed precedence: command-line flag, then environment value, then config.
// env_value mirrors getenv: unset is nullopt; a set but malformed value is
// an error. Throws ConfigError when no source provides a seed.
std::uint64_t resolve_seed(const RunConfig& config, std::optional<std::uint64_t> flag_seed,
                           std::optional<std::string> env_value);

// The merged decide inputs: spec-derived when a spec is present, explicit
// flags layered on top. Throws ConfigError naming any missing input.
DgpCharacterization resolve_characterization(const RunConfig& config);

}  // namespace twoway
