#include "twoway/config.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <vector>

namespace twoway {

std::string command_name(Command c) {
    switch (c) {
        case Command::Simulate: return "simulate";
        case Command::CoverageGrid: return "coverage-grid";
        case Command::Qq: return "qq";
        case Command::Diagnose: return "diagnose";
        case Command::Decide: return "decide";
        case Command::BootstrapCi: return "bootstrap-ci";
    }
    return "unknown";
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct RawEntry {
    std::string value;
    int line = 0;
};

using RawMap = std::map<std::string, RawEntry>;

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& key, const RawEntry& e) {
    const std::string v = e.value;
    double out = 0.0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        fail(e.line, "key \"" + key + "\": expected a real number, got \"" + v + "\"");
    return out;
}

std::int64_t parse_int(const std::string& key, const RawEntry& e) {
    const std::string v = e.value;
    std::int64_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        fail(e.line, "key \"" + key + "\": expected an integer, got \"" + v + "\"");
    return out;
}

std::uint64_t parse_u64(const std::string& key, const RawEntry& e) {
    const std::string v = e.value;
    std::uint64_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        fail(e.line, "key \"" + key + "\": expected a non-negative integer, got \"" + v + "\"");
    return out;
}

bool parse_bool(const std::string& key, const RawEntry& e) {
    if (e.value == "true")
        return true;
    if (e.value == "false")
        return false;
    fail(e.line, "key \"" + key + "\": expected true or false, got \"" + e.value + "\"");
}

std::vector<std::string> split_list(const std::string& key, const RawEntry& e) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : e.value) {
        if (c == ',') {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(trim(cur));
    for (const auto& p : parts)
        if (p.empty())
            fail(e.line, "key \"" + key + "\": empty list element");
    return parts;
}

std::vector<double> parse_double_list(const std::string& key, const RawEntry& e) {
    std::vector<double> out;
    for (const auto& p : split_list(key, e))
        out.push_back(parse_double(key, RawEntry{p, e.line}));
    return out;
}

std::vector<int> parse_int_list(const std::string& key, const RawEntry& e) {
    std::vector<int> out;
    for (const auto& p : split_list(key, e)) {
        std::int64_t v = parse_int(key, RawEntry{p, e.line});
        out.push_back(static_cast<int>(v));
    }
    return out;
}

// ---- key registry ----

constexpr unsigned kSimulate = 1u << 0;
constexpr unsigned kCoverageGrid = 1u << 1;
constexpr unsigned kQq = 1u << 2;
constexpr unsigned kDiagnose = 1u << 3;
constexpr unsigned kDecide = 1u << 4;
constexpr unsigned kBootstrapCi = 1u << 5;
constexpr unsigned kAll = kSimulate | kCoverageGrid | kQq | kDiagnose | kDecide | kBootstrapCi;
constexpr unsigned kSpecCommands = kSimulate | kQq | kDiagnose | kDecide;
constexpr unsigned kHeavy = kCoverageGrid | kQq | kDiagnose | kBootstrapCi;

unsigned command_bit(Command c) {
    switch (c) {
        case Command::Simulate: return kSimulate;
        case Command::CoverageGrid: return kCoverageGrid;
        case Command::Qq: return kQq;
        case Command::Diagnose: return kDiagnose;
        case Command::Decide: return kDecide;
        case Command::BootstrapCi: return kBootstrapCi;
    }
    return 0;
}

struct KeyInfo {
    const char* key;
    unsigned allowed;
    unsigned required;
};

// spec.* keys are required as a group for simulate/qq/diagnose; for decide
// the group is optional but all-or-nothing (enforced after the scan).
constexpr KeyInfo kKeys[] = {
    {"command", kAll, kAll},
    {"seed", kAll, 0},
    {"output", kAll, 0},
    {"workers", kHeavy, 0},
    {"input", kBootstrapCi, kBootstrapCi},
    {"replications", kQq, 0},
    {"mc_draws", kDiagnose, 0},
    {"correction_factor", kCoverageGrid, 0},
    {"spec.n_rows", kSpecCommands, 0},
    {"spec.n_cols", kSpecCommands, 0},
    {"spec.n_factors", kSpecCommands, 0},
    {"spec.delta", kSpecCommands, 0},
    {"spec.phi", kSpecCommands, 0},
    {"spec.weights", kSpecCommands, 0},
    {"grid.deltas", kCoverageGrid, kCoverageGrid},
    {"grid.js", kCoverageGrid, kCoverageGrid},
    {"grid.phis", kCoverageGrid, kCoverageGrid},
    {"grid.replications", kCoverageGrid, kCoverageGrid},
    {"grid.n_rows", kCoverageGrid, 0},
    {"grid.n_cols", kCoverageGrid, 0},
    {"grid.level", kCoverageGrid, 0},
    {"bootstrap.n_draws", kCoverageGrid | kBootstrapCi, 0},
    {"bootstrap.multiplier", kCoverageGrid | kBootstrapCi, 0},
    {"bootstrap.include_degenerate_term", kCoverageGrid | kBootstrapCi, 0},
    {"bootstrap.level", kCoverageGrid | kBootstrapCi, 0},
    {"decide.j_small_threshold", kDecide, 0},
    {"decide.j_small", kDecide, 0},
    {"decide.alpha0_degenerate", kDecide, 0},
    {"decide.gamma0_degenerate", kDecide, 0},
    {"decide.eps_degenerate", kDecide, 0},
    {"decide.nondegenerate", kDecide, 0},
    {"decide.sparse_network", kDecide, 0},
    {"decide.very_few_factors", kDecide, 0},
};

const KeyInfo* find_key(const std::string& key) {
    for (const auto& k : kKeys)
        if (key == k.key)
            return &k;
    return nullptr;
}

RawMap scan_lines(const std::string& text) {
    RawMap raw;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string line = nl == std::string::npos ? text.substr(pos)
                                                   : text.substr(pos, nl - pos);
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            fail(line_no, "expected key = value, got \"" + line + "\"");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            fail(line_no, "missing key before '='");
        if (value.empty())
            fail(line_no, "key \"" + key + "\": missing value");
        if (!find_key(key))
            fail(line_no, "unknown key \"" + key + "\"");
        if (raw.count(key))
            fail(line_no, "duplicate key \"" + key + "\"");
        raw[key] = RawEntry{value, line_no};
    }
    return raw;
}

Command parse_command(const RawEntry& e) {
    for (Command c : {Command::Simulate, Command::CoverageGrid, Command::Qq,
                      Command::Diagnose, Command::Decide, Command::BootstrapCi})
        if (e.value == command_name(c))
            return c;
    fail(e.line, "key \"command\": unknown command \"" + e.value + "\"");
}

std::size_t parse_positive_size(const std::string& key, const RawEntry& e) {
    std::int64_t v = parse_int(key, e);
    if (v < 1)
        fail(e.line, "key \"" + key + "\": must be >= 1");
    return static_cast<std::size_t>(v);
}

DgpSpec build_spec(const RawMap& raw) {
    DgpSpec spec;
    spec.n_rows = parse_positive_size("spec.n_rows", raw.at("spec.n_rows"));
    spec.n_cols = parse_positive_size("spec.n_cols", raw.at("spec.n_cols"));
    spec.n_factors = parse_positive_size("spec.n_factors", raw.at("spec.n_factors"));
    spec.delta = parse_double("spec.delta", raw.at("spec.delta"));
    spec.phi = parse_double("spec.phi", raw.at("spec.phi"));
    if (auto it = raw.find("spec.weights"); it != raw.end())
        spec.weights = parse_double_list("spec.weights", it->second);
    try {
        spec.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("spec: ") + e.what());
    }
    return spec;
}

BootstrapConfig build_bootstrap(const RawMap& raw) {
    BootstrapConfig bc;
    if (auto it = raw.find("bootstrap.n_draws"); it != raw.end()) {
        std::int64_t v = parse_int("bootstrap.n_draws", it->second);
        if (v < 1)
            fail(it->second.line, "key \"bootstrap.n_draws\": must be >= 1");
        bc.n_draws = static_cast<int>(v);
    }
    if (auto it = raw.find("bootstrap.multiplier"); it != raw.end()) {
        if (it->second.value == "gaussian")
            bc.multiplier = Multiplier::GaussianMultiplier;
        else if (it->second.value == "rademacher")
            bc.multiplier = Multiplier::Rademacher;
        else
            fail(it->second.line,
                 "key \"bootstrap.multiplier\": expected gaussian or rademacher, got \"" +
                     it->second.value + "\"");
    }
    if (auto it = raw.find("bootstrap.include_degenerate_term"); it != raw.end())
        bc.include_degenerate_term = parse_bool("bootstrap.include_degenerate_term", it->second);
    if (auto it = raw.find("bootstrap.level"); it != raw.end()) {
        bc.level = parse_double("bootstrap.level", it->second);
        if (!(bc.level > 0.0 && bc.level < 1.0))
            fail(it->second.line, "key \"bootstrap.level\": must lie in (0,1)");
    }
    return bc;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RawMap raw = scan_lines(text);

    auto cmd_it = raw.find("command");
    if (cmd_it == raw.end())
        throw ConfigError("missing required key \"command\"");
    RunConfig cfg;
    cfg.command = parse_command(cmd_it->second);
    const unsigned bit = command_bit(cfg.command);

    for (const auto& [key, entry] : raw) {
        const KeyInfo* info = find_key(key);
        if (!(info->allowed & bit))
            fail(entry.line, "key \"" + key + "\" is not accepted by command \"" +
                                 command_name(cfg.command) + "\"");
    }
    for (const auto& k : kKeys)
        if ((k.required & bit) && !raw.count(k.key))
            throw ConfigError("missing required key \"" + std::string(k.key) +
                              "\" for command \"" + command_name(cfg.command) + "\"");

    // spec group: required for simulate/qq/diagnose, optional all-or-nothing
    // for decide.
    const char* spec_keys[] = {"spec.n_rows", "spec.n_cols", "spec.n_factors",
                               "spec.delta", "spec.phi"};
    const bool any_spec =
        std::any_of(std::begin(spec_keys), std::end(spec_keys),
                    [&raw](const char* k) { return raw.count(k) > 0; }) ||
        raw.count("spec.weights") > 0;
    const bool spec_required = cfg.command == Command::Simulate ||
                               cfg.command == Command::Qq || cfg.command == Command::Diagnose;
    if (spec_required || any_spec)
        for (const char* k : spec_keys)
            if (!raw.count(k))
                throw ConfigError("missing required key \"" + std::string(k) +
                                  "\" for command \"" + command_name(cfg.command) + "\"");
    if (spec_required || any_spec)
        cfg.spec = build_spec(raw);

    if (auto it = raw.find("seed"); it != raw.end())
        cfg.seed = parse_u64("seed", it->second);
    if (auto it = raw.find("output"); it != raw.end())
        cfg.output_path = it->second.value;
    if (auto it = raw.find("input"); it != raw.end())
        cfg.input_path = it->second.value;
    if (auto it = raw.find("workers"); it != raw.end()) {
        std::int64_t v = parse_int("workers", it->second);
        if (v < 1)
            fail(it->second.line, "key \"workers\": must be >= 1");
        cfg.workers = static_cast<int>(v);
    }
    if (auto it = raw.find("replications"); it != raw.end()) {
        std::int64_t v = parse_int("replications", it->second);
        if (v < 100)
            fail(it->second.line, "key \"replications\": must be >= 100");
        cfg.replications = static_cast<int>(v);
    }
    if (auto it = raw.find("mc_draws"); it != raw.end()) {
        std::int64_t v = parse_int("mc_draws", it->second);
        if (v < 1000)
            fail(it->second.line, "key \"mc_draws\": must be >= 1000");
        cfg.mc_draws = static_cast<std::size_t>(v);
    }
    if (auto it = raw.find("correction_factor"); it != raw.end()) {
        cfg.correction_factor = parse_double("correction_factor", it->second);
        if (!(cfg.correction_factor > 0.0))
            fail(it->second.line, "key \"correction_factor\": must be > 0");
    }

    cfg.bootstrap = build_bootstrap(raw);

    if (cfg.command == Command::CoverageGrid) {
        GridSpec grid;
        grid.deltas = parse_double_list("grid.deltas", raw.at("grid.deltas"));
        grid.js = parse_int_list("grid.js", raw.at("grid.js"));
        grid.phis = parse_double_list("grid.phis", raw.at("grid.phis"));
        {
            const auto& e = raw.at("grid.replications");
            std::int64_t v = parse_int("grid.replications", e);
            if (v < 100)
                fail(e.line, "key \"grid.replications\": must be >= 100");
            grid.replications = static_cast<int>(v);
        }
        if (auto it = raw.find("grid.n_rows"); it != raw.end())
            grid.n_rows = parse_positive_size("grid.n_rows", it->second);
        if (auto it = raw.find("grid.n_cols"); it != raw.end())
            grid.n_cols = parse_positive_size("grid.n_cols", it->second);
        if (auto it = raw.find("grid.level"); it != raw.end()) {
            grid.level = parse_double("grid.level", it->second);
            if (!(grid.level > 0.0 && grid.level < 1.0))
                fail(it->second.line, "key \"grid.level\": must lie in (0,1)");
        }
        grid.bootstrap = cfg.bootstrap;
        grid.correction_factor = cfg.correction_factor;
        try {
            grid.validate();
        } catch (const std::exception& e) {
            throw ConfigError(std::string("grid: ") + e.what());
        }
        cfg.grid = grid;
    }

    if (auto it = raw.find("decide.j_small_threshold"); it != raw.end()) {
        std::int64_t v = parse_int("decide.j_small_threshold", it->second);
        if (v < 1)
            fail(it->second.line, "key \"decide.j_small_threshold\": must be >= 1");
        cfg.j_small_threshold = static_cast<int>(v);
    }
    auto opt_bool = [&raw](const char* key) -> std::optional<bool> {
        if (auto it = raw.find(key); it != raw.end())
            return parse_bool(key, it->second);
        return std::nullopt;
    };
    cfg.j_small = opt_bool("decide.j_small");
    cfg.alpha0_degenerate = opt_bool("decide.alpha0_degenerate");
    cfg.gamma0_degenerate = opt_bool("decide.gamma0_degenerate");
    cfg.eps_degenerate = opt_bool("decide.eps_degenerate");
    cfg.nondegenerate = opt_bool("decide.nondegenerate");
    cfg.sparse_network = opt_bool("decide.sparse_network");
    cfg.very_few_factors = opt_bool("decide.very_few_factors");

    if (cfg.command == Command::Decide)
        resolve_characterization(cfg);  // validates completeness up front
    return cfg;
}

std::uint64_t resolve_seed(const RunConfig& config, std::optional<std::uint64_t> flag_seed,
                           std::optional<std::string> env_value) {
    if (flag_seed)
        return *flag_seed;
    if (env_value) {
        const std::string& v = *env_value;
        std::uint64_t out = 0;
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc() || p != v.data() + v.size())
            throw ConfigError("TWOWAY_SEED: expected a non-negative integer, got \"" + v + "\"");
        return out;
    }
    if (config.seed)
        return *config.seed;
    throw ConfigError("no seed given: set key \"seed\", the TWOWAY_SEED environment "
                      "variable, or the --seed flag");
}

DgpCharacterization resolve_characterization(const RunConfig& config) {
    DgpCharacterization c;
    if (config.spec)
        c = characterize_spec(*config.spec, config.j_small_threshold);
    auto merge = [](std::optional<bool>& slot, const std::optional<bool>& explicit_value) {
        if (explicit_value)
            slot = explicit_value;
    };
    if (config.j_small)
        c.j_small = *config.j_small;
    if (config.alpha0_degenerate)
        c.alpha0_degenerate = *config.alpha0_degenerate;
    if (config.gamma0_degenerate)
        c.gamma0_degenerate = *config.gamma0_degenerate;
    if (config.eps_degenerate)
        c.eps_degenerate = *config.eps_degenerate;
    merge(c.nondegenerate_assumed, config.nondegenerate);
    merge(c.sparse_network, config.sparse_network);
    merge(c.very_few_factors, config.very_few_factors);

    if (!config.spec) {
        const std::pair<const char*, bool> table_given[] = {
            {"decide.j_small", config.j_small.has_value()},
            {"decide.alpha0_degenerate", config.alpha0_degenerate.has_value()},
            {"decide.gamma0_degenerate", config.gamma0_degenerate.has_value()},
            {"decide.eps_degenerate", config.eps_degenerate.has_value()},
        };
        for (const auto& [key, given] : table_given)
            if (!given)
                throw ConfigError("decide without a spec: missing key \"" + std::string(key) +
                                  "\"");
    }
    const std::pair<const char*, bool> tree_needed[] = {
        {"decide.nondegenerate", c.nondegenerate_assumed.has_value()},
        {"decide.sparse_network", c.sparse_network.has_value()},
        {"decide.very_few_factors", c.very_few_factors.has_value()},
    };
    for (const auto& [key, given] : tree_needed)
        if (!given)
            throw ConfigError("decide: missing key \"" + std::string(key) + "\"");
    return c;
}

}  // namespace twoway
