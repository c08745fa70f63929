// Command-line front end: runs the command named in a strict config file
// and writes CSV (or a one-line verdict) to the chosen output. All
// randomness flows from one seed with precedence --seed flag, then the
// TWOWAY_SEED environment variable, then the config key.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "twoway/config.hpp"
#include "twoway/csv.hpp"

namespace {

using namespace twoway;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open config file \"" + path + "\"");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void apply_workers(const RunConfig& cfg, std::optional<int> workers_flag) {
    std::optional<int> workers = workers_flag ? workers_flag : cfg.workers;
    if (!workers)
        return;
#ifdef _OPENMP
    omp_set_num_threads(*workers);
#endif
}

void emit_interval_csv(const IntervalResult& r, std::ostream& out, Precision precision) {
    out << "method,estimate,std_error,ci_lower,ci_upper,level,flags\n";
    out << method_name(r.method) << ',' << format_real(r.estimate, precision) << ','
        << format_real(r.std_error, precision) << ',' << format_real(r.ci_lower, precision)
        << ',' << format_real(r.ci_upper, precision) << ',' << format_real(r.level, precision)
        << ',' << flag_names(r.flags) << '\n';
}

void emit_report_csv(const AssumptionReport& rep, std::ostream& out, Precision precision) {
    out << "metric,value,mc_std_error\n";
    out << "lyapunov_ratio," << format_real(rep.lyapunov_ratio, precision) << ','
        << format_real(rep.mc_std_errors.lyapunov, precision) << '\n';
    out << "hall_ratio," << format_real(rep.hall_ratio, precision) << ','
        << format_real(rep.mc_std_errors.hall, precision) << '\n';
    out << "a2_first_ratio," << format_real(rep.a2_first_ratio, precision) << ','
        << format_real(rep.mc_std_errors.a2_first, precision) << '\n';
    out << "a2_second_ratio," << format_real(rep.a2_second_ratio, precision) << ','
        << format_real(rep.mc_std_errors.a2_second, precision) << '\n';
    out << "eigen_ratio," << format_real(rep.eigen_ratio, precision) << ','
        << format_real(rep.mc_std_errors.eigen, precision) << '\n';
}

int run(const std::string& config_path, std::optional<std::uint64_t> seed_flag,
        std::optional<int> workers_flag, const std::string& output_flag,
        Precision precision) {
    RunConfig cfg = parse_config(read_file(config_path));

    // decide consumes no randomness, so it alone runs without a seed.
    const char* env = std::getenv("TWOWAY_SEED");
    const std::uint64_t seed =
        cfg.command == Command::Decide
            ? 0
            : resolve_seed(cfg, seed_flag,
                           env ? std::optional<std::string>(env) : std::nullopt);
    apply_workers(cfg, workers_flag);

    const std::string out_path = !output_flag.empty() ? output_flag : cfg.output_path;
    std::ofstream file_out;
    if (!out_path.empty()) {
        file_out.open(out_path, std::ios::binary);
        if (!file_out)
            throw std::runtime_error("cannot open output file \"" + out_path + "\"");
    }
    std::ostream& out = out_path.empty() ? std::cout : file_out;

    switch (cfg.command) {
        case Command::Simulate: {
            const LatentDraw latents = sample_latents(*cfg.spec, seed);
            write_panel_csv(assemble_panel(*cfg.spec, latents), out);
            break;
        }
        case Command::CoverageGrid: {
            GridSpec grid = *cfg.grid;
            grid.master_seed = seed;
            emit_grid_csv(run_grid(grid), out, precision);
            break;
        }
        case Command::Qq: {
            emit_qq_csv(qq_cell(*cfg.spec, cfg.replications, seed), out, precision);
            break;
        }
        case Command::Diagnose: {
            emit_report_csv(assumption_report(*cfg.spec, cfg.mc_draws, seed), out, precision);
            break;
        }
        case Command::Decide: {
            const DgpCharacterization c = resolve_characterization(cfg);
            const TreeDecision tree = tree_verdict(c);
            out << "verdict=" << tree_verdict_name(tree.verdict) << " gate=" << tree.gate
                << " table=" << table_verdict_name(table_verdict(c)) << '\n';
            break;
        }
        case Command::BootstrapCi: {
            std::ifstream in(cfg.input_path, std::ios::binary);
            if (!in)
                throw std::runtime_error("cannot open input file \"" + cfg.input_path + "\"");
            const Panel panel = read_panel_csv(in);
            emit_interval_csv(two_way_wild_bootstrap(panel, cfg.bootstrap, seed), out,
                              precision);
            break;
        }
    }
    if (!out_path.empty() && !file_out.good())
        throw std::runtime_error("failed writing output file \"" + out_path + "\"");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-way clustered mean inference: estimation, bootstrap, "
                 "diagnostics, and Monte Carlo coverage experiments"};
    std::string config_path;
    app.add_option("--config", config_path, "Path to the run config file")->required();
    std::optional<std::uint64_t> seed_flag;
    app.add_option("--seed", seed_flag, "Seed override (beats TWOWAY_SEED and the config)");
    std::optional<int> workers_flag;
    app.add_option("--workers", workers_flag,
                   "Worker thread count; output is identical for any value");
    std::string output_flag;
    app.add_option("--output", output_flag, "Output path override (default: config, else stdout)");
    std::string precision_name = "six";
    app.add_option("--precision", precision_name,
                   "Real formatting: six (6 significant digits) or full (exact round-trip)")
        ->check(CLI::IsMember({"six", "full"}));
    CLI11_PARSE(app, argc, argv);

    try {
        const Precision precision =
            precision_name == "full" ? Precision::Full : Precision::SixDigits;
        return run(config_path, seed_flag, workers_flag, output_flag, precision);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
