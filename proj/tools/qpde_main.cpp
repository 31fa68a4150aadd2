// qpde: march the heated-channel problem classically or through its QUBO
// (exhaustive search or simulated QAOA) and write CSV results.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qpde/errors.hpp"
#include "qpde/pipeline.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonOptions {
    std::string config_path;
    std::string mode;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    bool reuse_params = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path, "JSON run configuration (defaults if omitted)");
    cmd->add_option("--mode", opts.mode, "solver mode")
        ->check(CLI::IsMember({"classical", "qaoa", "brute_force"}));
    cmd->add_option("--out", opts.out, "output directory");
    cmd->add_option("--seed", opts.seed, "seed for sampling and optimizer restarts");
    cmd->add_flag("--reuse-params", opts.reuse_params,
                  "start each QAOA step from the previous step's optimal angles");
}

qpde::RunConfig load(const CommonOptions& opts) {
    qpde::RunConfig cfg = opts.config_path.empty() ? qpde::RunConfig{}
                                                   : qpde::RunConfig::from_file(opts.config_path);
    if (!opts.mode.empty()) cfg.solver_mode = qpde::parse_solver_mode(opts.mode);
    if (opts.seed) {
        cfg.seed = *opts.seed;
        cfg.optimizer.seed = *opts.seed;
    }
    if (opts.reuse_params) cfg.reuse_params = true;
    cfg.validate();
    return cfg;
}

std::filesystem::path prepare_dir(const std::string& out) {
    std::filesystem::path dir(out);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw qpde::IoError("cannot create output directory '" + out + "': " + ec.message());
    return dir;
}

int cmd_run(const CommonOptions& opts) {
    const auto cfg = load(opts);
    const auto dir = prepare_dir(opts.out);
    const auto result = qpde::run(cfg);
    const bool classical = cfg.solver_mode == qpde::SolverMode::classical;
    qpde::emit_field(result.field, dir / (classical ? "field_classical.csv" : "field_quantum.csv"));
    qpde::emit_traces(result, cfg.p, dir);
    std::cout << "mode " << qpde::to_string(cfg.solver_mode) << ": " << result.report.steps.size()
              << " marching steps written to " << dir.string() << '\n';
    return 0;
}

int cmd_compare(const CommonOptions& opts) {
    const auto cfg = load(opts);
    const auto dir = prepare_dir(opts.out);
    const auto result = qpde::run(cfg);
    qpde::emit_field(result.classical, dir / "field_classical.csv");
    qpde::emit_field(result.field, dir / "field_quantum.csv");
    qpde::emit_report(result.report, dir / "report.csv");
    qpde::emit_traces(result, cfg.p, dir);
    std::cout << "classical vs " << qpde::to_string(cfg.solver_mode)
              << ": max field deviation " << result.report.field_max_deviation << '\n';
    for (const auto& s : result.report.steps) {
        std::cout << "  step " << s.step << ": max dev " << s.max_abs_deviation << ", residual "
                  << s.residual_energy << '\n';
    }
    return 0;
}

int cmd_export_qubo(const CommonOptions& opts, int step, const std::string& path) {
    auto cfg = load(opts);
    if (cfg.solver_mode == qpde::SolverMode::classical) cfg.solver_mode = qpde::SolverMode::brute_force;
    const auto sys = qpde::system_at_step(cfg, step);
    const auto qubo = qpde::encode_qubo(sys, qpde::BitWeighting(cfg.exponents));
    std::ofstream os(path);
    if (!os) throw qpde::IoError("cannot open '" + path + "' for writing");
    qubo.write_text(os);
    if (!os) throw qpde::IoError("failed writing '" + path + "'");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heated-channel marching solver with QUBO / QAOA linear solves"};
    app.require_subcommand(1);

    CommonOptions run_opts, cmp_opts, qubo_opts;
    auto* run = app.add_subcommand("run", "march with one solver mode and write its field");
    add_common(run, run_opts);
    auto* compare = app.add_subcommand("compare", "run classical and the chosen mode, write report");
    add_common(compare, cmp_opts);
    auto* export_qubo = app.add_subcommand("export-qubo", "write one step's QUBO as text");
    add_common(export_qubo, qubo_opts);
    int step = 1;
    std::string qubo_path = "qubo.txt";
    export_qubo->add_option("--step", step, "marching step (1-based column produced)");
    export_qubo->add_option("--file", qubo_path, "output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run) return cmd_run(run_opts);
        if (*compare) return cmd_compare(cmp_opts);
        if (*export_qubo) return cmd_export_qubo(qubo_opts, step, qubo_path);
    } catch (const qpde::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const qpde::CapacityError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const qpde::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
