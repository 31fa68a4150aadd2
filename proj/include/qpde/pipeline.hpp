#pragma once

// End-to-end experiment: march the channel column by column, solving every
// marching system either classically, by exhaustive search over its QUBO, or
// by warm-started QAOA. Quantum-route columns are decoded from bits and fed
// into the next step, so representation error propagates downstream.

#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"

#include "qpde/classical_solver.hpp"
#include "qpde/mesh_model.hpp"
#include "qpde/optimizer.hpp"
#include "qpde/qaoa_engine.hpp"
#include "qpde/qubo_encoding.hpp"

namespace qpde {

enum class SolverMode { classical, qaoa, brute_force };

std::string to_string(SolverMode mode);
SolverMode parse_solver_mode(const std::string& text);

struct InletSpec {
    double low = 4.0;
    double high = 8.0;
    double split = 0.5;  // fraction of h; nodes at or below take `low`
};

struct RunConfig {
    PhysicalParams params = PhysicalParams::air_reference();
    std::size_t M = 5;
    std::size_t N = 5;
    InletSpec inlet;
    std::vector<int> exponents{0, 1, 2, 3, 4};
    std::size_t p = 3;
    OptimizerConfig optimizer{};
    double epsilon = 0.25;
    std::uint64_t shots = 4096;
    SolverMode solver_mode = SolverMode::brute_force;
    std::uint64_t seed = 0;
    bool reuse_params = false;

    /// Throws ConfigError on any violated invariant.
    void validate() const;

    static RunConfig from_json(const nlohmann::json& doc);
    static RunConfig from_file(const std::filesystem::path& path);
    nlohmann::json to_json() const;
};

struct StepReport {
    int step;                        // index of the column produced (1..M-1)
    std::vector<double> decoded;     // column fed forward
    std::vector<double> classical;   // same column of the pure classical march
    std::vector<double> relaxed;     // exact solve of this step's own system
    double max_abs_deviation;        // decoded vs classical
    double local_deviation;          // decoded vs relaxed
    double residual_energy;          // ||A decoded - rhs||^2
    double ground_energy = std::numeric_limits<double>::quiet_NaN();
    double final_expectation = std::numeric_limits<double>::quiet_NaN();
    int out_of_range = 0;            // relaxed components outside [0, max representable]
};

struct ComparisonReport {
    SolverMode mode;
    std::vector<StepReport> steps;
    double field_max_deviation = 0.0;
};

struct RunResult {
    TemperatureField field;
    TemperatureField classical;
    ComparisonReport report;
    std::vector<OptimizationTrace> traces;  // one per step, qaoa mode only
};

RunResult run(const RunConfig& config);

struct QaoaSettings {
    std::size_t p = 3;
    double epsilon = 0.25;
    std::uint64_t shots = 4096;
    OptimizerConfig optimizer{};
    std::uint64_t sample_seed = 0;
};

struct QaoaSolve {
    Bitstring bits;                 // best sampled assignment
    std::vector<double> decoded;
    double energy;                  // QUBO energy of `bits`
    double ground_energy;           // exact minimum of the table
    double initial_expectation;     // warm-start state, zero angles
    double final_expectation;       // optimized angles
    OptimizationTrace trace;
};

/// Warm-started QAOA on ||A s - b||^2 (A dense row-major). The warm start
/// rounds `relaxed` to the nearest representable values; the optimizer starts
/// from `initial_angles` (flattened gammas then betas) or zeros when empty.
/// Phases use the normalized table, expectations the true energies.
QaoaSolve warm_start_qaoa(std::span<const double> a_dense, std::span<const double> rhs,
                          std::span<const double> relaxed, const BitWeighting& weighting,
                          const QaoaSettings& settings,
                          std::span<const double> initial_angles = {});

/// The marching system of step `step` (1-based column produced) for the
/// configured mode, i.e. fed by that mode's own previous columns.
MarchingSystem system_at_step(const RunConfig& config, int step);

/// CSV `x,y,T`, rows ordered by x then y.
void emit_field(const TemperatureField& field, const std::filesystem::path& path);

/// Writes the per-step CSV to `csv_path` and a text summary beside it (.txt).
void emit_report(const ComparisonReport& report, const std::filesystem::path& csv_path);

/// Per-step optimizer traces as `trace_step_<i>.csv` in `dir`.
void emit_traces(const RunResult& result, std::size_t layers, const std::filesystem::path& dir);

}  // namespace qpde
