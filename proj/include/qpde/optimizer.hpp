#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace qpde {

struct OptimizerConfig {
    int max_evals = 200;      // per restart
    double tol = 1e-6;        // stop when the simplex value spread drops below this
    int restarts = 0;         // extra runs started around the best point so far
    std::uint64_t seed = 0;   // drives restart simplex perturbations
    double initial_step = 0.1;

    void validate() const;
};

struct TraceEntry {
    int eval_index;
    int restart;
    std::vector<double> params;
    double value;
};

struct OptimizationTrace {
    std::vector<TraceEntry> entries;
    std::vector<double> best_params;
    double best_value;
    int best_restart;
};

using Objective = std::function<double(std::span<const double>)>;

/// Nelder-Mead (reflect 1, expand 2, contract 0.5, shrink 0.5). The first
/// evaluation is always `initial`, so best_value <= objective(initial).
/// Throws NumericalError on a non-finite objective value.
OptimizationTrace minimize(const Objective& objective, std::span<const double> initial,
                           const OptimizerConfig& config);

/// CSV with header `eval_index,<names...>,expectation`.
void write_trace_csv(const OptimizationTrace& trace, std::span<const std::string> param_names,
                     std::ostream& os);

}  // namespace qpde
