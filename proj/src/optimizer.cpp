#include "qpde/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include "qpde/csv.hpp"
#include "qpde/errors.hpp"

namespace qpde {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

struct BudgetExhausted {};

class Evaluator {
public:
    Evaluator(const Objective& f, int budget, OptimizationTrace& trace)
        : f_(f), budget_(budget), trace_(trace) {}

    void start_restart(int restart) {
        restart_ = restart;
        used_ = 0;
    }

    double operator()(const std::vector<double>& x) {
        if (used_ >= budget_) throw BudgetExhausted{};
        const double v = f_(x);
        if (!std::isfinite(v)) {
            throw NumericalError("objective returned a non-finite value at evaluation " +
                                 std::to_string(trace_.entries.size()));
        }
        ++used_;
        trace_.entries.push_back(
            {static_cast<int>(trace_.entries.size()), restart_, x, v});
        // Strict improvement keeps the earliest restart on ties.
        if (trace_.best_params.empty() || v < trace_.best_value) {
            trace_.best_params = x;
            trace_.best_value = v;
            trace_.best_restart = restart_;
        }
        return v;
    }

private:
    const Objective& f_;
    int budget_;
    int used_ = 0;
    int restart_ = 0;
    OptimizationTrace& trace_;
};

void nelder_mead(Evaluator& eval, std::vector<std::vector<double>> simplex, double tol) {
    const std::size_t n = simplex.front().size();
    std::vector<double> fv(simplex.size());
    for (std::size_t i = 0; i < simplex.size(); ++i) fv[i] = eval(simplex[i]);

    std::vector<std::size_t> order(simplex.size());
    auto point = [n](const std::vector<double>& from, const std::vector<double>& to, double t) {
        std::vector<double> out(n);
        for (std::size_t k = 0; k < n; ++k) out[k] = from[k] + t * (to[k] - from[k]);
        return out;
    };

    for (;;) {
        std::iota(order.begin(), order.end(), 0);
        std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[order.size() - 2];
        if (fv[worst] - fv[best] < tol) return;

        std::vector<double> c(n, 0.0);
        for (std::size_t i = 0; i < simplex.size(); ++i) {
            if (i == worst) continue;
            for (std::size_t k = 0; k < n; ++k) c[k] += simplex[i][k];
        }
        for (auto& ck : c) ck /= static_cast<double>(n);

        // Points along the ray from the centroid through (and past) the worst vertex.
        const auto xr = point(c, simplex[worst], -kReflect);
        const double fr = eval(xr);
        if (fr < fv[best]) {
            const auto xe = point(c, simplex[worst], -kExpand);
            const double fe = eval(xe);
            if (fe < fr) {
                simplex[worst] = xe;
                fv[worst] = fe;
            } else {
                simplex[worst] = xr;
                fv[worst] = fr;
            }
            continue;
        }
        if (fr < fv[second]) {
            simplex[worst] = xr;
            fv[worst] = fr;
            continue;
        }
        if (fr < fv[worst]) {
            const auto xc = point(c, xr, kContract);
            const double fc = eval(xc);
            if (fc <= fr) {
                simplex[worst] = xc;
                fv[worst] = fc;
                continue;
            }
        } else {
            const auto xc = point(c, simplex[worst], kContract);
            const double fc = eval(xc);
            if (fc < fv[worst]) {
                simplex[worst] = xc;
                fv[worst] = fc;
                continue;
            }
        }
        for (std::size_t i = 0; i < simplex.size(); ++i) {
            if (i == best) continue;
            simplex[i] = point(simplex[best], simplex[i], kShrink);
            fv[i] = eval(simplex[i]);
        }
    }
}

}  // namespace

void OptimizerConfig::validate() const {
    if (max_evals < 1) throw ConfigError("optimizer max_evals must be >= 1");
    if (!(tol > 0.0)) throw ConfigError("optimizer tol must be > 0");
    if (restarts < 0) throw ConfigError("optimizer restarts must be >= 0");
    if (!(initial_step > 0.0)) throw ConfigError("optimizer initial_step must be > 0");
}

OptimizationTrace minimize(const Objective& objective, std::span<const double> initial,
                           const OptimizerConfig& config) {
    config.validate();
    if (initial.empty()) throw ConfigError("cannot optimize over zero parameters");
    const std::size_t n = initial.size();

    OptimizationTrace trace{};
    Evaluator eval(objective, config.max_evals, trace);
    std::mt19937_64 rng(config.seed);

    for (int restart = 0; restart <= config.restarts; ++restart) {
        eval.start_restart(restart);
        std::vector<std::vector<double>> simplex;
        if (restart == 0) {
            simplex.emplace_back(initial.begin(), initial.end());
            for (std::size_t k = 0; k < n; ++k) {
                auto v = simplex.front();
                v[k] += config.initial_step;
                simplex.push_back(std::move(v));
            }
        } else {
            simplex.push_back(trace.best_params);
            for (std::size_t k = 0; k < n; ++k) {
                auto v = trace.best_params;
                // Random sign and length in [0.5, 1.5] steps along axis k.
                const double len = 0.5 + static_cast<double>(rng() >> 11) * 0x1.0p-53;
                const double sign = (rng() & 1U) ? 1.0 : -1.0;
                v[k] += sign * len * config.initial_step;
                simplex.push_back(std::move(v));
            }
        }
        try {
            nelder_mead(eval, std::move(simplex), config.tol);
        } catch (const BudgetExhausted&) {
        }
    }
    return trace;
}

void write_trace_csv(const OptimizationTrace& trace, std::span<const std::string> param_names,
                     std::ostream& os) {
    os << "eval_index";
    for (const auto& name : param_names) os << ',' << name;
    os << ",expectation\n";
    for (const auto& e : trace.entries) {
        os << e.eval_index;
        for (double v : e.params) os << ',' << format_double(v);
        os << ',' << format_double(e.value) << '\n';
    }
}

}  // namespace qpde
