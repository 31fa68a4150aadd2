#include "qpde/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qpde/csv.hpp"
#include "qpde/energy_enumeration.hpp"
#include "qpde/errors.hpp"

namespace qpde {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& [key, value] : obj.items()) {
        const bool known = std::ranges::any_of(allowed, [&](const char* a) { return key == a; });
        if (!known) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

template <class T>
void read_field(const json& obj, const char* key, T& out, const std::string& where) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(where + "." + key + ": " + e.what());
    }
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
    return os;
}

void finish(std::ofstream& os, const std::filesystem::path& path) {
    os.flush();
    if (!os) throw IoError("failed writing '" + path.string() + "'");
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double worst = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
    return worst;
}

double squared_residual(const MarchingSystem& sys, std::span<const double> x) {
    const auto ax = sys.apply(x);
    double s = 0.0;
    for (std::size_t k = 0; k < ax.size(); ++k) {
        const double d = ax[k] - sys.rhs()[k];
        s += d * d;
    }
    return s;
}

struct QuantumStep {
    std::vector<double> decoded;
    double ground_energy;
};

QuantumStep solve_brute_force(const MarchingSystem& sys, const BitWeighting& weighting) {
    const auto qubo = encode_qubo(sys, weighting);
    const auto ground = brute_force_ground_state(qubo);
    return QuantumStep{decode(ground.bits, weighting), ground.energy};
}

}  // namespace

QaoaSolve warm_start_qaoa(std::span<const double> a_dense, std::span<const double> rhs,
                          std::span<const double> relaxed, const BitWeighting& weighting,
                          const QaoaSettings& settings, std::span<const double> initial_angles) {
    const auto qubo = encode_qubo(a_dense, rhs, weighting);
    const EnergyTable table = build_energy_table(qubo);
    const EnergyTable phases = table.normalized();

    const auto start_bits = encode_nearest(relaxed, weighting);
    const std::vector<double> relaxed_bits(start_bits.begin(), start_bits.end());
    const Statevector initial = warm_start_state(relaxed_bits, settings.epsilon);

    auto objective = [&](std::span<const double> x) {
        return expectation(run_circuit(phases, QaoaParams::unflatten(x), initial), table);
    };
    std::vector<double> x0(initial_angles.begin(), initial_angles.end());
    if (x0.empty()) x0.assign(2 * settings.p, 0.0);
    if (x0.size() != 2 * settings.p) throw ConfigError("initial angles do not match p");

    QaoaSolve out{};
    out.initial_expectation = expectation(initial, table);
    out.trace = minimize(objective, x0, settings.optimizer);
    const Statevector final_state =
        run_circuit(phases, QaoaParams::unflatten(out.trace.best_params), initial);
    out.final_expectation = expectation(final_state, table);
    const auto best = best_sampled(sample(final_state, settings.shots, settings.sample_seed), table);
    out.bits = index_to_bits(best.index, qubo.n);
    out.decoded = decode(out.bits, weighting);
    out.energy = best.energy;
    out.ground_energy = table.min();
    return out;
}

std::string to_string(SolverMode mode) {
    switch (mode) {
        case SolverMode::classical: return "classical";
        case SolverMode::qaoa: return "qaoa";
        case SolverMode::brute_force: return "brute_force";
    }
    return "unknown";
}

SolverMode parse_solver_mode(const std::string& text) {
    if (text == "classical") return SolverMode::classical;
    if (text == "qaoa") return SolverMode::qaoa;
    if (text == "brute_force") return SolverMode::brute_force;
    throw ConfigError("solver_mode must be one of classical, qaoa, brute_force; got '" + text + "'");
}

void RunConfig::validate() const {
    try {
        params.validate();
        Mesh mesh(params, M, N);
        BitWeighting weighting(exponents);
        optimizer.validate();
        if (solver_mode != SolverMode::classical && weighting.bits() * N > kMaxEnumerationBits) {
            throw ConfigError("R*N = " + std::to_string(weighting.bits() * N) + " exceeds the " +
                              std::to_string(kMaxEnumerationBits) + "-bit capacity of mode " +
                              to_string(solver_mode));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    if (!(inlet.split >= 0.0 && inlet.split <= 1.0)) throw ConfigError("inlet.split must lie in [0, 1]");
    if (!std::isfinite(inlet.low) || !std::isfinite(inlet.high)) {
        throw ConfigError("inlet temperatures must be finite");
    }
    if (p < 1) throw ConfigError("p must be >= 1");
    if (shots < 1) throw ConfigError("shots must be >= 1");
    if (!(epsilon > 0.0 && epsilon <= 0.5)) throw ConfigError("epsilon must lie in (0, 0.5]");
}

RunConfig RunConfig::from_json(const json& doc) {
    RunConfig c;
    reject_unknown(doc,
                   {"params", "M", "N", "inlet", "exponents", "p", "optimizer", "epsilon", "shots",
                    "solver_mode", "seed", "reuse_params"},
                   "config");
    if (doc.contains("params")) {
        const auto& p = doc.at("params");
        reject_unknown(p, {"k", "cp", "rho", "h", "b", "um", "qflux"}, "params");
        read_field(p, "k", c.params.k, "params");
        read_field(p, "cp", c.params.cp, "params");
        read_field(p, "rho", c.params.rho, "params");
        read_field(p, "h", c.params.h, "params");
        read_field(p, "b", c.params.b, "params");
        read_field(p, "um", c.params.um, "params");
        read_field(p, "qflux", c.params.qflux, "params");
    }
    read_field(doc, "M", c.M, "config");
    read_field(doc, "N", c.N, "config");
    if (doc.contains("inlet")) {
        const auto& in = doc.at("inlet");
        reject_unknown(in, {"low", "high", "split"}, "inlet");
        read_field(in, "low", c.inlet.low, "inlet");
        read_field(in, "high", c.inlet.high, "inlet");
        read_field(in, "split", c.inlet.split, "inlet");
    }
    read_field(doc, "exponents", c.exponents, "config");
    read_field(doc, "p", c.p, "config");
    if (doc.contains("optimizer")) {
        const auto& o = doc.at("optimizer");
        reject_unknown(o, {"max_evals", "tol", "restarts", "seed", "initial_step"}, "optimizer");
        read_field(o, "max_evals", c.optimizer.max_evals, "optimizer");
        read_field(o, "tol", c.optimizer.tol, "optimizer");
        read_field(o, "restarts", c.optimizer.restarts, "optimizer");
        read_field(o, "seed", c.optimizer.seed, "optimizer");
        read_field(o, "initial_step", c.optimizer.initial_step, "optimizer");
    }
    read_field(doc, "epsilon", c.epsilon, "config");
    read_field(doc, "shots", c.shots, "config");
    if (doc.contains("solver_mode")) {
        std::string mode;
        read_field(doc, "solver_mode", mode, "config");
        c.solver_mode = parse_solver_mode(mode);
    }
    read_field(doc, "seed", c.seed, "config");
    read_field(doc, "reuse_params", c.reuse_params, "config");
    c.validate();
    return c;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file '" + path.string() + "'");
    json doc;
    try {
        is >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return from_json(doc);
}

json RunConfig::to_json() const {
    return json{
        {"params",
         {{"k", params.k},
          {"cp", params.cp},
          {"rho", params.rho},
          {"h", params.h},
          {"b", params.b},
          {"um", params.um},
          {"qflux", params.qflux}}},
        {"M", M},
        {"N", N},
        {"inlet", {{"low", inlet.low}, {"high", inlet.high}, {"split", inlet.split}}},
        {"exponents", exponents},
        {"p", p},
        {"optimizer",
         {{"max_evals", optimizer.max_evals},
          {"tol", optimizer.tol},
          {"restarts", optimizer.restarts},
          {"seed", optimizer.seed},
          {"initial_step", optimizer.initial_step}}},
        {"epsilon", epsilon},
        {"shots", shots},
        {"solver_mode", to_string(solver_mode)},
        {"seed", seed},
        {"reuse_params", reuse_params},
    };
}

namespace {

RunResult run_steps(const RunConfig& config, std::size_t steps) {
    config.validate();
    const Mesh mesh(config.params, config.M, config.N);
    const auto inlet =
        InletProfile::step(mesh, config.params, config.inlet.low, config.inlet.high, config.inlet.split);
    const BitWeighting weighting(config.exponents);

    RunResult result{TemperatureField(mesh), march(config.params, mesh, inlet), {}, {}};
    result.report.mode = config.solver_mode;
    if (config.solver_mode == SolverMode::classical) result.field = result.classical;
    else std::ranges::copy(inlet.values(), result.field.column(0).begin());

    std::vector<double> carried_params;
    for (std::size_t i = 0; i < steps; ++i) {
        const int step = static_cast<int>(i + 1);
        try {
            const auto sys = assemble_system(config.params, mesh, result.field.column(i));
            const auto relaxed = solve_banded(sys);

            StepReport rep{};
            rep.step = step;
            rep.relaxed = relaxed;
            rep.classical.assign(result.classical.column(i + 1).begin(),
                                 result.classical.column(i + 1).end());
            for (double v : relaxed) {
                if (v < 0.0 || v > weighting.max_value()) ++rep.out_of_range;
            }

            switch (config.solver_mode) {
                case SolverMode::classical:
                    rep.decoded = rep.classical;
                    rep.out_of_range = 0;
                    break;
                case SolverMode::brute_force: {
                    auto qs = solve_brute_force(sys, weighting);
                    rep.decoded = std::move(qs.decoded);
                    rep.ground_energy = qs.ground_energy;
                    break;
                }
                case SolverMode::qaoa: {
                    QaoaSettings settings{.p = config.p,
                                          .epsilon = config.epsilon,
                                          .shots = config.shots,
                                          .optimizer = config.optimizer,
                                          .sample_seed = config.seed + static_cast<std::uint64_t>(step)};
                    settings.optimizer.seed += static_cast<std::uint64_t>(step);
                    const auto dense = sys.dense();
                    auto qs = warm_start_qaoa(dense, sys.rhs(), relaxed, weighting, settings,
                                              config.reuse_params ? std::span<const double>(carried_params)
                                                                  : std::span<const double>{});
                    rep.decoded = std::move(qs.decoded);
                    rep.ground_energy = qs.ground_energy;
                    rep.final_expectation = qs.final_expectation;
                    carried_params = qs.trace.best_params;
                    result.traces.push_back(std::move(qs.trace));
                    break;
                }
            }
            rep.max_abs_deviation = max_abs_diff(rep.decoded, rep.classical);
            rep.local_deviation = max_abs_diff(rep.decoded, rep.relaxed);
            rep.residual_energy = squared_residual(sys, rep.decoded);
            std::ranges::copy(rep.decoded, result.field.column(i + 1).begin());
            result.report.field_max_deviation =
                std::max(result.report.field_max_deviation, rep.max_abs_deviation);
            result.report.steps.push_back(std::move(rep));
        } catch (const NumericalError& e) {
            if (e.step()) throw;
            throw NumericalError(e.what(), step);
        }
    }
    return result;
}

}  // namespace

RunResult run(const RunConfig& config) { return run_steps(config, config.M - 1); }

MarchingSystem system_at_step(const RunConfig& config, int step) {
    if (step < 1 || static_cast<std::size_t>(step) >= config.M) {
        throw ConfigError("step must lie in [1, M-1]");
    }
    const auto res = run_steps(config, static_cast<std::size_t>(step - 1));
    const auto prev = res.field.column(static_cast<std::size_t>(step - 1));
    const Mesh mesh(config.params, config.M, config.N);
    return assemble_system(config.params, mesh, prev);
}

void emit_field(const TemperatureField& field, const std::filesystem::path& path) {
    auto os = open_out(path);
    const Mesh& mesh = field.mesh();
    os << "x,y,T\n";
    for (std::size_t i = 0; i < mesh.M(); ++i) {
        for (std::size_t j = 0; j < mesh.N(); ++j) {
            os << format_double(mesh.x(i)) << ',' << format_double(mesh.y(j)) << ','
               << format_double(field.at(i, j)) << '\n';
        }
    }
    finish(os, path);
}

void emit_report(const ComparisonReport& report, const std::filesystem::path& csv_path) {
    const std::size_t n = report.steps.empty() ? 0 : report.steps.front().decoded.size();
    {
        auto os = open_out(csv_path);
        os << "step,max_abs_deviation,local_deviation,residual_energy,ground_energy,"
              "final_expectation,out_of_range";
        for (std::size_t j = 1; j <= n; ++j) os << ",decoded_" << j;
        for (std::size_t j = 1; j <= n; ++j) os << ",classical_" << j;
        os << '\n';
        for (const auto& s : report.steps) {
            os << s.step << ',' << format_double(s.max_abs_deviation) << ','
               << format_double(s.local_deviation) << ',' << format_double(s.residual_energy) << ','
               << format_double(s.ground_energy) << ',' << format_double(s.final_expectation) << ','
               << s.out_of_range;
            for (double v : s.decoded) os << ',' << format_double(v);
            for (double v : s.classical) os << ',' << format_double(v);
            os << '\n';
        }
        finish(os, csv_path);
    }

    auto txt_path = csv_path;
    txt_path.replace_extension(".txt");
    auto os = open_out(txt_path);
    os << "mode: " << to_string(report.mode) << '\n';
    os << "steps: " << report.steps.size() << '\n';
    os << "field max |T_mode - T_classical|: " << format_double(report.field_max_deviation) << '\n';
    int clipped = 0;
    for (const auto& s : report.steps) {
        os << "step " << s.step << ": max dev " << format_double(s.max_abs_deviation)
           << ", local dev " << format_double(s.local_deviation) << ", residual "
           << format_double(s.residual_energy);
        if (!std::isnan(s.ground_energy)) os << ", ground " << format_double(s.ground_energy);
        if (!std::isnan(s.final_expectation)) os << ", <C> " << format_double(s.final_expectation);
        os << '\n';
        clipped += s.out_of_range;
    }
    if (clipped > 0) {
        os << "warning: " << clipped
           << " relaxed value(s) fell outside the representable range and saturated\n";
    }
    finish(os, txt_path);
}

void emit_traces(const RunResult& result, std::size_t layers, const std::filesystem::path& dir) {
    std::vector<std::string> names;
    for (std::size_t l = 1; l <= layers; ++l) names.push_back("gamma_" + std::to_string(l));
    for (std::size_t l = 1; l <= layers; ++l) names.push_back("beta_" + std::to_string(l));
    for (std::size_t s = 0; s < result.traces.size(); ++s) {
        const auto path = dir / ("trace_step_" + std::to_string(s + 1) + ".csv");
        auto os = open_out(path);
        write_trace_csv(result.traces[s], names, os);
        finish(os, path);
    }
}

}  // namespace qpde
