#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "qpde/errors.hpp"
#include "qpde/optimizer.hpp"
#include "qpde/qaoa_engine.hpp"

using namespace qpde;

TEST_CASE("quadratic bowl") {
    auto bowl = [](std::span<const double> x) {
        return (x[0] - 1.0) * (x[0] - 1.0) + (x[1] + 2.0) * (x[1] + 2.0);
    };
    OptimizerConfig cfg;
    cfg.max_evals = 2000;
    cfg.tol = 1e-14;
    const std::vector<double> x0{0.0, 0.0};
    auto tr = minimize(bowl, x0, cfg);
    CHECK(tr.best_params[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(std::abs(tr.best_params[1] + 2.0) <= 1e-4);
    CHECK(tr.best_value <= bowl(x0));
    CHECK(tr.entries.front().params == x0);
}

TEST_CASE("constant objective stalls immediately") {
    OptimizerConfig cfg;
    const std::vector<double> x0{0.3, -0.1, 2.0};
    auto tr = minimize([](std::span<const double>) { return 7.5; }, x0, cfg);
    CHECK(tr.best_value == 7.5);
    CHECK(tr.entries.size() == 4);  // initial simplex only
}

TEST_CASE("trace invariants") {
    auto f = [](std::span<const double> x) {
        return std::sin(3 * x[0]) * std::cos(2 * x[1]) + 0.1 * x[0] * x[0] + 0.05 * x[1] * x[1];
    };
    OptimizerConfig cfg;
    cfg.max_evals = 150;
    cfg.restarts = 3;
    cfg.seed = 17;
    const std::vector<double> x0{0.5, 0.5};
    auto a = minimize(f, x0, cfg);
    auto b = minimize(f, x0, cfg);

    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        CHECK(a.entries[i].params == b.entries[i].params);
        CHECK(a.entries[i].value == b.entries[i].value);
        CHECK(a.entries[i].eval_index == static_cast<int>(i));
    }
    double running = std::numeric_limits<double>::infinity();
    double min_seen = running;
    for (const auto& e : a.entries) {
        min_seen = std::min(min_seen, e.value);
        CHECK(min_seen <= running);
        running = min_seen;
    }
    CHECK(a.best_value == min_seen);
    CHECK(a.best_value <= f(x0));
    CHECK(a.entries.size() <= static_cast<std::size_t>(cfg.max_evals * (cfg.restarts + 1)));

    cfg.seed = 18;
    auto c = minimize(f, x0, cfg);
    bool differs = c.entries.size() != a.entries.size();
    for (std::size_t i = 0; !differs && i < a.entries.size(); ++i) differs = a.entries[i].params != c.entries[i].params;
    CHECK(differs);
}

TEST_CASE("non-finite objective aborts") {
    OptimizerConfig cfg;
    auto f = [](std::span<const double> x) {
        return x[0] > 0.05 ? std::numeric_limits<double>::quiet_NaN() : 1.0;
    };
    CHECK_THROWS_AS(minimize(f, std::vector<double>{0.0}, cfg), NumericalError);
}

TEST_CASE("config validation") {
    OptimizerConfig cfg;
    cfg.max_evals = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.tol = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("QAOA p = 1 never ends above the uniform-state mean energy") {
    QuboInstance q(4);
    q.linear = {0.5, -1.0, 0.25, -0.75};
    q.quad[0 * 4 + 1] = q.quad[1 * 4 + 0] = 0.6;
    q.quad[2 * 4 + 3] = q.quad[3 * 4 + 2] = -0.4;
    q.quad[1 * 4 + 2] = q.quad[2 * 4 + 1] = 0.3;
    auto table = build_energy_table(q);
    const auto init = Statevector::uniform(4);
    auto obj = [&](std::span<const double> x) {
        return expectation(run_circuit(table, QaoaParams::unflatten(x), init), table);
    };
    auto tr = minimize(obj, std::vector<double>{0.0, 0.0}, OptimizerConfig{});
    CHECK(tr.entries.front().value == doctest::Approx(table.mean()).epsilon(1e-12));
    CHECK(tr.best_value <= table.mean());
}

TEST_CASE("trace CSV") {
    OptimizerConfig cfg;
    cfg.max_evals = 5;
    auto tr = minimize([](std::span<const double> x) { return x[0] * x[0] + x[1]; },
                       std::vector<double>{0.0, 0.0}, cfg);
    std::ostringstream os;
    const std::vector<std::string> names{"gamma_1", "beta_1"};
    write_trace_csv(tr, names, os);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "eval_index,gamma_1,beta_1,expectation");
    std::getline(in, line);
    CHECK(line == "0,0,0,0");
    int rows = 1;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 5);
}
