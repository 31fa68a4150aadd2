#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qpde/errors.hpp"
#include "qpde/qaoa_engine.hpp"

using namespace qpde;

namespace {

QuboInstance random_qubo(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    QuboInstance q(n);
    for (std::size_t a = 0; a < n; ++a) {
        q.linear[a] = U(rng);
        for (std::size_t b = a + 1; b < n; ++b) {
            const double v = U(rng);
            q.quad[a * n + b] = v;
            q.quad[b * n + a] = v;
        }
    }
    q.offset = U(rng);
    return q;
}

Statevector random_state(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> G;
    std::vector<Amplitude> a(std::size_t{1} << n);
    double s = 0.0;
    for (auto& v : a) {
        v = {G(rng), G(rng)};
        s += std::norm(v);
    }
    for (auto& v : a) v /= std::sqrt(s);
    return Statevector(n, std::move(a));
}

}  // namespace

TEST_CASE("energy table") {
    SUBCASE("(q-1)^2") {
        QuboInstance q(1);
        q.linear[0] = -1.0;
        q.offset = 1.0;
        auto t = build_energy_table(q);
        CHECK(t.values()[0] == 1.0);
        CHECK(t.values()[1] == 0.0);
    }
    SUBCASE("zero instance is all offset") {
        QuboInstance q(4);
        q.offset = 3.25;
        auto t = build_energy_table(q);
        for (double v : t.values()) CHECK(v == 3.25);
    }
    SUBCASE("matches direct evaluation") {
        std::mt19937_64 rng(3);
        for (std::size_t n : {4u, 7u, 13u}) {
            auto q = random_qubo(n, rng);
            auto t = build_energy_table(q);
            CHECK(t.values()[0] == q.offset);
            for (std::uint64_t x = 0; x < t.size(); ++x) {
                CHECK(t[x] == doctest::Approx(q.energy_of_index(x)).epsilon(1e-12));
            }
        }
    }
    SUBCASE("capacity") {
        QuboInstance q(kMaxEnumerationBits + 1);
        CHECK_THROWS_AS(build_energy_table(q), CapacityError);
    }
}

TEST_CASE("cost layer") {
    auto s = Statevector::uniform(2);
    EnergyTable t({0.0, 1.0, 2.0, 3.0});
    auto before = s;
    apply_cost_layer(s, t, 0.0);
    for (std::size_t x = 0; x < 4; ++x) CHECK(s.amplitudes()[x] == before.amplitudes()[x]);

    apply_cost_layer(s, t, std::numbers::pi);
    const double sign[] = {1, -1, 1, -1};
    for (std::size_t x = 0; x < 4; ++x) {
        const Amplitude expect = before.amplitudes()[x] * sign[x];
        CHECK(std::abs(s.amplitudes()[x] - expect) <= 1e-15);
        CHECK(s.probability(x) == doctest::Approx(0.25));
    }
}

TEST_CASE("mixer layer") {
    SUBCASE("beta = 0 is the identity") {
        std::mt19937_64 rng(1);
        auto s = random_state(3, rng);
        auto before = s;
        apply_mixer_layer(s, 0.0);
        for (std::size_t x = 0; x < 8; ++x) CHECK(s.amplitudes()[x] == before.amplitudes()[x]);
    }
    SUBCASE("beta = pi/2 flips |0> to -i|1>") {
        Statevector s(1);
        apply_mixer_layer(s, std::numbers::pi / 2);
        CHECK(std::abs(s.amplitudes()[0]) <= 1e-15);
        CHECK(std::abs(s.amplitudes()[1] - Amplitude(0, -1)) <= 1e-15);
    }
    SUBCASE("beta = pi/4 matches the 2x2 exponential") {
        Statevector s(1);
        apply_mixer_layer(s, std::numbers::pi / 4);
        const double r = std::sqrt(0.5);
        CHECK(std::abs(s.amplitudes()[0] - Amplitude(r, 0)) <= 1e-15);
        CHECK(std::abs(s.amplitudes()[1] - Amplitude(0, -r)) <= 1e-15);
        CHECK(s.probability(0) == doctest::Approx(0.5));
    }
}

TEST_CASE("mixer matches a per-qubit reference beyond the cache block") {
    // n = 17 exercises both the blocked low qubits and the grouped high ones.
    std::mt19937_64 rng(21);
    auto s = random_state(17, rng);
    std::vector<Amplitude> ref(s.amplitudes().begin(), s.amplitudes().end());
    const double beta = 0.37;
    const Amplitude c{std::cos(beta), 0.0};
    const Amplitude mis{0.0, -std::sin(beta)};
    for (std::size_t q = 0; q < 17; ++q) {
        const std::size_t bit = std::size_t{1} << q;
        for (std::size_t x = 0; x < ref.size(); ++x) {
            if (x & bit) continue;
            const Amplitude a0 = ref[x];
            const Amplitude a1 = ref[x | bit];
            ref[x] = c * a0 + mis * a1;
            ref[x | bit] = mis * a0 + c * a1;
        }
    }
    apply_mixer_layer(s, beta);
    double worst = 0.0;
    for (std::size_t x = 0; x < ref.size(); ++x) worst = std::max(worst, std::abs(s.amplitudes()[x] - ref[x]));
    CHECK(worst <= 1e-13);
}

TEST_CASE("warm start state") {
    SUBCASE("c = 0.5 is the uniform superposition") {
        auto s = warm_start_state(std::vector<double>(4, 0.5), 0.25);
        for (auto a : s.amplitudes()) CHECK(std::abs(a - Amplitude(0.25, 0)) <= 1e-15);
    }
    SUBCASE("clamping") {
        auto s = warm_start_state(std::vector<double>{1.0}, 0.25);
        CHECK(s.probability(0) == doctest::Approx(0.25));
        CHECK(s.probability(1) == doctest::Approx(0.75));
    }
    SUBCASE("two-qubit product probabilities") {
        auto s = warm_start_state(std::vector<double>{0.75, 0.25}, 0.25);
        CHECK(s.probability(bits_to_index(Bitstring{0, 0})) == doctest::Approx(0.1875));
        CHECK(s.probability(bits_to_index(Bitstring{0, 1})) == doctest::Approx(0.0625));
        CHECK(s.probability(bits_to_index(Bitstring{1, 0})) == doctest::Approx(0.5625));
        CHECK(s.probability(bits_to_index(Bitstring{1, 1})) == doctest::Approx(0.1875));
        for (auto a : s.amplitudes()) {
            CHECK(a.imag() == 0.0);
            CHECK(a.real() >= 0.0);
        }
    }
    SUBCASE("epsilon range") {
        CHECK_THROWS_AS(warm_start_state(std::vector<double>{0.5}, 0.0), EncodingError);
        CHECK_THROWS_AS(warm_start_state(std::vector<double>{0.5}, 0.6), EncodingError);
    }
}

TEST_CASE("run_circuit") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    auto q = random_qubo(4, rng);
    auto table = build_energy_table(q);
    auto init = Statevector::uniform(4);

    SUBCASE("zero angles return the initial state") {
        auto out = run_circuit(table, QaoaParams({0.0}, {0.0}), init);
        for (std::size_t x = 0; x < 16; ++x) CHECK(out.amplitudes()[x] == init.amplitudes()[x]);
    }
    SUBCASE("dense-unitary oracle, n = 4, p = 2") {
        QaoaParams params({angle(rng), angle(rng)}, {angle(rng), angle(rng)});
        auto out = run_circuit(table, params, init);
        Eigen::VectorXcd psi0(16);
        for (int x = 0; x < 16; ++x) psi0(x) = init.amplitudes()[static_cast<std::size_t>(x)];
        std::vector<double> e(table.values().begin(), table.values().end());
        auto ref = oracle::circuit(4, e, params.gammas, params.betas, psi0);
        double ref_exp = 0.0;
        for (int x = 0; x < 16; ++x) {
            CHECK(std::abs(out.amplitudes()[static_cast<std::size_t>(x)] - ref(x)) <= 1e-12);
            ref_exp += std::norm(ref(x)) * e[static_cast<std::size_t>(x)];
        }
        CHECK(expectation(out, table) == doctest::Approx(ref_exp).epsilon(1e-12));
    }
    SUBCASE("unitarity over many layers") {
        std::vector<double> g(32), b(32);
        for (auto& v : g) v = angle(rng);
        for (auto& v : b) v = angle(rng);
        auto out = run_circuit(table, QaoaParams(g, b), random_state(4, rng));
        CHECK(std::abs(out.norm_squared() - 1.0) <= 1e-9);
    }
}

TEST_CASE("layer composition") {
    std::mt19937_64 rng(4);
    auto q = random_qubo(5, rng);
    auto table = build_energy_table(q);
    auto a = random_state(5, rng);
    auto b = a;
    apply_cost_layer(a, table, 0.3);
    apply_cost_layer(a, table, -1.1);
    apply_cost_layer(b, table, 0.3 - 1.1);
    for (std::size_t x = 0; x < a.dim(); ++x) CHECK(std::abs(a.amplitudes()[x] - b.amplitudes()[x]) <= 1e-12);

    apply_mixer_layer(a, 0.4);
    apply_mixer_layer(a, 0.9);
    apply_mixer_layer(b, 1.3);
    for (std::size_t x = 0; x < a.dim(); ++x) CHECK(std::abs(a.amplitudes()[x] - b.amplitudes()[x]) <= 1e-12);
}

TEST_CASE("warm start with epsilon 0.5 reproduces uniform-start QAOA") {
    std::mt19937_64 rng(8);
    auto table = build_energy_table(random_qubo(5, rng));
    QaoaParams params({0.7, -0.2, 1.3}, {0.1, 0.5, -0.8});
    auto warm = warm_start_state(std::vector<double>{0, 1, 1, 0, 1}, 0.5);
    auto a = run_circuit(table, params, warm);
    auto b = run_circuit(table, params, Statevector::uniform(5));
    for (std::size_t x = 0; x < a.dim(); ++x) CHECK(std::abs(a.amplitudes()[x] - b.amplitudes()[x]) <= 1e-12);
}

TEST_CASE("expectation") {
    EnergyTable t({3.0, -1.0, 4.0, 1.5});
    CHECK(expectation(Statevector::basis(2, 2), t) == 4.0);
    CHECK(expectation(Statevector::uniform(2), t) == doctest::Approx(t.mean()));
    std::mt19937_64 rng(6);
    for (int i = 0; i < 20; ++i) {
        const double e = expectation(random_state(2, rng), t);
        CHECK(e >= t.min() - 1e-12);
        CHECK(e <= t.max() + 1e-12);
    }
}

TEST_CASE("sampling") {
    SUBCASE("basis state gives one bin") {
        auto h = sample(Statevector::basis(3, 5), 1000, 1);
        REQUIRE(h.size() == 1);
        CHECK(h.begin()->first == 5);
        CHECK(h.begin()->second == 1000);
    }
    SUBCASE("uniform single qubit within 5 sigma") {
        const std::uint64_t shots = 100000;
        auto h = sample(Statevector::uniform(1), shots, 123);
        const double sigma = std::sqrt(shots * 0.25);
        CHECK(std::abs(static_cast<double>(h[0]) - shots / 2.0) <= 5 * sigma);
        CHECK(h[0] + h[1] == shots);
    }
    SUBCASE("deterministic per seed") {
        auto s = warm_start_state(std::vector<double>{0.2, 0.9, 0.4}, 0.1);
        CHECK(sample(s, 500, 42) == sample(s, 500, 42));
        CHECK(sample(s, 500, 42) != sample(s, 500, 43));
    }
    CHECK_THROWS_AS(sample(Statevector(1), 0, 1), EncodingError);
}

TEST_CASE("best_sampled picks minimum energy, not frequency") {
    EnergyTable t({5.0, 1.0, 1.0, -2.0});
    CHECK(best_sampled(Histogram{{2, 10}}, t).index == 2);
    auto best = best_sampled(Histogram{{0, 900}, {3, 1}, {1, 99}}, t);
    CHECK(best.index == 3);
    CHECK(best.energy == -2.0);
    // indices 1 ("10") and 2 ("01") tie; "01" is lexicographically smaller.
    CHECK(best_sampled(Histogram{{1, 5}, {2, 5}}, t).index == 2);
    CHECK_THROWS_AS(best_sampled(Histogram{}, t), EncodingError);
}
