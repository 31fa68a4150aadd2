#pragma once

// Exact statevector simulation of p-layer QAOA with a diagonal cost.
//
// Qubit k is bit k of the basis index (see qubo_encoding.hpp). Layer l applies
// exp(-i gamma_l C) and then prod_j exp(-i beta_l X_j); no RX(2 beta)
// reparameterization is involved.

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "qpde/qubo_encoding.hpp"

namespace qpde {

using Amplitude = std::complex<double>;

class Statevector {
public:
    /// |0...0> on n qubits.
    explicit Statevector(std::size_t n_qubits);
    Statevector(std::size_t n_qubits, std::vector<Amplitude> amplitudes);

    static Statevector uniform(std::size_t n_qubits);
    static Statevector basis(std::size_t n_qubits, std::uint64_t index);

    std::size_t qubits() const noexcept { return n_; }
    std::size_t dim() const noexcept { return amps_.size(); }

    std::span<const Amplitude> amplitudes() const noexcept { return amps_; }
    std::span<Amplitude> amplitudes() noexcept { return amps_; }

    double probability(std::uint64_t index) const noexcept { return std::norm(amps_[index]); }
    std::vector<double> probabilities() const;
    double norm_squared() const noexcept;

private:
    std::size_t n_;
    std::vector<Amplitude> amps_;
};

struct QaoaParams {
    std::vector<double> gammas;
    std::vector<double> betas;

    QaoaParams() = default;
    QaoaParams(std::vector<double> g, std::vector<double> b);

    std::size_t layers() const noexcept { return gammas.size(); }

    /// Flattened (gamma_1..gamma_p, beta_1..beta_p), the optimizer's view.
    std::vector<double> flatten() const;
    static QaoaParams unflatten(std::span<const double> x);
};

/// Cost of every basis state.
class EnergyTable {
public:
    explicit EnergyTable(std::vector<double> energies);

    std::size_t qubits() const noexcept { return n_; }
    std::size_t size() const noexcept { return e_.size(); }
    double operator[](std::uint64_t x) const noexcept { return e_[x]; }
    std::span<const double> values() const noexcept { return e_; }

    double min() const;
    double max() const;
    double mean() const;

    /// (E - mean) / (max - min), or E - mean for a flat table. Used to keep
    /// phase angles O(1) independently of the energy scale.
    EnergyTable normalized() const;

private:
    std::size_t n_;
    std::vector<double> e_;
};

EnergyTable build_energy_table(const QuboInstance& qubo);

void apply_cost_layer(Statevector& state, const EnergyTable& table, double gamma);
void apply_mixer_layer(Statevector& state, double beta);

/// Product state with P(qubit j = 1) = clamp(relaxed_bits[j], eps, 1 - eps).
Statevector warm_start_state(std::span<const double> relaxed_bits, double epsilon);

Statevector run_circuit(const EnergyTable& table, const QaoaParams& params,
                        const Statevector& initial);

/// Exact <psi|C|psi>.
double expectation(const Statevector& state, const EnergyTable& table);

using Histogram = std::map<std::uint64_t, std::uint64_t>;

/// Born-rule sampling with a seeded mt19937_64; identical seeds give identical
/// histograms on every platform.
Histogram sample(const Statevector& state, std::uint64_t shots, std::uint64_t seed);

struct SampledBest {
    std::uint64_t index;
    double energy;
};

/// Lowest-energy sampled outcome (not the most frequent one).
SampledBest best_sampled(const Histogram& histogram, const EnergyTable& table);

}  // namespace qpde
