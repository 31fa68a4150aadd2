#include "qpde/qaoa_engine.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "qpde/energy_enumeration.hpp"
#include "qpde/errors.hpp"

namespace qpde {

namespace {

std::size_t checked_dim(std::size_t n) {
    if (n > kMaxEnumerationBits) {
        throw CapacityError("statevector limited to " + std::to_string(kMaxEnumerationBits) +
                            " qubits, got " + std::to_string(n));
    }
    return std::size_t{1} << n;
}

std::size_t log2_exact(std::size_t size) {
    if (size == 0 || !std::has_single_bit(size)) {
        throw EncodingError("energy table length must be a power of two");
    }
    return static_cast<std::size_t>(std::countr_zero(size));
}

// Mixer blocking: 2^12 amplitudes (64 KiB) per block, high qubits three at a time.
constexpr std::size_t kMixerBlockQubits = 12;
constexpr std::size_t kMixerGroupQubits = 3;

// exp(-i beta X) on one pair: [[c, -i s], [-i s, c]]. Multiplying by -i s maps
// (re, im) to (s im, -s re).
inline void rotate_pair(Amplitude& a0, Amplitude& a1, double c, double s) noexcept {
    const Amplitude x = a0;
    const Amplitude y = a1;
    a0 = {c * x.real() + s * y.imag(), c * x.imag() - s * y.real()};
    a1 = {c * y.real() + s * x.imag(), c * y.imag() - s * x.real()};
}

// Shift bits at and above `pos` up by one, leaving a zero at `pos`.
inline std::size_t insert_zero_bit(std::size_t v, std::size_t pos) noexcept {
    const std::size_t lowmask = (std::size_t{1} << pos) - 1;
    return ((v & ~lowmask) << 1) | (v & lowmask);
}

void require_match(const Statevector& s, const EnergyTable& t) {
    if (s.dim() != t.size()) throw EncodingError("statevector and energy table sizes differ");
}

}  // namespace

Statevector::Statevector(std::size_t n_qubits) : n_(n_qubits), amps_(checked_dim(n_qubits)) {
    amps_[0] = 1.0;
}

Statevector::Statevector(std::size_t n_qubits, std::vector<Amplitude> amplitudes)
    : n_(n_qubits), amps_(std::move(amplitudes)) {
    if (amps_.size() != checked_dim(n_qubits)) {
        throw EncodingError("amplitude vector length is not 2^n");
    }
}

Statevector Statevector::uniform(std::size_t n_qubits) {
    const std::size_t dim = checked_dim(n_qubits);
    const double a = 1.0 / std::sqrt(static_cast<double>(dim));
    return Statevector(n_qubits, std::vector<Amplitude>(dim, Amplitude{a, 0.0}));
}

Statevector Statevector::basis(std::size_t n_qubits, std::uint64_t index) {
    const std::size_t dim = checked_dim(n_qubits);
    if (index >= dim) throw EncodingError("basis index out of range");
    std::vector<Amplitude> amps(dim);
    amps[index] = 1.0;
    return Statevector(n_qubits, std::move(amps));
}

std::vector<double> Statevector::probabilities() const {
    std::vector<double> p(amps_.size());
    std::ranges::transform(amps_, p.begin(), [](Amplitude a) { return std::norm(a); });
    return p;
}

double Statevector::norm_squared() const noexcept {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
}

QaoaParams::QaoaParams(std::vector<double> g, std::vector<double> b)
    : gammas(std::move(g)), betas(std::move(b)) {
    if (gammas.empty() || gammas.size() != betas.size()) {
        throw EncodingError("QAOA parameters need equal, non-zero numbers of gammas and betas");
    }
}

std::vector<double> QaoaParams::flatten() const {
    std::vector<double> x(gammas);
    x.insert(x.end(), betas.begin(), betas.end());
    return x;
}

QaoaParams QaoaParams::unflatten(std::span<const double> x) {
    if (x.size() % 2 != 0) throw EncodingError("flattened QAOA parameters must have even length");
    const std::size_t p = x.size() / 2;
    return QaoaParams({x.begin(), x.begin() + p}, {x.begin() + p, x.end()});
}

EnergyTable::EnergyTable(std::vector<double> energies)
    : n_(log2_exact(energies.size())), e_(std::move(energies)) {}

double EnergyTable::min() const { return *std::ranges::min_element(e_); }
double EnergyTable::max() const { return *std::ranges::max_element(e_); }
double EnergyTable::mean() const {
    return std::accumulate(e_.begin(), e_.end(), 0.0) / static_cast<double>(e_.size());
}

EnergyTable EnergyTable::normalized() const {
    const double mu = mean();
    double spread = max() - min();
    if (!(spread > 0.0)) spread = 1.0;
    std::vector<double> out(e_.size());
    std::ranges::transform(e_, out.begin(), [&](double v) { return (v - mu) / spread; });
    return EnergyTable(std::move(out));
}

EnergyTable build_energy_table(const QuboInstance& qubo) {
    return EnergyTable(enumerate_energies(qubo));
}

void apply_cost_layer(Statevector& state, const EnergyTable& table, double gamma) {
    require_match(state, table);
    if (gamma == 0.0) return;
    auto amps = state.amplitudes();
    const auto energies = table.values();
    for (std::size_t x = 0; x < amps.size(); ++x) {
        const double phi = -gamma * energies[x];
        const double c = std::cos(phi);
        const double s = std::sin(phi);
        const double re = amps[x].real();
        const double im = amps[x].imag();
        amps[x] = {re * c - im * s, re * s + im * c};
    }
}

void apply_mixer_layer(Statevector& state, double beta) {
    if (beta == 0.0) return;
    const double c = std::cos(beta);
    const double s = std::sin(beta);
    auto amps = state.amplitudes();
    const std::size_t n = state.qubits();
    const std::size_t dim = amps.size();

    // Low qubits: every pair lives inside one cache-sized block.
    const std::size_t low = std::min(n, kMixerBlockQubits);
    const std::size_t block = std::size_t{1} << low;
    for (std::size_t start = 0; start < dim; start += block) {
        Amplitude* blk = amps.data() + start;
        for (std::size_t q = 0; q < low; ++q) {
            const std::size_t stride = std::size_t{1} << q;
            for (std::size_t base = 0; base < block; base += 2 * stride) {
                for (std::size_t off = base; off < base + stride; ++off) {
                    rotate_pair(blk[off], blk[off + stride], c, s);
                }
            }
        }
    }

    // High qubits in groups: gather the 2^k amplitudes that differ only in the
    // group's bits, rotate them locally, scatter back.
    for (std::size_t first = low; first < n; first += kMixerGroupQubits) {
        const std::size_t k = std::min(kMixerGroupQubits, n - first);
        const std::size_t local = std::size_t{1} << k;
        std::array<Amplitude, std::size_t{1} << kMixerGroupQubits> buf{};
        const std::size_t outer = dim >> k;
        for (std::size_t i = 0; i < outer; ++i) {
            std::size_t base = i;
            for (std::size_t g = 0; g < k; ++g) base = insert_zero_bit(base, first + g);
            for (std::size_t m = 0; m < local; ++m) buf[m] = amps[base | (m << first)];
            for (std::size_t g = 0; g < k; ++g) {
                const std::size_t stride = std::size_t{1} << g;
                for (std::size_t m = 0; m < local; ++m) {
                    if (!(m & stride)) rotate_pair(buf[m], buf[m | stride], c, s);
                }
            }
            for (std::size_t m = 0; m < local; ++m) amps[base | (m << first)] = buf[m];
        }
    }
}

Statevector warm_start_state(std::span<const double> relaxed_bits, double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 0.5)) {
        throw EncodingError("warm-start epsilon must lie in (0, 0.5], got " +
                            std::to_string(epsilon));
    }
    const std::size_t n = relaxed_bits.size();
    const std::size_t dim = checked_dim(n);
    std::vector<double> one(n), zero(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double c = std::clamp(relaxed_bits[j], epsilon, 1.0 - epsilon);
        one[j] = std::sqrt(c);
        zero[j] = std::sqrt(1.0 - c);
    }
    // Build the product state qubit by qubit, doubling the filled prefix.
    std::vector<Amplitude> amps(dim);
    amps[0] = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t half = std::size_t{1} << j;
        for (std::size_t x = 0; x < half; ++x) {
            amps[x + half] = amps[x] * one[j];
            amps[x] *= zero[j];
        }
    }
    return Statevector(n, std::move(amps));
}

Statevector run_circuit(const EnergyTable& table, const QaoaParams& params,
                        const Statevector& initial) {
    require_match(initial, table);
    Statevector state = initial;
    for (std::size_t l = 0; l < params.layers(); ++l) {
        apply_cost_layer(state, table, params.gammas[l]);
        apply_mixer_layer(state, params.betas[l]);
    }
    return state;
}

double expectation(const Statevector& state, const EnergyTable& table) {
    require_match(state, table);
    const auto amps = state.amplitudes();
    double s = 0.0;
    for (std::size_t x = 0; x < amps.size(); ++x) s += std::norm(amps[x]) * table[x];
    return s;
}

Histogram sample(const Statevector& state, std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) throw EncodingError("sampling needs at least one shot");
    const auto amps = state.amplitudes();
    std::vector<double> cdf(amps.size());
    double acc = 0.0;
    for (std::size_t x = 0; x < amps.size(); ++x) {
        acc += std::norm(amps[x]);
        cdf[x] = acc;
    }
    std::mt19937_64 rng(seed);
    Histogram hist;
    for (std::uint64_t s = 0; s < shots; ++s) {
        // 53 random bits -> [0, 1), scaled by the total so round-off in the
        // norm never leaves the last bin unreachable.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) --it;
        const auto x = static_cast<std::uint64_t>(it - cdf.begin());
        ++hist[x];
    }
    return hist;
}

SampledBest best_sampled(const Histogram& histogram, const EnergyTable& table) {
    if (histogram.empty()) throw EncodingError("best_sampled needs a non-empty histogram");
    SampledBest best{histogram.begin()->first, table[histogram.begin()->first]};
    for (const auto& [x, count] : histogram) {
        if (x >= table.size()) throw EncodingError("sampled index outside the energy table");
        const double e = table[x];
        if (e < best.energy || (e == best.energy && lex_less(x, best.index))) best = {x, e};
    }
    return best;
}

}  // namespace qpde
