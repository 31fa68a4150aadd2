#pragma once

// Binary encoding of ||A s - b||^2.
//
// Bit layout: variable i owns the contiguous block [i*R, (i+1)*R), least
// significant weight first. A basis index x of the simulator maps bit k of x
// to binary variable k, so the same layout serves bitstrings and statevectors.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qpde/mesh_model.hpp"

namespace qpde {

using Bitstring = std::vector<std::uint8_t>;

/// Largest problem enumerated exhaustively or simulated as a statevector.
inline constexpr std::size_t kMaxEnumerationBits = 26;

/// Power-of-two weights 2^e for a strictly increasing integer exponent list.
class BitWeighting {
public:
    explicit BitWeighting(std::vector<int> exponents = {0, 1, 2, 3, 4});

    std::size_t bits() const noexcept { return exponents_.size(); }
    std::span<const int> exponents() const noexcept { return exponents_; }
    std::span<const double> weights() const noexcept { return weights_; }

    double min_weight() const noexcept { return weights_.front(); }
    /// Sum of all weights: the largest representable value.
    double max_value() const noexcept;

    /// Value from the R bits of one variable, LSB first.
    double value(std::span<const std::uint8_t> bits) const;

    /// Bits (LSB first) of the representable value nearest to v; ties go to
    /// the smaller value. Values outside [0, max_value] saturate.
    Bitstring nearest_bits(double v) const;

private:
    std::vector<int> exponents_;
    std::vector<double> weights_;
};

/// E(q) = sum_ab quad(a,b) q_a q_b + sum_a linear_a q_a + offset.
struct QuboInstance {
    std::size_t n = 0;
    std::vector<double> quad;  // n*n, symmetric, row-major
    std::vector<double> linear;
    double offset = 0.0;

    explicit QuboInstance(std::size_t n_vars = 0);

    double q(std::size_t a, std::size_t b) const noexcept { return quad[a * n + b]; }
    double energy(std::span<const std::uint8_t> bits) const;
    /// Energy of the assignment whose bit k is bit k of `index`.
    double energy_of_index(std::uint64_t index) const;

    /// Plain-text interchange: header `n offset`, then `i j coeff` triples
    /// with i <= j. Diagonal triples carry linear plus diagonal-quadratic terms;
    /// off-diagonal triples carry the combined coefficient 2*quad(i, j).
    void write_text(std::ostream& os) const;
    static QuboInstance read_text(std::istream& is);
};

/// E(z) = sum_{a<b} J_ab z_a z_b + sum_a h_a z_a + offset, with z = 2q - 1.
struct IsingInstance {
    std::size_t n = 0;
    std::vector<double> couplings;  // n*n symmetric, zero diagonal
    std::vector<double> fields;
    double offset = 0.0;

    double J(std::size_t a, std::size_t b) const noexcept { return couplings[a * n + b]; }
    /// Spins in {-1, +1}.
    double energy(std::span<const int> spins) const;
};

/// Real vector whose component i is the weighted sum of its bit block.
std::vector<double> decode(std::span<const std::uint8_t> bits, const BitWeighting& weighting);

/// Concatenated nearest_bits() of each component.
Bitstring encode_nearest(std::span<const double> values, const BitWeighting& weighting);

/// Expanded QUBO of ||A s - b||^2 over the R*N bits of s.
QuboInstance encode_qubo(const MarchingSystem& system, const BitWeighting& weighting);
/// Same, for a dense row-major square matrix.
QuboInstance encode_qubo(std::span<const double> a_dense, std::span<const double> rhs,
                         const BitWeighting& weighting);

IsingInstance qubo_to_ising(const QuboInstance& qubo);

struct GroundState {
    Bitstring bits;
    double energy;
};

/// Exhaustive minimum. Among (numerically) tied minima the lexicographically
/// smallest bitstring wins, comparing bit 0 first.
GroundState brute_force_ground_state(const QuboInstance& qubo);

/// Bitstring <-> basis index conversions for the shared layout.
std::uint64_t bits_to_index(std::span<const std::uint8_t> bits);
Bitstring index_to_bits(std::uint64_t index, std::size_t n);

/// Lexicographic order of the bitstrings of two indices (bit 0 compared first).
bool lex_less(std::uint64_t a, std::uint64_t b) noexcept;

std::string to_string(std::span<const std::uint8_t> bits);

}  // namespace qpde
