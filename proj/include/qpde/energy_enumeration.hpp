#pragma once

// Exhaustive QUBO energy enumeration shared by the brute-force oracle and the
// QAOA cost table.

#include <cstdint>
#include <span>
#include <vector>

namespace qpde {

struct QuboInstance;

/// Energies of all 2^n assignments indexed by basis index, visited in
/// Gray-code order with single-bit local-field updates. The running value is
/// re-anchored by direct evaluation at regular intervals to bound drift.
std::vector<double> enumerate_energies(const QuboInstance& qubo);

/// Index of the minimum; entries within 1e-9 * (1 + max|E|) of the minimum
/// count as tied and the lexicographically smallest bitstring wins.
std::uint64_t argmin_lex(std::span<const double> table);

}  // namespace qpde
