#include "qpde/energy_enumeration.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "qpde/errors.hpp"
#include "qpde/qubo_encoding.hpp"

namespace qpde {

namespace {

constexpr std::uint64_t kResyncInterval = 4096;

}  // namespace

std::vector<double> enumerate_energies(const QuboInstance& qubo) {
    const std::size_t n = qubo.n;
    if (n > kMaxEnumerationBits) {
        throw CapacityError("energy enumeration limited to " + std::to_string(kMaxEnumerationBits) +
                            " bits, got " + std::to_string(n));
    }
    const std::uint64_t dim = std::uint64_t{1} << n;
    std::vector<double> table(dim);

    std::vector<double> diag(n);
    for (std::size_t a = 0; a < n; ++a) diag[a] = qubo.linear[a] + qubo.q(a, a);

    // field[a] = sum_{b != a} Q_ab q_b for the current assignment.
    std::vector<double> field(n, 0.0);
    std::uint64_t state = 0;
    double e = qubo.offset;
    table[0] = e;

    for (std::uint64_t step = 1; step < dim; ++step) {
        const int a = std::countr_zero(step);
        const bool rising = ((state >> a) & 1U) == 0;
        const double delta = diag[a] + 2.0 * field[a];
        e += rising ? delta : -delta;
        state ^= std::uint64_t{1} << a;
        const double sign = rising ? 1.0 : -1.0;
        const double* row = qubo.quad.data() + static_cast<std::size_t>(a) * n;
        for (std::size_t b = 0; b < n; ++b) {
            if (b != static_cast<std::size_t>(a)) field[b] += sign * row[b];
        }

        if (step % kResyncInterval == 0) {
            e = qubo.energy_of_index(state);
            for (std::size_t b = 0; b < n; ++b) {
                double f = 0.0;
                for (std::size_t c = 0; c < n; ++c) {
                    if (c != b && ((state >> c) & 1U)) f += qubo.q(b, c);
                }
                field[b] = f;
            }
        }
        table[state] = e;
    }
    return table;
}

std::uint64_t argmin_lex(std::span<const double> table) {
    if (table.empty()) throw EncodingError("cannot minimize an empty energy table");
    double lo = table[0];
    double scale = 0.0;
    for (double v : table) {
        lo = std::min(lo, v);
        scale = std::max(scale, std::abs(v));
    }
    const double tol = 1e-9 * (1.0 + scale);
    std::uint64_t best = 0;
    bool found = false;
    for (std::uint64_t x = 0; x < table.size(); ++x) {
        if (table[x] <= lo + tol && (!found || lex_less(x, best))) {
            best = x;
            found = true;
        }
    }
    return best;
}

}  // namespace qpde
