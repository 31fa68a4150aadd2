#include "qpde/qubo_encoding.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "qpde/errors.hpp"
#include "qpde/energy_enumeration.hpp"

namespace qpde {

BitWeighting::BitWeighting(std::vector<int> exponents) : exponents_(std::move(exponents)) {
    if (exponents_.empty()) throw EncodingError("bit weighting needs at least one exponent");
    for (std::size_t r = 1; r < exponents_.size(); ++r) {
        if (exponents_[r] <= exponents_[r - 1]) {
            throw EncodingError("bit weighting exponents must be strictly increasing");
        }
    }
    weights_.reserve(exponents_.size());
    for (int e : exponents_) weights_.push_back(std::ldexp(1.0, e));
}

double BitWeighting::max_value() const noexcept {
    double s = 0.0;
    for (double w : weights_) s += w;
    return s;
}

double BitWeighting::value(std::span<const std::uint8_t> bits) const {
    if (bits.size() != weights_.size()) throw EncodingError("bit block length differs from R");
    double s = 0.0;
    for (std::size_t r = 0; r < bits.size(); ++r) {
        if (bits[r]) s += weights_[r];
    }
    return s;
}

Bitstring BitWeighting::nearest_bits(double v) const {
    // Distinct powers of two: greedy from the top gives the largest sum <= v,
    // and the next representable value above it is found the same way.
    const std::size_t R = weights_.size();
    Bitstring bits(R, 0);
    if (!(v > 0.0)) return bits;
    if (v >= max_value()) return Bitstring(R, 1);

    Bitstring below(R, 0);
    double acc = 0.0;
    for (std::size_t r = R; r-- > 0;) {
        if (acc + weights_[r] <= v) {
            acc += weights_[r];
            below[r] = 1;
        }
    }
    // Smallest representable strictly above `acc`: add the lowest weight and carry.
    Bitstring above = below;
    double above_val = acc;
    bool carried = false;
    for (std::size_t r = 0; r < R; ++r) {
        if (!above[r]) {
            above[r] = 1;
            above_val += weights_[r];
            for (std::size_t t = 0; t < r; ++t) {
                if (above[t]) {
                    above[t] = 0;
                    above_val -= weights_[t];
                }
            }
            carried = true;
            break;
        }
    }
    if (!carried) return below;
    return (above_val - v < v - acc) ? above : below;
}

QuboInstance::QuboInstance(std::size_t n_vars)
    : n(n_vars), quad(n_vars * n_vars, 0.0), linear(n_vars, 0.0) {}

double QuboInstance::energy(std::span<const std::uint8_t> bits) const {
    if (bits.size() != n) throw EncodingError("bitstring length does not match QUBO size");
    double e = offset;
    for (std::size_t a = 0; a < n; ++a) {
        if (!bits[a]) continue;
        e += linear[a] + q(a, a);
        for (std::size_t b = a + 1; b < n; ++b) {
            if (bits[b]) e += 2.0 * q(a, b);
        }
    }
    return e;
}

double QuboInstance::energy_of_index(std::uint64_t index) const {
    double e = offset;
    for (std::size_t a = 0; a < n; ++a) {
        if (!((index >> a) & 1U)) continue;
        e += linear[a] + q(a, a);
        for (std::size_t b = a + 1; b < n; ++b) {
            if ((index >> b) & 1U) e += 2.0 * q(a, b);
        }
    }
    return e;
}

void QuboInstance::write_text(std::ostream& os) const {
    os.precision(17);
    os << n << ' ' << offset << '\n';
    for (std::size_t a = 0; a < n; ++a) {
        const double diag = linear[a] + q(a, a);
        if (diag != 0.0) os << a << ' ' << a << ' ' << diag << '\n';
        for (std::size_t b = a + 1; b < n; ++b) {
            const double c = 2.0 * q(a, b);
            if (c != 0.0) os << a << ' ' << b << ' ' << c << '\n';
        }
    }
}

QuboInstance QuboInstance::read_text(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw EncodingError("QUBO text: missing header");
    std::istringstream header(line);
    std::size_t n = 0;
    double offset = 0.0;
    if (!(header >> n >> offset)) throw EncodingError("QUBO text: malformed header");
    QuboInstance out(n);
    out.offset = offset;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream row(line);
        std::size_t a = 0, b = 0;
        double c = 0.0;
        if (!(row >> a >> b >> c) || a >= n || b >= n) {
            throw EncodingError("QUBO text: malformed triple on line " + std::to_string(lineno));
        }
        if (a == b) {
            out.linear[a] += c;
        } else {
            out.quad[a * n + b] += 0.5 * c;
            out.quad[b * n + a] += 0.5 * c;
        }
    }
    return out;
}

double IsingInstance::energy(std::span<const int> spins) const {
    if (spins.size() != n) throw EncodingError("spin vector length does not match Ising size");
    double e = offset;
    for (std::size_t a = 0; a < n; ++a) {
        e += fields[a] * spins[a];
        for (std::size_t b = a + 1; b < n; ++b) e += J(a, b) * spins[a] * spins[b];
    }
    return e;
}

std::vector<double> decode(std::span<const std::uint8_t> bits, const BitWeighting& weighting) {
    const std::size_t R = weighting.bits();
    if (bits.size() % R != 0) {
        throw EncodingError("bitstring length " + std::to_string(bits.size()) +
                            " is not a multiple of R = " + std::to_string(R));
    }
    std::vector<double> out(bits.size() / R);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = weighting.value(bits.subspan(i * R, R));
    return out;
}

Bitstring encode_nearest(std::span<const double> values, const BitWeighting& weighting) {
    Bitstring out;
    out.reserve(values.size() * weighting.bits());
    for (double v : values) {
        const auto block = weighting.nearest_bits(v);
        out.insert(out.end(), block.begin(), block.end());
    }
    return out;
}

QuboInstance encode_qubo(std::span<const double> a_dense, std::span<const double> rhs,
                         const BitWeighting& weighting) {
    const std::size_t N = rhs.size();
    if (a_dense.size() != N * N) throw EncodingError("matrix is not N x N for the given rhs");
    const std::size_t R = weighting.bits();
    const auto w = weighting.weights();
    QuboInstance qubo(N * R);

    // Column Gram matrix G_ij = sum_k a_ki a_kj and c_i = sum_k b_k a_ki.
    std::vector<double> gram(N * N, 0.0);
    std::vector<double> atb(N, 0.0);
    for (std::size_t k = 0; k < N; ++k) {
        for (std::size_t i = 0; i < N; ++i) {
            const double aki = a_dense[k * N + i];
            if (aki == 0.0) continue;
            atb[i] += rhs[k] * aki;
            for (std::size_t j = 0; j < N; ++j) gram[i * N + j] += aki * a_dense[k * N + j];
        }
    }

    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t r = 0; r < R; ++r) {
            const std::size_t u = i * R + r;
            // q^2 = q folds the diagonal of the square into the linear term.
            qubo.linear[u] = gram[i * N + i] * w[r] * w[r] - 2.0 * atb[i] * w[r];
            for (std::size_t j = 0; j < N; ++j) {
                for (std::size_t t = 0; t < R; ++t) {
                    const std::size_t v = j * R + t;
                    if (v == u) continue;
                    qubo.quad[u * qubo.n + v] = gram[i * N + j] * w[r] * w[t];
                }
            }
        }
    }
    double off = 0.0;
    for (double bk : rhs) off += bk * bk;
    qubo.offset = off;
    return qubo;
}

QuboInstance encode_qubo(const MarchingSystem& system, const BitWeighting& weighting) {
    const auto dense = system.dense();
    return encode_qubo(dense, system.rhs(), weighting);
}

IsingInstance qubo_to_ising(const QuboInstance& qubo) {
    // q = (z + 1) / 2:
    //   Q_ab q_a q_b (a != b, both orders) -> Q_ab/2 (z_a z_b + z_a + z_b + 1)
    //   (L_a + Q_aa) q_a                   -> (L_a + Q_aa)/2 (z_a + 1)
    const std::size_t n = qubo.n;
    IsingInstance ising;
    ising.n = n;
    ising.couplings.assign(n * n, 0.0);
    ising.fields.assign(n, 0.0);
    ising.offset = qubo.offset;
    for (std::size_t a = 0; a < n; ++a) {
        const double diag = qubo.linear[a] + qubo.q(a, a);
        ising.fields[a] += 0.5 * diag;
        ising.offset += 0.5 * diag;
        for (std::size_t b = a + 1; b < n; ++b) {
            const double pair = 2.0 * qubo.q(a, b);  // coefficient of q_a q_b
            ising.couplings[a * n + b] = 0.25 * pair;
            ising.couplings[b * n + a] = 0.25 * pair;
            ising.fields[a] += 0.25 * pair;
            ising.fields[b] += 0.25 * pair;
            ising.offset += 0.25 * pair;
        }
    }
    return ising;
}

GroundState brute_force_ground_state(const QuboInstance& qubo) {
    if (qubo.n > kMaxEnumerationBits) {
        throw CapacityError("brute-force enumeration limited to " +
                            std::to_string(kMaxEnumerationBits) + " bits, got " +
                            std::to_string(qubo.n));
    }
    const auto table = enumerate_energies(qubo);
    const std::uint64_t best = argmin_lex(table);
    return GroundState{index_to_bits(best, qubo.n), qubo.energy_of_index(best)};
}

std::uint64_t bits_to_index(std::span<const std::uint8_t> bits) {
    if (bits.size() > 64) throw CapacityError("bitstring longer than 64 bits");
    std::uint64_t x = 0;
    for (std::size_t k = 0; k < bits.size(); ++k) {
        if (bits[k]) x |= std::uint64_t{1} << k;
    }
    return x;
}

Bitstring index_to_bits(std::uint64_t index, std::size_t n) {
    Bitstring bits(n);
    for (std::size_t k = 0; k < n; ++k) bits[k] = static_cast<std::uint8_t>((index >> k) & 1U);
    return bits;
}

bool lex_less(std::uint64_t a, std::uint64_t b) noexcept {
    const std::uint64_t diff = a ^ b;
    if (diff == 0) return false;
    const int k = std::countr_zero(diff);
    return ((a >> k) & 1U) == 0;
}

std::string to_string(std::span<const std::uint8_t> bits) {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
}

}  // namespace qpde
