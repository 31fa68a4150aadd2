#pragma once

// Test-only reference implementations. They share no code path with the
// library: dense matrices, explicit Kronecker products, direct sums.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cd = std::complex<double>;

/// ||A s - b||^2 with s_i = sum_r 2^{e_r} bit(i*R + r) of x.
inline double residual_energy(const std::vector<double>& a, const std::vector<double>& b,
                              const std::vector<int>& exps, std::uint64_t x) {
    const std::size_t N = b.size();
    const std::size_t R = exps.size();
    std::vector<double> s(N, 0.0);
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t r = 0; r < R; ++r) {
            if ((x >> (i * R + r)) & 1U) s[i] += std::pow(2.0, exps[r]);
        }
    }
    double f = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
        double row = -b[k];
        for (std::size_t i = 0; i < N; ++i) row += a[k * N + i] * s[i];
        f += row * row;
    }
    return f;
}

/// exp(-i beta X_q) on n qubits as an explicit 2^n x 2^n matrix, where qubit q
/// is bit q of the basis index: I (x) ... (x) R (x) ... (x) I with R at
/// Kronecker position n-1-q (most significant factor first).
inline Eigen::MatrixXcd mixer_factor(std::size_t n, std::size_t q, double beta) {
    Eigen::Matrix2cd rx;
    rx << cd(std::cos(beta), 0), cd(0, -std::sin(beta)), cd(0, -std::sin(beta)),
        cd(std::cos(beta), 0);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (std::size_t pos = 0; pos < n; ++pos) {
        const std::size_t qubit = n - 1 - pos;
        Eigen::Matrix2cd f = qubit == q ? rx : Eigen::Matrix2cd::Identity();
        Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
        for (Eigen::Index r = 0; r < out.rows(); ++r) {
            for (Eigen::Index c = 0; c < out.cols(); ++c) next.block(2 * r, 2 * c, 2, 2) = out(r, c) * f;
        }
        out = next;
    }
    return out;
}

inline Eigen::MatrixXcd mixer(std::size_t n, double beta) {
    const Eigen::Index dim = Eigen::Index{1} << n;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
    for (std::size_t q = 0; q < n; ++q) u = mixer_factor(n, q, beta) * u;
    return u;
}

inline Eigen::MatrixXcd cost(const std::vector<double>& energies, double gamma) {
    const auto dim = static_cast<Eigen::Index>(energies.size());
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index x = 0; x < dim; ++x) {
        u(x, x) = std::exp(cd(0.0, -gamma * energies[static_cast<std::size_t>(x)]));
    }
    return u;
}

/// prod_l U_B(beta_l) U_C(gamma_l) applied to psi0.
inline Eigen::VectorXcd circuit(std::size_t n, const std::vector<double>& energies,
                                const std::vector<double>& gammas, const std::vector<double>& betas,
                                const Eigen::VectorXcd& psi0) {
    Eigen::VectorXcd psi = psi0;
    for (std::size_t l = 0; l < gammas.size(); ++l) psi = mixer(n, betas[l]) * (cost(energies, gammas[l]) * psi);
    return psi;
}

}  // namespace oracle
