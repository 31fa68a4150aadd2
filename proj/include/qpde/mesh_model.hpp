#pragma once

// Physical problem and finite-difference discretization of fully developed
// laminar flow between heated parallel plates.
//
// Index convention: the documentation speaks of nodes 1..N (y) and 1..M (x);
// every C++ index is 0-based, so node j is stored at position j-1.

#include <cstddef>
#include <span>
#include <vector>

namespace qpde {

struct PhysicalParams {
    double k;      // thermal conductivity [W/(m K)]
    double cp;     // specific heat [J/(kg K)]
    double rho;    // specific mass [kg/m^3]
    double h;      // plate spacing [m]
    double b;      // plate length [m]
    double um;     // mean fluid velocity [m/s]
    double qflux;  // wall heat flux [W/m^2]

    /// Air between plates, as used for the reference 5x5 experiment.
    static PhysicalParams air_reference();

    /// Throws DomainError unless every field is finite and strictly positive
    /// (qflux may be zero).
    void validate() const;
};

/// Uniform rectangular mesh. Steps are always derived from the geometry.
class Mesh {
public:
    Mesh(const PhysicalParams& params, std::size_t M, std::size_t N);

    std::size_t M() const noexcept { return M_; }
    std::size_t N() const noexcept { return N_; }
    double dx() const noexcept { return dx_; }
    double dy() const noexcept { return dy_; }

    double x(std::size_t i) const noexcept { return static_cast<double>(i) * dx_; }
    double y(std::size_t j) const noexcept { return static_cast<double>(j) * dy_; }

private:
    std::size_t M_;
    std::size_t N_;
    double dx_;
    double dy_;
};

/// Inlet temperatures T(0, y_j), one per y-node.
class InletProfile {
public:
    InletProfile(std::vector<double> values, const Mesh& mesh);

    /// `low` for y <= split*h (midpoint node included), `high` above.
    static InletProfile step(const Mesh& mesh, const PhysicalParams& params, double low,
                             double high, double split = 0.5);

    static InletProfile uniform(const Mesh& mesh, double value);

    std::span<const double> values() const noexcept { return values_; }

private:
    std::vector<double> values_;
};

/// Tridiagonal interior rows plus one-sided three-point boundary rows.
///
/// Row 0 holds (-3, 4, -1) on columns 0..2 and row N-1 holds (1, -4, 3) on
/// columns N-3..N-1, so each row stores three coefficients and the column of
/// its first one.
class MarchingSystem {
public:
    explicit MarchingSystem(std::size_t N);

    std::size_t size() const noexcept { return rhs_.size(); }

    /// First column touched by `row`.
    std::size_t first_col(std::size_t row) const noexcept;

    /// Coefficient A(row, col); zero outside the stored band.
    double at(std::size_t row, std::size_t col) const noexcept;
    void set_row(std::size_t row, double c0, double c1, double c2);

    std::span<const double> rhs() const noexcept { return rhs_; }
    std::span<double> rhs() noexcept { return rhs_; }

    /// Dense row-major copy, mostly for tests and encoding.
    std::vector<double> dense() const;

    /// A*v.
    std::vector<double> apply(std::span<const double> v) const;

private:
    std::vector<double> coeffs_;  // 3 per row
    std::vector<double> rhs_;
};

/// Parabolic velocity 6 um (y/h)(1 - y/h).
double velocity(const PhysicalParams& params, double y);

/// Dimensionless diffusion number r_j for 0-based interior index j in [1, N-2].
double r_coefficient(const PhysicalParams& params, const Mesh& mesh, std::size_t j);

/// Banded system whose solution is column i+1 given column i.
MarchingSystem assemble_system(const PhysicalParams& params, const Mesh& mesh,
                               std::span<const double> prev_column);

}  // namespace qpde
