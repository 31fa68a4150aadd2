#pragma once

#include <span>
#include <vector>

#include "qpde/mesh_model.hpp"

namespace qpde {

/// Temperatures on an M x N mesh; column i holds the N values at x_i.
class TemperatureField {
public:
    TemperatureField(const Mesh& mesh);

    const Mesh& mesh() const noexcept { return mesh_; }

    double at(std::size_t i, std::size_t j) const noexcept { return grid_[i * mesh_.N() + j]; }

    std::span<const double> column(std::size_t i) const noexcept {
        return {grid_.data() + i * mesh_.N(), mesh_.N()};
    }
    std::span<double> column(std::size_t i) noexcept {
        return {grid_.data() + i * mesh_.N(), mesh_.N()};
    }

private:
    Mesh mesh_;
    std::vector<double> grid_;
};

/// Gaussian elimination with partial pivoting restricted to the band.
/// Throws SingularMatrixError when a pivot falls below 1e-14 in magnitude.
std::vector<double> solve_banded(const MarchingSystem& system);

/// Infinity-norm residual ||A x - rhs||.
double residual_inf(const MarchingSystem& system, std::span<const double> x);

/// Classical march: column 0 is the inlet, column i+1 solves the system built
/// from column i. Solver failures are rethrown with the step index attached.
TemperatureField march(const PhysicalParams& params, const Mesh& mesh, const InletProfile& inlet);

/// Flow-weighted mean temperature of column i (trapezoid rule in y).
double bulk_temperature(const TemperatureField& field, const PhysicalParams& params,
                        std::size_t i);

}  // namespace qpde
