#include "qpde/mesh_model.hpp"

#include <cmath>
#include <string>

#include "qpde/errors.hpp"

namespace qpde {

PhysicalParams PhysicalParams::air_reference() {
    return PhysicalParams{.k = 0.0265,
                          .cp = 2000.0,
                          .rho = 1.1614,
                          .h = 0.01,
                          .b = 1.0,
                          .um = 2.0,
                          .qflux = 50.0};
}

void PhysicalParams::validate() const {
    auto check = [](double v, const char* name) {
        if (!(std::isfinite(v) && v > 0.0)) {
            throw DomainError(std::string("physical parameter '") + name +
                              "' must be finite and strictly positive");
        }
    };
    check(k, "k");
    check(cp, "cp");
    check(rho, "rho");
    check(h, "h");
    check(b, "b");
    check(um, "um");
    // Zero flux is the adiabatic case.
    if (!(std::isfinite(qflux) && qflux >= 0.0)) {
        throw DomainError("physical parameter 'qflux' must be finite and non-negative");
    }
}

Mesh::Mesh(const PhysicalParams& params, std::size_t M, std::size_t N) : M_(M), N_(N) {
    // M = 2 is a single marching step; the type itself only needs an outlet column.
    if (M < 2) throw MeshError("mesh needs M >= 2 nodes in x, got " + std::to_string(M));
    if (N < 4) {
        throw MeshError("mesh needs N >= 4 nodes in y so the boundary stencils do not overlap, got " +
                        std::to_string(N));
    }
    dx_ = params.b / static_cast<double>(M - 1);
    dy_ = params.h / static_cast<double>(N - 1);
}

InletProfile::InletProfile(std::vector<double> values, const Mesh& mesh)
    : values_(std::move(values)) {
    if (values_.size() != mesh.N()) {
        throw MeshError("inlet profile has " + std::to_string(values_.size()) +
                        " values, mesh has N = " + std::to_string(mesh.N()));
    }
}

InletProfile InletProfile::step(const Mesh& mesh, const PhysicalParams& params, double low,
                                double high, double split) {
    const double cut = split * params.h;
    const double slack = 1e-12 * params.h;
    std::vector<double> v(mesh.N());
    for (std::size_t j = 0; j < mesh.N(); ++j) v[j] = mesh.y(j) <= cut + slack ? low : high;
    return InletProfile(std::move(v), mesh);
}

InletProfile InletProfile::uniform(const Mesh& mesh, double value) {
    return InletProfile(std::vector<double>(mesh.N(), value), mesh);
}

MarchingSystem::MarchingSystem(std::size_t N) : coeffs_(3 * N, 0.0), rhs_(N, 0.0) {
    if (N < 4) throw MeshError("marching system needs N >= 4");
}

std::size_t MarchingSystem::first_col(std::size_t row) const noexcept {
    const std::size_t n = size();
    if (row == 0) return 0;
    if (row == n - 1) return n - 3;
    return row - 1;
}

double MarchingSystem::at(std::size_t row, std::size_t col) const noexcept {
    const std::size_t c0 = first_col(row);
    if (col < c0 || col >= c0 + 3) return 0.0;
    return coeffs_[3 * row + (col - c0)];
}

void MarchingSystem::set_row(std::size_t row, double c0, double c1, double c2) {
    coeffs_[3 * row] = c0;
    coeffs_[3 * row + 1] = c1;
    coeffs_[3 * row + 2] = c2;
}

std::vector<double> MarchingSystem::dense() const {
    const std::size_t n = size();
    std::vector<double> a(n * n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t c0 = first_col(r);
        for (std::size_t t = 0; t < 3; ++t) a[r * n + c0 + t] = coeffs_[3 * r + t];
    }
    return a;
}

std::vector<double> MarchingSystem::apply(std::span<const double> v) const {
    const std::size_t n = size();
    if (v.size() != n) throw MeshError("vector length does not match system size");
    std::vector<double> out(n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t c0 = first_col(r);
        for (std::size_t t = 0; t < 3; ++t) out[r] += coeffs_[3 * r + t] * v[c0 + t];
    }
    return out;
}

double velocity(const PhysicalParams& params, double y) {
    if (!(y >= 0.0 && y <= params.h)) {
        throw DomainError("velocity requested at y = " + std::to_string(y) + " outside [0, h]");
    }
    const double eta = y / params.h;
    return 6.0 * params.um * eta * (1.0 - eta);
}

double r_coefficient(const PhysicalParams& params, const Mesh& mesh, std::size_t j) {
    if (j == 0 || j + 1 >= mesh.N()) {
        throw NumericalError("r_j is only defined on interior nodes, got index " +
                             std::to_string(j));
    }
    const double u = velocity(params, mesh.y(j));
    if (u == 0.0) throw NumericalError("zero velocity at interior node " + std::to_string(j));
    const double alpha = params.k / (params.rho * params.cp);
    return alpha * (mesh.dx() / (mesh.dy() * mesh.dy())) / u;
}

MarchingSystem assemble_system(const PhysicalParams& params, const Mesh& mesh,
                               std::span<const double> prev_column) {
    const std::size_t n = mesh.N();
    if (prev_column.size() != n) {
        throw MeshError("previous column has " + std::to_string(prev_column.size()) +
                        " entries, expected " + std::to_string(n));
    }
    MarchingSystem sys(n);
    const double wall = params.qflux * 2.0 * mesh.dy() / params.k;

    sys.set_row(0, -3.0, 4.0, -1.0);
    sys.rhs()[0] = -wall;
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const double r = r_coefficient(params, mesh, j);
        sys.set_row(j, -r, 2.0 * r + 1.0, -r);
        sys.rhs()[j] = prev_column[j];
    }
    sys.set_row(n - 1, 1.0, -4.0, 3.0);
    sys.rhs()[n - 1] = wall;
    return sys;
}

}  // namespace qpde
