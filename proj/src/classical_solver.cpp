#include "qpde/classical_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qpde/errors.hpp"

namespace qpde {

namespace {

constexpr double kPivotFloor = 1e-14;

// Lower and upper bandwidth of a marching system. The boundary rows reach two
// columns past the diagonal, interior rows only one.
constexpr std::size_t kLower = 2;
constexpr std::size_t kUpper = 2;

// Row-wise band storage wide enough for pivoting fill-in: row r keeps columns
// [r - kLower, r + kUpper + kLower].
class BandWork {
public:
    explicit BandWork(std::size_t n) : n_(n), data_(n * kWidth, 0.0) {}

    bool in_band(std::size_t r, std::size_t c) const noexcept {
        return c + kLower >= r && c <= r + kUpper + kLower;
    }
    double& operator()(std::size_t r, std::size_t c) noexcept {
        return data_[r * kWidth + (c + kLower - r)];
    }
    double get(std::size_t r, std::size_t c) const noexcept {
        return in_band(r, c) ? data_[r * kWidth + (c + kLower - r)] : 0.0;
    }

private:
    static constexpr std::size_t kWidth = 2 * kLower + kUpper + 1;
    std::size_t n_;
    std::vector<double> data_;
};

}  // namespace

TemperatureField::TemperatureField(const Mesh& mesh)
    : mesh_(mesh), grid_(mesh.M() * mesh.N(), 0.0) {}

std::vector<double> solve_banded(const MarchingSystem& system) {
    const std::size_t n = system.size();
    BandWork a(n);
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t c0 = system.first_col(r);
        for (std::size_t c = c0; c < c0 + 3; ++c) a(r, c) = system.at(r, c);
    }
    std::vector<double> x(system.rhs().begin(), system.rhs().end());

    for (std::size_t c = 0; c < n; ++c) {
        const std::size_t last_row = std::min(n - 1, c + kLower);
        std::size_t piv = c;
        for (std::size_t r = c + 1; r <= last_row; ++r) {
            if (std::abs(a.get(r, c)) > std::abs(a.get(piv, c))) piv = r;
        }
        if (std::abs(a.get(piv, c)) < kPivotFloor) {
            throw SingularMatrixError("pivot below 1e-14 in column " + std::to_string(c));
        }
        const std::size_t last_col = std::min(n - 1, c + kLower + kUpper);
        if (piv != c) {
            for (std::size_t k = c; k <= last_col; ++k) {
                const double tmp = a.get(c, k);
                a(c, k) = a.get(piv, k);
                if (a.in_band(piv, k)) a(piv, k) = tmp;
            }
            std::swap(x[c], x[piv]);
        }
        for (std::size_t r = c + 1; r <= last_row; ++r) {
            const double f = a.get(r, c) / a.get(c, c);
            if (f == 0.0) continue;
            a(r, c) = 0.0;
            for (std::size_t k = c + 1; k <= last_col; ++k) {
                if (a.in_band(r, k)) a(r, k) -= f * a.get(c, k);
            }
            x[r] -= f * x[c];
        }
    }

    for (std::size_t c = n; c-- > 0;) {
        const std::size_t last_col = std::min(n - 1, c + kLower + kUpper);
        double s = x[c];
        for (std::size_t k = c + 1; k <= last_col; ++k) s -= a.get(c, k) * x[k];
        x[c] = s / a.get(c, c);
    }
    return x;
}

double residual_inf(const MarchingSystem& system, std::span<const double> x) {
    const auto ax = system.apply(x);
    double worst = 0.0;
    for (std::size_t r = 0; r < ax.size(); ++r) {
        worst = std::max(worst, std::abs(ax[r] - system.rhs()[r]));
    }
    return worst;
}

TemperatureField march(const PhysicalParams& params, const Mesh& mesh, const InletProfile& inlet) {
    if (inlet.values().size() != mesh.N()) throw MeshError("inlet length does not match mesh");
    TemperatureField field(mesh);
    std::ranges::copy(inlet.values(), field.column(0).begin());
    for (std::size_t i = 0; i + 1 < mesh.M(); ++i) {
        try {
            const auto sys = assemble_system(params, mesh, field.column(i));
            const auto next = solve_banded(sys);
            if (!std::ranges::all_of(next, [](double v) { return std::isfinite(v); })) {
                throw NumericalError("non-finite temperature in solution");
            }
            std::ranges::copy(next, field.column(i + 1).begin());
        } catch (const NumericalError& e) {
            throw NumericalError(e.what(), static_cast<int>(i + 1));
        }
    }
    return field;
}

double bulk_temperature(const TemperatureField& field, const PhysicalParams& params,
                        std::size_t i) {
    const Mesh& mesh = field.mesh();
    const std::size_t n = mesh.N();
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double w = (j == 0 || j + 1 == n) ? 0.5 * mesh.dy() : mesh.dy();
        const double wu = w * velocity(params, std::min(mesh.y(j), params.h));
        num += wu * field.at(i, j);
        den += wu;
    }
    return num / den;
}

}  // namespace qpde
