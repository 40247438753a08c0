#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace adi {

enum class BoundaryKind { Periodic, Dirichlet };

std::string to_string(BoundaryKind bc);

enum class Axis { X, Y };

struct Domain {
    double x_min = 0.0;
    double x_max = 1.0;
    double y_min = 0.0;
    double y_max = 1.0;

    bool operator==(const Domain&) const = default;
};

/// Uniform node-centred rectangular mesh.
///
/// Dirichlet grids include both endpoints in each direction, so
/// dx = (x_max - x_min) / (n_x - 1). Periodic grids drop the right/top
/// endpoint (it is identified with the left/bottom one) and use
/// dx = (x_max - x_min) / n_x.
class Grid {
public:
    static constexpr std::size_t min_nodes = 5;

    Grid(Domain domain, std::size_t n_x, std::size_t n_y, BoundaryKind bc);

    /// Grid on `domain` whose mesh width is `h` in both directions.
    /// Throws InvalidGridError when h does not divide the domain lengths.
    static Grid with_spacing(Domain domain, double h, BoundaryKind bc);

    const Domain& domain() const noexcept { return domain_; }
    std::size_t n_x() const noexcept { return n_x_; }
    std::size_t n_y() const noexcept { return n_y_; }
    std::size_t size() const noexcept { return n_x_ * n_y_; }
    std::size_t n(Axis a) const noexcept { return a == Axis::X ? n_x_ : n_y_; }
    BoundaryKind bc() const noexcept { return bc_; }
    double dx() const noexcept { return dx_; }
    double dy() const noexcept { return dy_; }
    double spacing(Axis a) const noexcept { return a == Axis::X ? dx_ : dy_; }

    double x(std::size_t i) const noexcept { return domain_.x_min + static_cast<double>(i) * dx_; }
    double y(std::size_t j) const noexcept { return domain_.y_min + static_cast<double>(j) * dy_; }

    /// Row-major index with x varying fastest.
    std::size_t index(std::size_t i, std::size_t j) const noexcept { return j * n_x_ + i; }

    bool is_boundary(std::size_t i, std::size_t j) const noexcept {
        return bc_ == BoundaryKind::Dirichlet &&
               (i == 0 || j == 0 || i + 1 == n_x_ || j + 1 == n_y_);
    }

    bool operator==(const Grid& other) const noexcept;

private:
    Domain domain_;
    std::size_t n_x_;
    std::size_t n_y_;
    BoundaryKind bc_;
    double dx_;
    double dy_;
};

Grid build_grid(Domain domain, std::size_t n_x, std::size_t n_y, BoundaryKind bc);

/// Nodal values on a Grid, x-index varying fastest.
class ScalarField {
public:
    explicit ScalarField(Grid grid, double fill = 0.0);
    ScalarField(Grid grid, std::vector<double> values);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }

    double& operator()(std::size_t i, std::size_t j) noexcept { return values_[grid_.index(i, j)]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values_[grid_.index(i, j)]; }
    double& operator[](std::size_t k) noexcept { return values_[k]; }
    double operator[](std::size_t k) const noexcept { return values_[k]; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    double mean() const noexcept;

    /// this += alpha * other
    ScalarField& axpy(double alpha, const ScalarField& other);

private:
    Grid grid_;
    std::vector<double> values_;
};

using SpatialFunction = std::function<double(double x, double y)>;
using SpaceTimeFunction = std::function<double(double x, double y, double t)>;

/// values[i,j] = f(x_i, y_j). Throws SamplingError naming the node on a
/// non-finite value.
ScalarField sample(const Grid& grid, const SpatialFunction& f);

struct ErrorNorms {
    double l2 = 0.0;   ///< RMS: sqrt(mean of squared differences)
    double linf = 0.0; ///< max absolute difference
};

ErrorNorms error_norms(const ScalarField& a, const ScalarField& b);

/// Injects `fine` onto the nested `coarse_grid` (no interpolation).
ScalarField restrict_to(const ScalarField& fine, const Grid& coarse_grid);

/// Writes `x,y,u` CSV preceded by `#` metadata lines.
void write_field_csv(std::ostream& os, const ScalarField& u,
                     std::span<const std::string> metadata = {});

} // namespace adi
