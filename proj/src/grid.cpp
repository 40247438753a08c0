#include "adi/grid.hpp"

#include "adi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace adi {

std::string to_string(BoundaryKind bc)
{
    return bc == BoundaryKind::Periodic ? "periodic" : "dirichlet";
}

namespace {

double mesh_width(double lo, double hi, std::size_t n, BoundaryKind bc)
{
    const auto cells = bc == BoundaryKind::Periodic ? n : n - 1;
    return (hi - lo) / static_cast<double>(cells);
}

// Number of cells of width h in [lo, hi]; throws unless h divides the length.
std::size_t cell_count(double lo, double hi, double h)
{
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw InvalidGridError("mesh width must be positive and finite");
    }
    const double ratio = (hi - lo) / h;
    const double cells = std::round(ratio);
    if (cells < 1.0 || std::abs(ratio - cells) > 1e-9 * std::max(1.0, ratio)) {
        std::ostringstream msg;
        msg << "mesh width " << h << " does not divide interval length " << (hi - lo);
        throw InvalidGridError(msg.str());
    }
    return static_cast<std::size_t>(cells);
}

} // namespace

Grid::Grid(Domain domain, std::size_t n_x, std::size_t n_y, BoundaryKind bc)
    : domain_(domain), n_x_(n_x), n_y_(n_y), bc_(bc)
{
    if (!(domain.x_max > domain.x_min) || !(domain.y_max > domain.y_min)) {
        throw InvalidGridError("domain bounds must satisfy x_max > x_min and y_max > y_min");
    }
    if (n_x < min_nodes || n_y < min_nodes) {
        std::ostringstream msg;
        msg << "grid needs at least " << min_nodes << " nodes per direction, got "
            << n_x << " x " << n_y;
        throw InvalidGridError(msg.str());
    }
    dx_ = mesh_width(domain.x_min, domain.x_max, n_x, bc);
    dy_ = mesh_width(domain.y_min, domain.y_max, n_y, bc);
}

Grid Grid::with_spacing(Domain domain, double h, BoundaryKind bc)
{
    const auto cx = cell_count(domain.x_min, domain.x_max, h);
    const auto cy = cell_count(domain.y_min, domain.y_max, h);
    const std::size_t extra = bc == BoundaryKind::Dirichlet ? 1 : 0;
    return Grid(domain, cx + extra, cy + extra, bc);
}

bool Grid::operator==(const Grid& other) const noexcept
{
    return domain_ == other.domain_ && n_x_ == other.n_x_ && n_y_ == other.n_y_ &&
           bc_ == other.bc_;
}

Grid build_grid(Domain domain, std::size_t n_x, std::size_t n_y, BoundaryKind bc)
{
    return Grid(domain, n_x, n_y, bc);
}

ScalarField::ScalarField(Grid grid, double fill)
    : grid_(std::move(grid)), values_(grid_.size(), fill)
{
}

ScalarField::ScalarField(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values))
{
    if (values_.size() != grid_.size()) {
        throw ShapeError("value count does not match grid size");
    }
}

double ScalarField::mean() const noexcept
{
    double sum = 0.0;
    for (double v : values_) sum += v;
    return sum / static_cast<double>(values_.size());
}

ScalarField& ScalarField::axpy(double alpha, const ScalarField& other)
{
    if (!(grid_ == other.grid_)) {
        throw IncompatibleFieldsError("axpy on fields from different grids");
    }
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += alpha * other.values_[k];
    return *this;
}

ScalarField sample(const Grid& grid, const SpatialFunction& f)
{
    ScalarField out(grid);
    for (std::size_t j = 0; j < grid.n_y(); ++j) {
        const double y = grid.y(j);
        for (std::size_t i = 0; i < grid.n_x(); ++i) {
            const double v = f(grid.x(i), y);
            if (!std::isfinite(v)) {
                std::ostringstream msg;
                msg << "non-finite value " << v << " at node (" << i << ", " << j
                    << ") = (" << grid.x(i) << ", " << y << ")";
                throw SamplingError(msg.str());
            }
            out(i, j) = v;
        }
    }
    return out;
}

ErrorNorms error_norms(const ScalarField& a, const ScalarField& b)
{
    if (!(a.grid() == b.grid())) {
        throw IncompatibleFieldsError("error_norms: fields live on different grids");
    }
    double sum_sq = 0.0;
    double max_abs = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = std::abs(a[k] - b[k]);
        sum_sq += d * d;
        max_abs = std::max(max_abs, d);
    }
    return {std::sqrt(sum_sq / static_cast<double>(a.size())), max_abs};
}

ScalarField restrict_to(const ScalarField& fine, const Grid& coarse_grid)
{
    const Grid& fg = fine.grid();
    if (!(fg.domain() == coarse_grid.domain()) || fg.bc() != coarse_grid.bc()) {
        throw IncompatibleFieldsError("restrict: grids differ in domain or boundary kind");
    }
    auto ratio = [](double coarse_h, double fine_h) -> std::size_t {
        const double r = coarse_h / fine_h;
        const double ri = std::round(r);
        if (ri < 1.0 || std::abs(r - ri) > 1e-9 * r) {
            std::ostringstream msg;
            msg << "restrict: mesh ratio " << r << " is not an integer";
            throw IncompatibleFieldsError(msg.str());
        }
        return static_cast<std::size_t>(ri);
    };
    const auto rx = ratio(coarse_grid.dx(), fg.dx());
    const auto ry = ratio(coarse_grid.dy(), fg.dy());

    ScalarField out(coarse_grid);
    for (std::size_t j = 0; j < coarse_grid.n_y(); ++j) {
        for (std::size_t i = 0; i < coarse_grid.n_x(); ++i) {
            out(i, j) = fine(i * rx, j * ry);
        }
    }
    return out;
}

void write_field_csv(std::ostream& os, const ScalarField& u, std::span<const std::string> metadata)
{
    const Grid& g = u.grid();
    os << "# grid " << g.n_x() << "x" << g.n_y() << " " << to_string(g.bc()) << " ["
       << g.domain().x_min << "," << g.domain().x_max << "]x[" << g.domain().y_min << ","
       << g.domain().y_max << "] dx=" << g.dx() << " dy=" << g.dy() << "\n";
    for (const auto& line : metadata) os << "# " << line << "\n";
    os << "x,y,u\n";
    const auto old_precision = os.precision(17);
    for (std::size_t j = 0; j < g.n_y(); ++j) {
        for (std::size_t i = 0; i < g.n_x(); ++i) {
            os << g.x(i) << "," << g.y(j) << "," << u(i, j) << "\n";
        }
    }
    os.precision(old_precision);
}

} // namespace adi
