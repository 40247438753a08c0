#pragma once

#include "adi/grid.hpp"

#include <cstddef>
#include <vector>

namespace adi {

/// A field padded with two layers of halo nodes on every side.
///
/// Periodic grids fill both layers by wraparound. Dirichlet grids fill
/// the first layer by quintic extrapolation,
///     u[-1] = 5u[0] - 10u[1] + 10u[2] - 5u[3] + u[4],
/// applied outward along each edge normal; the second layer is left NaN
/// since no interior stencil reaches it. Corner ghosts are filled by
/// extrapolating the y-ghost rows in x.
class ExtendedField {
public:
    static constexpr std::ptrdiff_t pad = 2;

    const Grid& grid() const noexcept { return grid_; }
    bool has_ghosts() const noexcept { return has_ghosts_; }

    /// Value at node (i, j); i, j may reach into the halo.
    double at(std::ptrdiff_t i, std::ptrdiff_t j) const noexcept
    {
        return data_[static_cast<std::size_t>((j + pad) * stride_ + (i + pad))];
    }

    /// Pointer to node (i, j); neighbours are at +-1 (x) and +-stride() (y).
    const double* node(std::size_t i, std::size_t j) const noexcept
    {
        return data_.data() + (static_cast<std::ptrdiff_t>(j) + pad) * stride_ +
               static_cast<std::ptrdiff_t>(i) + pad;
    }
    std::ptrdiff_t stride() const noexcept { return stride_; }

    /// Halo-free copy of the nodal values.
    ScalarField interior() const;

private:
    friend ExtendedField extend_ghosts(const ScalarField& u);
    friend ExtendedField pad_without_ghosts(const ScalarField& u);

    ExtendedField(const ScalarField& u, bool fill_ghosts);

    Grid grid_;
    std::ptrdiff_t stride_;
    std::vector<double> data_;
    bool has_ghosts_;
};

/// Wraps periodic edges or extrapolates one ghost ring on Dirichlet edges.
ExtendedField extend_ghosts(const ScalarField& u);

/// Copies `u` into halo storage without filling Dirichlet ghosts. Periodic
/// halos are still wrapped.
ExtendedField pad_without_ghosts(const ScalarField& u);

// Second-order central operators. Periodic grids are evaluated at every
// node; Dirichlet grids at interior nodes only, boundary outputs are zero.
ScalarField d1_central2(const ScalarField& u, Axis axis);
ScalarField d2_central2(const ScalarField& u, Axis axis);
/// delta_x0 delta_y0 u, the compact second-order mixed derivative.
ScalarField dxy_central2(const ScalarField& u);

// Fourth-order five-point operators. The ScalarField overloads accept
// periodic grids only and throw BoundaryClosureError on Dirichlet grids,
// where ghosts must first be supplied through extend_ghosts.
ScalarField d1_five(const ExtendedField& u, Axis axis);
ScalarField d2_five(const ExtendedField& u, Axis axis);
/// 64/8/1-weighted 1/(144 dx dy) mixed stencil, i.e. the product of the
/// five-point first-derivative operators in x and y.
ScalarField dxy_five(const ExtendedField& u);

ScalarField d1_five(const ScalarField& u, Axis axis);
ScalarField d2_five(const ScalarField& u, Axis axis);
ScalarField dxy_five(const ScalarField& u);

/// Visits every node at which derivative operators are evaluated: all
/// nodes for periodic grids, interior nodes for Dirichlet grids.
template <typename Fn>
void for_each_evaluated_node(const Grid& g, Fn&& fn)
{
    const std::size_t lo = g.bc() == BoundaryKind::Dirichlet ? 1 : 0;
    const std::size_t hi_x = g.n_x() - lo;
    const std::size_t hi_y = g.n_y() - lo;
    for (std::size_t j = lo; j < hi_y; ++j) {
        for (std::size_t i = lo; i < hi_x; ++i) fn(i, j);
    }
}

} // namespace adi
