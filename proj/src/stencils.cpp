#include "adi/stencils.hpp"

#include "adi/errors.hpp"

#include <cmath>
#include <limits>

namespace adi {

namespace {

constexpr double quiet_nan = std::numeric_limits<double>::quiet_NaN();

// Outward quintic extrapolation from five values ordered from the edge inward.
inline double extrapolate(double e0, double e1, double e2, double e3, double e4) noexcept
{
    return 5.0 * e0 - 10.0 * e1 + 10.0 * e2 - 5.0 * e3 + e4;
}

template <typename Kernel>
ScalarField evaluate(const ExtendedField& u, Kernel&& kernel)
{
    ScalarField out(u.grid());
    const std::ptrdiff_t s = u.stride();
    for_each_evaluated_node(u.grid(), [&](std::size_t i, std::size_t j) {
        out(i, j) = kernel(u.node(i, j), s);
    });
    return out;
}

void require_periodic(const ScalarField& u, const char* op)
{
    if (u.grid().bc() != BoundaryKind::Periodic) {
        throw BoundaryClosureError(std::string(op) +
                                   ": Dirichlet grid needs ghost values; call extend_ghosts first");
    }
}

void require_ghosts(const ExtendedField& u, const char* op)
{
    if (u.grid().bc() == BoundaryKind::Dirichlet && !u.has_ghosts()) {
        throw BoundaryClosureError(std::string(op) + ": ghost layer missing on Dirichlet grid");
    }
}

} // namespace

ExtendedField::ExtendedField(const ScalarField& u, bool fill_ghosts)
    : grid_(u.grid()),
      stride_(static_cast<std::ptrdiff_t>(u.grid().n_x()) + 2 * pad),
      data_(static_cast<std::size_t>(stride_ * (static_cast<std::ptrdiff_t>(u.grid().n_y()) + 2 * pad)),
            quiet_nan),
      has_ghosts_(false)
{
    const auto nx = static_cast<std::ptrdiff_t>(grid_.n_x());
    const auto ny = static_cast<std::ptrdiff_t>(grid_.n_y());
    auto ref = [this](std::ptrdiff_t i, std::ptrdiff_t j) -> double& {
        return data_[static_cast<std::size_t>((j + pad) * stride_ + (i + pad))];
    };
    for (std::ptrdiff_t j = 0; j < ny; ++j) {
        for (std::ptrdiff_t i = 0; i < nx; ++i) {
            ref(i, j) = u(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        }
    }

    if (grid_.bc() == BoundaryKind::Periodic) {
        auto wrap = [](std::ptrdiff_t k, std::ptrdiff_t n) { return ((k % n) + n) % n; };
        for (std::ptrdiff_t j = -pad; j < ny + pad; ++j) {
            for (std::ptrdiff_t i = -pad; i < nx + pad; ++i) {
                if (i >= 0 && i < nx && j >= 0 && j < ny) continue;
                ref(i, j) = ref(wrap(i, nx), wrap(j, ny));
            }
        }
        has_ghosts_ = true;
        return;
    }

    if (!fill_ghosts) return;

    // y-ghost rows first, over the physical columns.
    for (std::ptrdiff_t i = 0; i < nx; ++i) {
        ref(i, -1) = extrapolate(ref(i, 0), ref(i, 1), ref(i, 2), ref(i, 3), ref(i, 4));
        ref(i, ny) = extrapolate(ref(i, ny - 1), ref(i, ny - 2), ref(i, ny - 3), ref(i, ny - 4),
                                 ref(i, ny - 5));
    }
    // x-ghost columns over the extended rows; this also fills the corners.
    for (std::ptrdiff_t j = -1; j <= ny; ++j) {
        ref(-1, j) = extrapolate(ref(0, j), ref(1, j), ref(2, j), ref(3, j), ref(4, j));
        ref(nx, j) = extrapolate(ref(nx - 1, j), ref(nx - 2, j), ref(nx - 3, j), ref(nx - 4, j),
                                 ref(nx - 5, j));
    }
    has_ghosts_ = true;
}

ScalarField ExtendedField::interior() const
{
    ScalarField out(grid_);
    for (std::size_t j = 0; j < grid_.n_y(); ++j) {
        for (std::size_t i = 0; i < grid_.n_x(); ++i) out(i, j) = *node(i, j);
    }
    return out;
}

ExtendedField extend_ghosts(const ScalarField& u) { return ExtendedField(u, true); }

ExtendedField pad_without_ghosts(const ScalarField& u) { return ExtendedField(u, false); }

ScalarField d1_central2(const ScalarField& u, Axis axis)
{
    const auto e = pad_without_ghosts(u);
    const double inv = 1.0 / (2.0 * u.grid().spacing(axis));
    const std::ptrdiff_t step = axis == Axis::X ? 1 : e.stride();
    return evaluate(e, [=](const double* p, std::ptrdiff_t) { return (p[step] - p[-step]) * inv; });
}

ScalarField d2_central2(const ScalarField& u, Axis axis)
{
    const auto e = pad_without_ghosts(u);
    const double h = u.grid().spacing(axis);
    const double inv = 1.0 / (h * h);
    const std::ptrdiff_t step = axis == Axis::X ? 1 : e.stride();
    return evaluate(e, [=](const double* p, std::ptrdiff_t) {
        return (p[step] - 2.0 * p[0] + p[-step]) * inv;
    });
}

ScalarField dxy_central2(const ScalarField& u)
{
    const auto e = pad_without_ghosts(u);
    const double inv = 1.0 / (4.0 * u.grid().dx() * u.grid().dy());
    return evaluate(e, [=](const double* p, std::ptrdiff_t s) {
        return (p[s + 1] - p[s - 1] - p[-s + 1] + p[-s - 1]) * inv;
    });
}

ScalarField d1_five(const ExtendedField& u, Axis axis)
{
    require_ghosts(u, "d1_five");
    const double inv = 1.0 / (12.0 * u.grid().spacing(axis));
    const std::ptrdiff_t a = axis == Axis::X ? 1 : u.stride();
    return evaluate(u, [=](const double* p, std::ptrdiff_t) {
        return (-p[2 * a] + 8.0 * p[a] - 8.0 * p[-a] + p[-2 * a]) * inv;
    });
}

ScalarField d2_five(const ExtendedField& u, Axis axis)
{
    require_ghosts(u, "d2_five");
    const double h = u.grid().spacing(axis);
    const double inv = 1.0 / (12.0 * h * h);
    const std::ptrdiff_t a = axis == Axis::X ? 1 : u.stride();
    return evaluate(u, [=](const double* p, std::ptrdiff_t) {
        return (-p[2 * a] + 16.0 * p[a] - 30.0 * p[0] + 16.0 * p[-a] - p[-2 * a]) * inv;
    });
}

ScalarField dxy_five(const ExtendedField& u)
{
    require_ghosts(u, "dxy_five");
    const double inv = 1.0 / (144.0 * u.grid().dx() * u.grid().dy());
    return evaluate(u, [=](const double* p, std::ptrdiff_t s) {
        const double ring1 = p[s + 1] - p[s - 1] + p[-s - 1] - p[-s + 1];
        const double ring_mixed = -p[s + 2] - p[2 * s + 1] + p[2 * s - 1] + p[s - 2] -
                                  p[-s - 2] - p[-2 * s - 1] + p[-2 * s + 1] + p[-s + 2];
        const double ring2 = p[2 * s + 2] - p[2 * s - 2] + p[-2 * s - 2] - p[-2 * s + 2];
        return (64.0 * ring1 + 8.0 * ring_mixed + ring2) * inv;
    });
}

ScalarField d1_five(const ScalarField& u, Axis axis)
{
    require_periodic(u, "d1_five");
    return d1_five(extend_ghosts(u), axis);
}

ScalarField d2_five(const ScalarField& u, Axis axis)
{
    require_periodic(u, "d2_five");
    return d2_five(extend_ghosts(u), axis);
}

ScalarField dxy_five(const ScalarField& u)
{
    require_periodic(u, "dxy_five");
    return dxy_five(extend_ghosts(u));
}

} // namespace adi
