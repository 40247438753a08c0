#include "adi/errors.hpp"
#include "adi/grid.hpp"
#include "adi/stencils.hpp"

#include "support.hpp"

#include "doctest.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

using namespace adi;

namespace {

const Domain unit{};
constexpr double pi = std::numbers::pi;

bool close(double a, double b, double tol)
{
    return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

double ipow(double x, int k)
{
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

// d^n/dx^n of x^k
double dpow(double x, int k, int n)
{
    double c = 1.0;
    for (int i = 0; i < n; ++i) c *= (k - i);
    return k < n ? 0.0 : c * ipow(x, k - n);
}

ScalarField monomial(const Grid& g, int a, int b)
{
    return sample(g, [=](double x, double y) { return ipow(x, a) * ipow(y, b); });
}

ScalarField random_field(const Grid& g, std::mt19937& rng)
{
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    ScalarField f(g);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = dist(rng);
    return f;
}

// Nodes whose five-point stencil stays inside the grid without ghosts.
template <typename Fn>
void for_each_deep_node(const Grid& g, Fn&& fn)
{
    for (std::size_t j = 2; j + 2 < g.n_y(); ++j)
        for (std::size_t i = 2; i + 2 < g.n_x(); ++i) fn(i, j);
}

const Grid dgrid = Grid::with_spacing(Domain{-0.3, 0.9, 0.2, 1.2}, 0.1, BoundaryKind::Dirichlet);

} // namespace

TEST_CASE("central second-order operators: examples and exactness")
{
    const Grid g = Grid::with_spacing(unit, 0.25, BoundaryKind::Dirichlet);
    CHECK(d1_central2(monomial(g, 2, 0), Axis::X)(2, 2) == doctest::Approx(1.0).epsilon(1e-14));
    for (double v : test::values_of(d1_central2(ScalarField(g, 7.0), Axis::Y))) CHECK(v == 0.0);

    for (int k = 0; k <= 3; ++k) {
        for (Axis axis : {Axis::X, Axis::Y}) {
            const ScalarField u = axis == Axis::X ? monomial(dgrid, k, 0) : monomial(dgrid, 0, k);
            const ScalarField d1 = d1_central2(u, axis), d2 = d2_central2(u, axis);
            for_each_evaluated_node(dgrid, [&](std::size_t i, std::size_t j) {
                const double s = axis == Axis::X ? dgrid.x(i) : dgrid.y(j);
                if (k <= 2) CHECK(close(d1(i, j), dpow(s, k, 1), 1e-12));
                CHECK(close(d2(i, j), dpow(s, k, 2), 1e-12));
            });
        }
    }
    const ScalarField m = dxy_central2(monomial(dgrid, 2, 2));
    for_each_evaluated_node(dgrid, [&](std::size_t i, std::size_t j) {
        CHECK(close(m(i, j), 4 * dgrid.x(i) * dgrid.y(j), 1e-12));
    });
}

TEST_CASE("five-point operators: spec examples")
{
    const Grid g = Grid::with_spacing(unit, 0.1, BoundaryKind::Dirichlet);
    const ExtendedField e4 = extend_ghosts(monomial(g, 4, 0));
    CHECK(d1_five(e4, Axis::X)(5, 5) == doctest::Approx(0.5).epsilon(1e-12));
    const ExtendedField e5 = extend_ghosts(monomial(g, 5, 0));
    CHECK(d2_five(e5, Axis::X)(5, 5) == doctest::Approx(2.5).epsilon(1e-12));
    const ScalarField m = dxy_five(extend_ghosts(monomial(g, 2, 2)));
    for_each_evaluated_node(g, [&](std::size_t i, std::size_t j) {
        CHECK(close(m(i, j), 4 * g.x(i) * g.y(j), 1e-12));
    });
    const ScalarField fx = sample(g, [](double x, double) { return std::exp(x); });
    for (double v : test::values_of(dxy_five(extend_ghosts(fx)))) CHECK(std::abs(v) < 1e-11);
}

TEST_CASE("five-point polynomial exactness with ghost closure")
{
    for (int k = 0; k <= 4; ++k) {
        for (Axis axis : {Axis::X, Axis::Y}) {
            const ScalarField u = axis == Axis::X ? monomial(dgrid, k, 0) : monomial(dgrid, 0, k);
            const ExtendedField e = extend_ghosts(u);
            const ScalarField d1 = d1_five(e, axis), d2 = d2_five(e, axis);
            for_each_evaluated_node(dgrid, [&](std::size_t i, std::size_t j) {
                const double s = axis == Axis::X ? dgrid.x(i) : dgrid.y(j);
                CHECK(close(d1(i, j), dpow(s, k, 1), 1e-12));
                CHECK(close(d2(i, j), dpow(s, k, 2), 1e-12));
            });
        }
    }
    // Degree five is exact for the stencil itself, i.e. wherever no ghost is read.
    for (Axis axis : {Axis::X, Axis::Y}) {
        const ScalarField u = axis == Axis::X ? monomial(dgrid, 5, 0) : monomial(dgrid, 0, 5);
        const ScalarField d2 = d2_five(extend_ghosts(u), axis);
        for_each_deep_node(dgrid, [&](std::size_t i, std::size_t j) {
            const double s = axis == Axis::X ? dgrid.x(i) : dgrid.y(j);
            CHECK(close(d2(i, j), dpow(s, 5, 2), 1e-12));
        });
    }
    for (int a = 0; a <= 4; ++a) {
        for (int b = 0; b <= 4; ++b) {
            const ScalarField m = dxy_five(extend_ghosts(monomial(dgrid, a, b)));
            for_each_evaluated_node(dgrid, [&](std::size_t i, std::size_t j) {
                CHECK(close(m(i, j), dpow(dgrid.x(i), a, 1) * dpow(dgrid.y(j), b, 1), 1e-12));
            });
        }
    }
}

TEST_CASE("ghost extrapolation is exact to degree four, corners included")
{
    const Grid g = Grid::with_spacing(unit, 0.25, BoundaryKind::Dirichlet);
    CHECK(extend_ghosts(monomial(g, 4, 0)).at(-1, 2) == doctest::Approx(0.00390625).epsilon(1e-13));

    const ExtendedField c = extend_ghosts(ScalarField(g, 2.5));
    for (std::ptrdiff_t j = -1; j <= 5; ++j)
        for (std::ptrdiff_t i = -1; i <= 5; ++i) CHECK(c.at(i, j) == doctest::Approx(2.5).epsilon(1e-13));

    for (int a = 0; a <= 4; ++a) {
        for (int b = 0; b <= 4; ++b) {
            const ExtendedField e = extend_ghosts(monomial(dgrid, a, b));
            const auto nx = static_cast<std::ptrdiff_t>(dgrid.n_x());
            const auto ny = static_cast<std::ptrdiff_t>(dgrid.n_y());
            for (std::ptrdiff_t j = -1; j <= ny; ++j) {
                for (std::ptrdiff_t i = -1; i <= nx; ++i) {
                    const double x = dgrid.domain().x_min + static_cast<double>(i) * dgrid.dx();
                    const double y = dgrid.domain().y_min + static_cast<double>(j) * dgrid.dy();
                    CHECK(close(e.at(i, j), ipow(x, a) * ipow(y, b), 1e-13));
                }
            }
        }
    }
}

TEST_CASE("corner ghosts do not depend on extrapolation order")
{
    std::mt19937 rng(5);
    const ScalarField u = random_field(dgrid, rng);
    const ExtendedField e = extend_ghosts(u);
    const auto nx = static_cast<std::ptrdiff_t>(dgrid.n_x());
    const auto ny = static_cast<std::ptrdiff_t>(dgrid.n_y());
    const double q[5] = {5.0, -10.0, 10.0, -5.0, 1.0};
    // Extrapolate the x-ghost columns in y (the opposite order) by hand.
    auto x_ghost = [&](std::ptrdiff_t side, std::ptrdiff_t j) {
        double s = 0.0;
        for (std::ptrdiff_t k = 0; k < 5; ++k) {
            const std::ptrdiff_t i = side < 0 ? k : nx - 1 - k;
            s += q[k] * u(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        }
        return s;
    };
    for (std::ptrdiff_t sx : {-1, 1}) {
        for (std::ptrdiff_t sy : {-1, 1}) {
            double corner = 0.0;
            for (std::ptrdiff_t k = 0; k < 5; ++k) corner += q[k] * x_ghost(sx, sy < 0 ? k : ny - 1 - k);
            const std::ptrdiff_t ci = sx < 0 ? -1 : nx, cj = sy < 0 ? -1 : ny;
            CHECK(std::abs(e.at(ci, cj) - corner) <= 1e-13 * std::max(1.0, std::abs(corner)));
        }
    }
}

TEST_CASE("five-point operators converge at fourth order on periodic grids")
{
    auto err = [](double h) {
        const Grid g = Grid::with_spacing(unit, h, BoundaryKind::Periodic);
        const ScalarField u = sample(g, [](double x, double y) {
            return std::sin(2 * pi * x) * std::cos(2 * pi * y);
        });
        const ScalarField d1 = d1_five(u, Axis::X), d2 = d2_five(u, Axis::Y), m = dxy_five(u);
        double e1 = 0, e2 = 0, e3 = 0;
        for (std::size_t j = 0; j < g.n_y(); ++j) {
            for (std::size_t i = 0; i < g.n_x(); ++i) {
                const double x = g.x(i), y = g.y(j);
                e1 = std::max(e1, std::abs(d1(i, j) - 2 * pi * std::cos(2 * pi * x) * std::cos(2 * pi * y)));
                e2 = std::max(e2, std::abs(d2(i, j) + 4 * pi * pi * std::sin(2 * pi * x) * std::cos(2 * pi * y)));
                e3 = std::max(e3, std::abs(m(i, j) + 4 * pi * pi * std::cos(2 * pi * x) * std::sin(2 * pi * y)));
            }
        }
        return std::array<double, 3>{e1, e2, e3};
    };
    const auto coarse = err(1.0 / 20), fine = err(1.0 / 40);
    for (int k = 0; k < 3; ++k) {
        const double order = std::log2(coarse[k] / fine[k]);
        CHECK(order > 3.9);
        CHECK(order < 4.1);
    }
}

TEST_CASE("operators are linear")
{
    std::mt19937 rng(17);
    for (BoundaryKind bc : {BoundaryKind::Periodic, BoundaryKind::Dirichlet}) {
        const Grid g = build_grid(unit, 9, 8, bc);
        const ScalarField u = random_field(g, rng), v = random_field(g, rng);
        const double alpha = 1.7, beta = -0.3;
        ScalarField w = u;
        for (std::size_t k = 0; k < w.size(); ++k) w[k] = alpha * u[k] + beta * v[k];
        auto check = [&](auto op) {
            const ScalarField ow = op(w), ou = op(u), ov = op(v);
            for (std::size_t k = 0; k < w.size(); ++k)
                CHECK(std::abs(ow[k] - (alpha * ou[k] + beta * ov[k])) < 1e-10);
        };
        for (Axis a : {Axis::X, Axis::Y}) {
            check([&](const ScalarField& f) { return d1_central2(f, a); });
            check([&](const ScalarField& f) { return d2_central2(f, a); });
            check([&](const ScalarField& f) { return d1_five(extend_ghosts(f), a); });
            check([&](const ScalarField& f) { return d2_five(extend_ghosts(f), a); });
        }
        check([&](const ScalarField& f) { return dxy_central2(f); });
        check([&](const ScalarField& f) { return dxy_five(extend_ghosts(f)); });
    }
}

TEST_CASE("periodic operators annihilate constants and have zero node sum")
{
    const Grid g = build_grid(unit, 12, 10, BoundaryKind::Periodic);
    const ScalarField c(g, 3.25);
    std::mt19937 rng(23);
    const ScalarField u = random_field(g, rng);
    double umax = 0.0;
    for (double v : test::values_of(u)) umax = std::max(umax, std::abs(v));
    const double tol = 1e-12 * static_cast<double>(g.size()) * umax;

    auto check = [&](auto op) {
        for (double v : test::values_of(op(c))) CHECK(v == 0.0);
        double sum = 0.0;
        for (double v : test::values_of(op(u))) sum += v;
        // Stencil weights carry 1/h^2 factors; scale the bound accordingly.
        CHECK(std::abs(sum) <= tol / (g.dx() * g.dy()));
    };
    for (Axis a : {Axis::X, Axis::Y}) {
        check([&](const ScalarField& f) { return d1_central2(f, a); });
        check([&](const ScalarField& f) { return d2_central2(f, a); });
        check([&](const ScalarField& f) { return d1_five(f, a); });
        check([&](const ScalarField& f) { return d2_five(f, a); });
    }
    check([&](const ScalarField& f) { return dxy_central2(f); });
    check([&](const ScalarField& f) { return dxy_five(f); });
}

TEST_CASE("dxy_five equals the product of the first-derivative operators")
{
    std::mt19937 rng(29);
    const Grid g = build_grid(unit, 11, 13, BoundaryKind::Periodic);
    const ScalarField u = random_field(g, rng);
    const ScalarField direct = dxy_five(u);
    const ScalarField nested = d1_five(d1_five(u, Axis::X), Axis::Y);
    for (std::size_t k = 0; k < u.size(); ++k)
        CHECK(std::abs(direct[k] - nested[k]) <= 1e-12 * std::max(1.0, std::abs(nested[k])));
}

TEST_CASE("Dirichlet closure: boundary outputs are zero and ghosts are required")
{
    std::mt19937 rng(31);
    const ScalarField u = random_field(dgrid, rng);
    CHECK_THROWS_AS(d1_five(u, Axis::X), BoundaryClosureError);
    CHECK_THROWS_AS(d2_five(u, Axis::Y), BoundaryClosureError);
    CHECK_THROWS_AS(dxy_five(u), BoundaryClosureError);
    CHECK_THROWS_AS(d1_five(pad_without_ghosts(u), Axis::X), BoundaryClosureError);
    CHECK_THROWS_AS(dxy_five(pad_without_ghosts(u)), BoundaryClosureError);

    const ScalarField d = d2_five(extend_ghosts(u), Axis::X);
    for (std::size_t j = 0; j < dgrid.n_y(); ++j)
        for (std::size_t i = 0; i < dgrid.n_x(); ++i)
            if (dgrid.is_boundary(i, j)) CHECK(d(i, j) == 0.0);
    CHECK(extend_ghosts(u).interior().values().size() == u.size());
}
