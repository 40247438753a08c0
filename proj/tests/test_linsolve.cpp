#include "adi/errors.hpp"
#include "adi/linsolve.hpp"

#include "oracle/dense.hpp"

#include "doctest.h"

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

using namespace adi;
using oracle::Dense;

namespace {

constexpr BandKind all_kinds[] = {BandKind::Tri, BandKind::Penta, BandKind::CyclicTri,
                                  BandKind::CyclicPenta};

// Dense copy of a band matrix, wrapping cyclic columns modulo n.
Dense to_dense(const BandedLineMatrix& m)
{
    const auto n = static_cast<std::ptrdiff_t>(m.n());
    const auto p = static_cast<std::ptrdiff_t>(m.p());
    Dense d(m.n(), m.n());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        for (std::ptrdiff_t o = -p; o <= p; ++o) {
            std::ptrdiff_t c = i + o;
            if (is_cyclic(m.kind())) {
                c = ((c % n) + n) % n;
            } else if (c < 0 || c >= n) {
                continue;
            }
            d(static_cast<std::size_t>(i), static_cast<std::size_t>(c)) +=
                m.at(static_cast<std::size_t>(i), o);
        }
    }
    return d;
}

// Random diagonally dominant band matrix with general (non-Toeplitz) rows.
BandedLineMatrix random_band(BandKind kind, std::size_t n, std::mt19937& rng)
{
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    BandedLineMatrix m(kind, n);
    const auto p = static_cast<std::ptrdiff_t>(m.p());
    for (std::size_t i = 0; i < n; ++i) {
        double off = 0.0;
        for (std::ptrdiff_t o = -p; o <= p; ++o) {
            if (o == 0 || m.column(i, o) == n) continue;
            m.at(i, o) = dist(rng);
            off += std::abs(m.at(i, o));
        }
        m.at(i, 0) = (dist(rng) < 0 ? -1.0 : 1.0) * (off + 0.5 + std::abs(dist(rng)));
    }
    return m;
}

std::vector<double> random_vector(std::size_t n, std::mt19937& rng)
{
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = dist(rng);
    return v;
}

double rel_diff(const std::vector<double>& x, const std::vector<double>& y)
{
    return oracle::max_abs_diff(x, y) / std::max(1e-300, oracle::max_abs(y));
}

} // namespace

TEST_CASE("band matrices need at least five unknowns and matching stencils")
{
    CHECK_THROWS_AS(BandedLineMatrix(BandKind::Tri, 4), ShapeError);
    const std::vector<double> three{1.0, 2.0, 1.0};
    CHECK_THROWS_AS(BandedLineMatrix::toeplitz(BandKind::Penta, 8, three), ShapeError);
    const auto m = BandedLineMatrix::toeplitz(BandKind::Tri, 6, three);
    CHECK(m.at(0, -1) == 0.0);
    CHECK(m.at(5, 1) == 0.0);
    CHECK(m.at(3, -1) == 1.0);
    CHECK(m.column(0, -1) == 6);
    const auto c = BandedLineMatrix::toeplitz(BandKind::CyclicTri, 6, three);
    CHECK(c.column(0, -1) == 5);
    CHECK(c.at(0, -1) == 1.0);
}

TEST_CASE("identity factorization returns the right-hand side")
{
    for (BandKind kind : all_kinds) {
        BandedLineMatrix m(kind, 7);
        for (std::size_t i = 0; i < 7; ++i) m.set_identity_row(i);
        const auto f = factorize(m);
        const std::vector<double> rhs{1, -2, 3, -4, 5, -6, 7};
        CHECK(solve_line(f, rhs) == rhs);
    }
}

TEST_CASE("tridiagonal Dirichlet-type example recovers the solution")
{
    const std::vector<double> st{-1.0, 2.0, -1.0};
    const auto m = BandedLineMatrix::toeplitz(BandKind::Tri, 5, st);
    const std::vector<double> x{1, 2, 3, 4, 5};
    const auto rhs = m.multiply(x);
    const auto dense = oracle::gaussian_solve(to_dense(m), rhs);
    CHECK(rel_diff(dense, x) < 1e-13);
    CHECK(rel_diff(solve_line(factorize(m), rhs), x) < 1e-13);
}

TEST_CASE("cyclic circulant {1, 4, 1} with constant rhs gives ones")
{
    const std::vector<double> st{1.0, 4.0, 1.0};
    const auto f = factorize(BandedLineMatrix::toeplitz(BandKind::CyclicTri, 6, st));
    for (double v : solve_line(f, std::vector<double>(6, 6.0))) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("pentadiagonal five-point bands round-trip")
{
    std::mt19937 rng(41);
    // I - 0.1 * (five-point second difference) on open and cyclic lines.
    const std::vector<double> st{0.1 / 12, -1.6 / 12, 1.0 + 3.0 / 12, -1.6 / 12, 0.1 / 12};
    for (BandKind kind : {BandKind::Penta, BandKind::CyclicPenta}) {
        const auto m = BandedLineMatrix::toeplitz(kind, 20, st);
        const auto x = random_vector(20, rng);
        const auto rhs = m.multiply(x);
        CHECK(rel_diff(solve_line(factorize(m), rhs), x) < 1e-12);
        CHECK(rel_diff(oracle::gaussian_solve(to_dense(m), rhs), x) < 1e-12);
    }
}

TEST_CASE("random band systems agree with dense elimination")
{
    std::mt19937 rng(43);
    for (BandKind kind : all_kinds) {
        for (std::size_t n = 5; n <= 32; ++n) {
            const auto m = random_band(kind, n, rng);
            const auto x = random_vector(n, rng);
            const auto dense_m = to_dense(m);
            const auto rhs = dense_m * x;
            CHECK(rel_diff(m.multiply(x), rhs) < 1e-14);
            const auto expected = oracle::gaussian_solve(dense_m, rhs);
            const auto got = solve_line(factorize(m), rhs);
            CHECK(rel_diff(got, expected) < 1e-11);
            CHECK(rel_diff(got, x) < 1e-11);
        }
    }
}

TEST_CASE("singular and ill-formed systems are rejected")
{
    const std::vector<double> zero_diag{1.0, 0.0, 1.0};
    CHECK_THROWS_AS(factorize(BandedLineMatrix::toeplitz(BandKind::Tri, 6, zero_diag)),
                    SingularMatrixError);
    // Periodic Laplacian: singular through the cyclic correction.
    const std::vector<double> lap{1.0, -2.0, 1.0};
    CHECK_THROWS_AS(factorize(BandedLineMatrix::toeplitz(BandKind::CyclicTri, 8, lap)),
                    SingularMatrixError);

    BandedLineMatrix m = BandedLineMatrix::toeplitz(BandKind::Tri, 6, std::vector<double>{-1.0, 4.0, -1.0});
    m.at(3, 0) = 0.0;
    m.at(3, -1) = 0.0;
    try {
        (void)factorize(m);
        FAIL("expected SingularMatrixError");
    } catch (const SingularMatrixError& e) {
        CHECK(e.row() == 3);
    }

    BandedLineMatrix open(BandKind::Tri, 6);
    for (std::size_t i = 0; i < 6; ++i) open.set_identity_row(i);
    open.at(0, -1) = 1.0;
    CHECK_THROWS_AS(factorize(open), ShapeError);

    const auto f = factorize(BandedLineMatrix::toeplitz(BandKind::Tri, 6, std::vector<double>{-1.0, 4.0, -1.0}));
    CHECK_THROWS_AS(solve_line(f, std::vector<double>(5, 1.0)), ShapeError);
}

TEST_CASE("factorization reuse is bitwise reproducible")
{
    std::mt19937 rng(47);
    for (BandKind kind : all_kinds) {
        const auto f = factorize(random_band(kind, 17, rng));
        const auto rhs = random_vector(17, rng);
        const auto a = solve_line(f, rhs), b = solve_line(f, rhs);
        CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
    }
}

TEST_CASE("batch solves match per-line solves along both axes")
{
    std::mt19937 rng(53);
    const Grid g = build_grid(Domain{}, 9, 12, BoundaryKind::Periodic);
    ScalarField field(g);
    for (std::size_t k = 0; k < field.size(); ++k) field[k] = random_vector(1, rng)[0];

    for (BandKind kind : all_kinds) {
        for (Axis axis : {Axis::X, Axis::Y}) {
            const std::size_t n = g.n(axis), lines = axis == Axis::X ? g.n_y() : g.n_x();
            const auto f = factorize(random_band(kind, n, rng));
            const ScalarField batch = solve_batch(f, field, axis);
            // Lines visited in reverse order to show the result does not depend on it.
            for (std::size_t l = lines; l-- > 0;) {
                std::vector<double> line(n);
                for (std::size_t k = 0; k < n; ++k)
                    line[k] = axis == Axis::X ? field(k, l) : field(l, k);
                const auto x = solve_line(f, line);
                for (std::size_t k = 0; k < n; ++k) {
                    const double b = axis == Axis::X ? batch(k, l) : batch(l, k);
                    CHECK(std::abs(b - x[k]) <= 1e-14 * std::max(1.0, std::abs(x[k])));
                }
            }
        }
    }
}

TEST_CASE("batch solve examples")
{
    const Grid g = build_grid(Domain{}, 8, 6, BoundaryKind::Periodic);
    ScalarField field(g);
    for (std::size_t j = 0; j < g.n_y(); ++j)
        for (std::size_t i = 0; i < g.n_x(); ++i) field(i, j) = 1.0 + static_cast<double>(j);

    BandedLineMatrix id(BandKind::CyclicPenta, 8);
    for (std::size_t i = 0; i < 8; ++i) id.set_identity_row(i);
    const ScalarField same = solve_batch(factorize(id), field, Axis::X);
    for (std::size_t k = 0; k < field.size(); ++k) CHECK(same[k] == field[k]);

    // Row sum s = 5 and the field is constant along x.
    const std::vector<double> st{1.0, 3.0, 1.0};
    const ScalarField scaled =
        solve_batch(factorize(BandedLineMatrix::toeplitz(BandKind::CyclicTri, 8, st)), field, Axis::X);
    for (std::size_t k = 0; k < field.size(); ++k)
        CHECK(scaled[k] == doctest::Approx(field[k] / 5.0).epsilon(1e-14));

    CHECK_THROWS_AS(solve_batch(factorize(id), field, Axis::Y), ShapeError);
}

TEST_CASE("transpose swaps row and column layout")
{
    std::vector<double> src(6 * 11), dst(6 * 11);
    for (std::size_t k = 0; k < src.size(); ++k) src[k] = static_cast<double>(k);
    transpose(src.data(), dst.data(), 6, 11);
    for (std::size_t r = 0; r < 6; ++r)
        for (std::size_t c = 0; c < 11; ++c) CHECK(dst[c * 6 + r] == src[r * 11 + c]);
}
