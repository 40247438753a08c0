#include "adi/schemes.hpp"

#include "adi/errors.hpp"
#include "adi/stencils.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace adi {

std::string to_string(SchemeKind kind)
{
    switch (kind) {
    case SchemeKind::CDS: return "cds";
    case SchemeKind::HO5: return "ho5";
    case SchemeKind::HOC: return "hoc";
    }
    return "?";
}

std::vector<std::string> scheme_names() { return {"cds", "ho5", "hoc"}; }

SchemeKind scheme_from_string(const std::string& name)
{
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "cds") return SchemeKind::CDS;
    if (lower == "ho5") return SchemeKind::HO5;
    if (lower == "hoc") return SchemeKind::HOC;
    throw ConfigError("unknown scheme '" + name + "'; valid names: cds ho5 hoc");
}

std::vector<double> central2_stencil(double c, double d, double h)
{
    const double diff = d / (h * h);
    const double conv = c / (2.0 * h);
    return {diff - conv, -2.0 * diff, diff + conv};
}

std::vector<double> five_point_stencil(double c, double d, double h)
{
    const double conv = c / (12.0 * h);
    const double diff = d / (12.0 * h * h);
    return {conv - diff, -8.0 * conv + 16.0 * diff, -30.0 * diff, 8.0 * conv + 16.0 * diff,
            -conv - diff};
}

// d delta^2 + c delta_0 + (h^2 c^2 / (12 d)) delta^2
std::vector<double> hoc_a_stencil(double c, double d, double h)
{
    return central2_stencil(c, d + h * h * c * c / (12.0 * d), h);
}

// I + (h^2 / 12) (c / d delta_0 + delta^2)
std::vector<double> hoc_b_stencil(double c, double d, double h)
{
    const double r = c * h / (2.0 * d);
    return {(1.0 - r) / 12.0, 10.0 / 12.0, (1.0 + r) / 12.0};
}

namespace {

BandKind band_kind(SchemeKind kind, BoundaryKind bc)
{
    const bool penta = kind == SchemeKind::HO5;
    if (bc == BoundaryKind::Periodic) return penta ? BandKind::CyclicPenta : BandKind::CyclicTri;
    return penta ? BandKind::Penta : BandKind::Tri;
}

std::vector<double> identity_stencil(std::size_t width)
{
    std::vector<double> s(width, 0.0);
    s[width / 2] = 1.0;
    return s;
}

AxisOperators build_axis(SchemeKind kind, const Grid& grid, Axis axis, double c, double d,
                         double theta_dt, ExplicitPolicy policy)
{
    const std::size_t n = grid.n(axis);
    const double h = grid.spacing(axis);
    const BandKind bk = band_kind(kind, grid.bc());

    std::vector<double> a_st, b_st;
    switch (kind) {
    case SchemeKind::CDS:
        a_st = central2_stencil(c, d, h);
        b_st = identity_stencil(3);
        break;
    case SchemeKind::HO5:
        a_st = five_point_stencil(c, d, h);
        b_st = identity_stencil(5);
        break;
    case SchemeKind::HOC:
        a_st = hoc_a_stencil(c, d, h);
        b_st = hoc_b_stencil(c, d, h);
        break;
    }
    std::vector<double> stage_st(a_st.size());
    for (std::size_t k = 0; k < a_st.size(); ++k) stage_st[k] = b_st[k] - theta_dt * a_st[k];

    auto a = BandedLineMatrix::toeplitz(bk, n, a_st);
    auto b = BandedLineMatrix::toeplitz(bk, n, b_st);
    auto stage = BandedLineMatrix::toeplitz(bk, n, stage_st);
    if (grid.bc() == BoundaryKind::Dirichlet) {
        stage.set_identity_row(0);
        stage.set_identity_row(n - 1);
    }
    auto stage_lu = factorize(stage);
    std::optional<LineFactorization> b_lu;
    if (policy == ExplicitPolicy::CompactInverse) b_lu = factorize(b);
    return AxisOperators{std::move(a), std::move(b), std::move(stage), std::move(stage_lu),
                         std::move(b_lu)};
}

// Weights of the explicit F_axis operator along one direction.
std::vector<double> explicit_weights(SchemeKind kind, double c, double d, double h)
{
    return kind == SchemeKind::CDS ? central2_stencil(c, d, h) : five_point_stencil(c, d, h);
}

template <typename Kernel>
ScalarField evaluate_on(const ExtendedField& e, Kernel&& kernel)
{
    ScalarField out(e.grid());
    const std::ptrdiff_t s = e.stride();
    for_each_evaluated_node(e.grid(), [&](std::size_t i, std::size_t j) {
        out(i, j) = kernel(e.node(i, j), s);
    });
    return out;
}

ExtendedField extended_for(const SchemeContext& ctx, const ScalarField& u)
{
    if (!(u.grid() == ctx.grid())) {
        throw IncompatibleFieldsError("field does not live on the scheme grid");
    }
    return ctx.kind() == SchemeKind::CDS ? pad_without_ghosts(u) : extend_ghosts(u);
}

// g = B^{-1} A u along `axis`.
ScalarField compact_inverse(const AxisOperators& ops, const ScalarField& u, Axis axis)
{
    const Grid& g = u.grid();
    ScalarField out(g);
    const auto nx = static_cast<std::ptrdiff_t>(g.n_x());
    const double* src = u.values().data();
    double* dst = out.values().data();
    if (axis == Axis::X) {
        for (std::size_t j = 0; j < g.n_y(); ++j) {
            const auto off = static_cast<std::ptrdiff_t>(j) * nx;
            ops.a.multiply(src + off, 1, dst + off, 1);
            ops.b_lu->solve_inplace(dst + off, 1);
        }
    } else {
        for (std::size_t i = 0; i < g.n_x(); ++i) {
            ops.a.multiply(src + i, nx, dst + i, nx);
            ops.b_lu->solve_inplace(dst + i, nx);
        }
    }
    return out;
}

ScalarField eval_axis(const SchemeContext& ctx, const ExtendedField& e, Axis axis)
{
    const bool x = axis == Axis::X;
    if (ctx.kind() == SchemeKind::HOC && ctx.explicit_policy() == ExplicitPolicy::CompactInverse) {
        return compact_inverse(ctx.axis(axis), e.interior(), axis);
    }
    const auto w = explicit_weights(ctx.kind(), x ? ctx.c1() : ctx.c2(),
                                    x ? ctx.diffusion().d11 : ctx.diffusion().d22,
                                    ctx.grid().spacing(axis));
    const auto half = static_cast<std::ptrdiff_t>(w.size() / 2);
    const std::ptrdiff_t a = x ? 1 : e.stride();
    return evaluate_on(e, [&](const double* p, std::ptrdiff_t) {
        double acc = 0.0;
        for (std::ptrdiff_t k = -half; k <= half; ++k) acc += w[static_cast<std::size_t>(k + half)] * p[k * a];
        return acc;
    });
}

ScalarField eval_mixed(const SchemeContext& ctx, const ExtendedField& e)
{
    const double m = ctx.diffusion().mixed();
    ScalarField out = ctx.kind() == SchemeKind::CDS ? dxy_central2(e.interior()) : dxy_five(e);
    for (double& v : out.values()) v *= m;
    return out;
}

} // namespace

SchemeContext::SchemeContext(SchemeKind kind, Grid grid, double c1, double c2, DiffusionTensor d,
                             double theta_dt, ExplicitPolicy policy, AxisOperators x,
                             AxisOperators y)
    : kind_(kind), grid_(std::move(grid)), c1_(c1), c2_(c2), d_(d), theta_dt_(theta_dt),
      policy_(policy), x_(std::move(x)), y_(std::move(y))
{
}

SchemeContext build_scheme_context(SchemeKind kind, const Grid& grid, double c1, double c2,
                                   const DiffusionTensor& d, double theta_dt, ExplicitPolicy policy)
{
    if (kind == SchemeKind::HO5 && grid.bc() == BoundaryKind::Dirichlet) {
        throw UnsupportedCombinationError(
            "HO5 with Dirichlet boundaries is not supported: the five-point implicit stages "
            "would need a boundary closure; use hoc or cds");
    }
    if (policy == ExplicitPolicy::CompactInverse &&
        (kind != SchemeKind::HOC || grid.bc() != BoundaryKind::Periodic)) {
        throw UnsupportedCombinationError(
            "the compact-inverse explicit policy applies to HOC on periodic grids only");
    }
    if (kind == SchemeKind::HOC && (!(d.d11 > 0.0) || !(d.d22 > 0.0))) {
        throw InvalidCoefficientsError("HOC requires d11 > 0 and d22 > 0");
    }
    if (!(theta_dt >= 0.0) || !std::isfinite(theta_dt)) {
        throw InvalidCoefficientsError("theta * dt must be finite and non-negative");
    }
    auto x = build_axis(kind, grid, Axis::X, c1, d.d11, theta_dt, policy);
    auto y = build_axis(kind, grid, Axis::Y, c2, d.d22, theta_dt, policy);
    return SchemeContext(kind, grid, c1, c2, d, theta_dt, policy, std::move(x), std::move(y));
}

SchemeContext build_scheme_context(SchemeKind kind, const Grid& grid, const ProblemSpec& problem,
                                   double theta_dt, ExplicitPolicy policy)
{
    return build_scheme_context(kind, grid, problem.c1, problem.c2, problem.diffusion, theta_dt,
                                policy);
}

ScalarField eval_F0(const SchemeContext& ctx, const ScalarField& u)
{
    return eval_mixed(ctx, extended_for(ctx, u));
}

ScalarField eval_F1_explicit(const SchemeContext& ctx, const ScalarField& u)
{
    return eval_axis(ctx, extended_for(ctx, u), Axis::X);
}

ScalarField eval_F2_explicit(const SchemeContext& ctx, const ScalarField& u)
{
    return eval_axis(ctx, extended_for(ctx, u), Axis::Y);
}

ScalarField eval_F(const SchemeContext& ctx, const ScalarField& u)
{
    const auto e = extended_for(ctx, u);
    if (ctx.kind() == SchemeKind::HOC && ctx.explicit_policy() == ExplicitPolicy::CompactInverse) {
        ScalarField f = eval_mixed(ctx, e);
        f.axpy(1.0, eval_axis(ctx, e, Axis::X));
        f.axpy(1.0, eval_axis(ctx, e, Axis::Y));
        return f;
    }

    const Grid& g = ctx.grid();
    const auto wx = explicit_weights(ctx.kind(), ctx.c1(), ctx.diffusion().d11, g.dx());
    const auto wy = explicit_weights(ctx.kind(), ctx.c2(), ctx.diffusion().d22, g.dy());
    const double m = ctx.diffusion().mixed();

    if (ctx.kind() == SchemeKind::CDS) {
        const double mixed = m / (4.0 * g.dx() * g.dy());
        return evaluate_on(e, [&](const double* p, std::ptrdiff_t s) {
            return wx[0] * p[-1] + (wx[1] + wy[1]) * p[0] + wx[2] * p[1] + wy[0] * p[-s] +
                   wy[2] * p[s] + mixed * (p[s + 1] - p[s - 1] - p[-s + 1] + p[-s - 1]);
        });
    }

    const double mixed = m / (144.0 * g.dx() * g.dy());
    return evaluate_on(e, [&](const double* p, std::ptrdiff_t s) {
        const double ring1 = p[s + 1] - p[s - 1] + p[-s - 1] - p[-s + 1];
        const double ring_mixed = -p[s + 2] - p[2 * s + 1] + p[2 * s - 1] + p[s - 2] - p[-s - 2] -
                                  p[-2 * s - 1] + p[-2 * s + 1] + p[-s + 2];
        const double ring2 = p[2 * s + 2] - p[2 * s - 2] + p[-2 * s - 2] - p[-2 * s + 2];
        const double xs = wx[0] * p[-2] + wx[1] * p[-1] + wx[3] * p[1] + wx[4] * p[2];
        const double ys = wy[0] * p[-2 * s] + wy[1] * p[-s] + wy[3] * p[s] + wy[4] * p[2 * s];
        return xs + ys + (wx[2] + wy[2]) * p[0] + mixed * (64.0 * ring1 + 8.0 * ring_mixed + ring2);
    });
}

ScalarField implicit_stage_solve(const SchemeContext& ctx, Axis axis, const ScalarField& y_in,
                                 const ScalarField& u_ref, const ScalarField* boundary)
{
    const Grid& g = ctx.grid();
    if (!(y_in.grid() == g) || !(u_ref.grid() == g)) {
        throw IncompatibleFieldsError("implicit_stage_solve: field grid differs from scheme grid");
    }
    const bool dirichlet = g.bc() == BoundaryKind::Dirichlet;
    if (dirichlet && (boundary == nullptr || !(boundary->grid() == g))) {
        throw BoundaryClosureError("implicit_stage_solve: Dirichlet grid needs boundary values");
    }

    const AxisOperators& ops = ctx.axis(axis);
    // Work in position-major layout: element (k along the axis, line l) at
    // [k * lines + l]. The field's own layout already is that for Y.
    const bool along_x = axis == Axis::X;
    const std::size_t n = g.n(axis);
    const std::size_t lines = along_x ? g.n_y() : g.n_x();

    auto to_lines = [&](const ScalarField& f) {
        std::vector<double> v(g.size());
        if (along_x) {
            transpose(f.values().data(), v.data(), g.n_y(), g.n_x());
        } else {
            std::copy(f.values().begin(), f.values().end(), v.begin());
        }
        return v;
    };

    const std::vector<double> y = to_lines(y_in);
    const std::vector<double> u = to_lines(u_ref);
    std::vector<double> rhs(g.size());
    if (ctx.kind() == SchemeKind::HOC) {
        ops.b.multiply_lines(y.data(), rhs.data(), lines, 1.0, false);
    } else {
        rhs = y;
    }
    ops.a.multiply_lines(u.data(), rhs.data(), lines, -ctx.theta_dt(), true);

    std::vector<double> bnd;
    if (dirichlet) {
        bnd = to_lines(*boundary);
        std::copy_n(bnd.begin(), lines, rhs.begin());
        std::copy_n(bnd.begin() + static_cast<std::ptrdiff_t>((n - 1) * lines), lines,
                    rhs.begin() + static_cast<std::ptrdiff_t>((n - 1) * lines));
    }
    ops.stage_lu.solve_lines(rhs.data(), lines);
    if (dirichlet) {
        // The first and last lines lie on the boundary parallel to the axis.
        for (std::size_t k = 0; k < n; ++k) {
            rhs[k * lines] = bnd[k * lines];
            rhs[k * lines + lines - 1] = bnd[k * lines + lines - 1];
        }
    }

    ScalarField out(g);
    if (along_x) {
        transpose(rhs.data(), out.values().data(), g.n_x(), g.n_y());
    } else {
        std::copy(rhs.begin(), rhs.end(), out.values().begin());
    }
    return out;
}

} // namespace adi
