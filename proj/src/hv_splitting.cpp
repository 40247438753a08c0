#include "adi/hv_splitting.hpp"

#include "adi/errors.hpp"

#include <cmath>
#include <sstream>

namespace adi {

void SplittingConfig::validate() const
{
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive and finite");
    if (!(theta > 0.0) || !std::isfinite(theta)) throw ConfigError("theta must be positive");
    if (!std::isfinite(sigma)) throw ConfigError("sigma must be finite");
    if (!std::isfinite(t0) || !std::isfinite(tf) || tf < t0) {
        throw ConfigError("final time must not precede the start time");
    }
    const double ratio = (tf - t0) / dt;
    const double whole = std::round(ratio);
    if (std::abs(ratio - whole) > 1e-9 * std::max(1.0, ratio)) {
        std::ostringstream msg;
        msg << "dt = " << dt << " does not divide [" << t0 << ", " << tf
            << "] into a whole number of steps (" << ratio << ")";
        throw ConfigError(msg.str());
    }
}

std::size_t SplittingConfig::steps() const
{
    validate();
    return static_cast<std::size_t>(std::round((tf - t0) / dt));
}

const char* StageTrace::stage_name(std::size_t k) noexcept
{
    static const char* names[stage_count] = {"Y0", "Y1", "Y2", "Yt0", "Yt1", "Yt2"};
    return k < stage_count ? names[k] : "?";
}

namespace {

ScalarField sample_at(const Grid& grid, const SpaceTimeFunction& f, double t)
{
    return sample(grid, [&](double x, double y) { return f(x, y, t); });
}

ScalarField sample_boundary(const Grid& grid, const SpaceTimeFunction& f, double t)
{
    ScalarField out(grid);
    const std::size_t nx = grid.n_x(), ny = grid.n_y();
    auto put = [&](std::size_t i, std::size_t j) {
        const double v = f(grid.x(i), grid.y(j), t);
        if (!std::isfinite(v)) throw SamplingError("non-finite boundary value");
        out(i, j) = v;
    };
    for (std::size_t i = 0; i < nx; ++i) {
        put(i, 0);
        put(i, ny - 1);
    }
    for (std::size_t j = 1; j + 1 < ny; ++j) {
        put(0, j);
        put(nx - 1, j);
    }
    return out;
}

void impose_boundary(ScalarField& u, const ScalarField& boundary)
{
    const Grid& g = u.grid();
    const std::size_t nx = g.n_x(), ny = g.n_y();
    for (std::size_t i = 0; i < nx; ++i) {
        u(i, 0) = boundary(i, 0);
        u(i, ny - 1) = boundary(i, ny - 1);
    }
    for (std::size_t j = 1; j + 1 < ny; ++j) {
        u(0, j) = boundary(0, j);
        u(nx - 1, j) = boundary(nx - 1, j);
    }
}

void check_finite(const ScalarField& u, double t)
{
    for (double v : u.values()) {
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "solution became non-finite at t = " << t;
            throw NumericalError(msg.str());
        }
    }
}

// Integrator state that carries the source sample at t_prev between steps.
class Stepper {
public:
    Stepper(const SchemeContext& ctx, const ProblemSpec& problem, const SplittingConfig& cfg)
        : ctx_(ctx), problem_(problem), cfg_(cfg)
    {
        if (ctx.grid().bc() == BoundaryKind::Dirichlet && !problem.boundary) {
            throw ConfigError("Dirichlet problem '" + problem.name + "' has no boundary data");
        }
    }

    ScalarField step(const ScalarField& u, double t_prev, double dt, StageTrace* trace)
    {
        const Grid& g = ctx_.grid();
        const double t_n = t_prev + dt;
        const bool dirichlet = g.bc() == BoundaryKind::Dirichlet;

        std::optional<ScalarField> s_prev, s_n;
        if (problem_.source) {
            if (cached_source_ &&
                std::abs(cached_time_ - t_prev) <= 1e-12 * std::max(1.0, std::abs(t_prev))) {
                s_prev = std::move(*cached_source_);
            } else {
                s_prev = sample_at(g, *problem_.source, t_prev);
            }
            s_n = sample_at(g, *problem_.source, t_n);
        }
        std::optional<ScalarField> bnd;
        if (dirichlet) bnd = sample_boundary(g, *problem_.boundary, t_n);
        const ScalarField* bp = bnd ? &*bnd : nullptr;

        // Stage 1: explicit Euler predictor. fu holds F(U) + S(t_prev).
        ScalarField fu = eval_F(ctx_, u);
        if (s_prev) fu.axpy(1.0, *s_prev);
        ScalarField y0 = u;
        y0.axpy(dt, fu);
        if (dirichlet) impose_boundary(y0, *bnd);

        // Stages 2-3: unidirectional implicit corrections.
        ScalarField y1 = implicit_stage_solve(ctx_, Axis::X, y0, u, bp);
        ScalarField y2 = implicit_stage_solve(ctx_, Axis::Y, y1, u, bp);

        // Stage 4: second explicit evaluation.
        ScalarField fy2 = eval_F(ctx_, y2);
        if (s_n) fy2.axpy(1.0, *s_n);
        ScalarField yt0 = y0;
        yt0.axpy(cfg_.sigma * dt, fy2);
        yt0.axpy(-cfg_.sigma * dt, fu);
        if (dirichlet) impose_boundary(yt0, *bnd);

        // Stages 5-6.
        ScalarField yt1 = implicit_stage_solve(ctx_, Axis::X, yt0, y2, bp);
        ScalarField yt2 = implicit_stage_solve(ctx_, Axis::Y, yt1, y2, bp);
        check_finite(yt2, t_n);

        if (s_n) {
            cached_source_ = std::move(*s_n);
            cached_time_ = t_n;
        }
        if (trace) {
            trace->t_prev = t_prev;
            trace->stages = {std::move(y0), std::move(y1), std::move(y2),
                             std::move(yt0), std::move(yt1), yt2};
        }
        return yt2;
    }

private:
    const SchemeContext& ctx_;
    const ProblemSpec& problem_;
    const SplittingConfig& cfg_;
    std::optional<ScalarField> cached_source_;
    double cached_time_ = 0.0;
};

} // namespace

ScalarField hv_step(const SchemeContext& ctx, const ProblemSpec& problem, const ScalarField& u,
                    double t_prev, double dt, const SplittingConfig& cfg, StageTrace* trace)
{
    if (!(u.grid() == ctx.grid())) {
        throw IncompatibleFieldsError("hv_step: solution grid differs from scheme grid");
    }
    if (ctx.grid().bc() != problem.bc) {
        throw UnsupportedCombinationError("hv_step: grid boundary kind does not match problem '" +
                                          problem.name + "'");
    }
    const double expected = cfg.theta * dt;
    if (std::abs(ctx.theta_dt() - expected) > 1e-12 * std::max(1.0, std::abs(expected))) {
        throw ConfigError("hv_step: scheme context was built for a different theta * dt");
    }
    Stepper stepper(ctx, problem, cfg);
    return stepper.step(u, t_prev, dt, trace);
}

ScalarField integrate(const ProblemSpec& problem, SchemeKind kind, const SplittingConfig& cfg,
                      const Grid& grid, const IntegrateOptions& options)
{
    problem.validate();
    if (grid.bc() != problem.bc) {
        throw UnsupportedCombinationError("grid boundary kind does not match problem '" +
                                          problem.name + "'");
    }
    const std::size_t steps = cfg.steps();
    ScalarField u = sample(grid, problem.initial);
    // Scheme/boundary compatibility is checked even for zero steps.
    const SchemeContext ctx =
        build_scheme_context(kind, grid, problem, cfg.theta * cfg.dt, options.explicit_policy);
    Stepper stepper(ctx, problem, cfg);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t_prev = cfg.t0 + static_cast<double>(k) * cfg.dt;
        u = stepper.step(u, t_prev, cfg.dt, k == 0 ? options.trace : nullptr);
    }
    return u;
}

} // namespace adi
