#pragma once

#include "adi/grid.hpp"
#include "adi/problems.hpp"
#include "adi/schemes.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace adi {

struct SplittingConfig {
    double theta = 0.5;
    double sigma = 0.5;
    double dt = 0.0;
    double t0 = 0.0;
    double tf = 0.1;

    /// Throws ConfigError unless dt > 0, theta > 0, tf >= t0 and dt
    /// divides tf - t0 into a whole number of steps.
    void validate() const;

    /// Number of steps from t0 to tf (validates first).
    std::size_t steps() const;
};

/// Stage values Y0, Y1, Y2, Yt0, Yt1, Yt2 of one step.
struct StageTrace {
    static constexpr std::size_t stage_count = 6;
    static const char* stage_name(std::size_t k) noexcept;

    double t_prev = 0.0;
    std::vector<ScalarField> stages;
};

/// One step of the six-stage splitting
///     Y0  = U + dt (F(U) + S(t_prev))
///     Y1  = Y0 + theta dt (F1(Y1) - F1(U))
///     Y2  = Y1 + theta dt (F2(Y2) - F2(U))
///     Yt0 = Y0 + sigma dt (F(Y2) + S(t_n) - F(U) - S(t_prev))
///     Yt1 = Yt0 + theta dt (F1(Yt1) - F1(Y2))
///     Yt2 = Yt1 + theta dt (F2(Yt2) - F2(Y2)),   U^n = Yt2,
/// where F0 is explicit and F1, F2 are solved line by line. On Dirichlet
/// grids every stage takes the boundary data at t_n = t_prev + dt.
ScalarField hv_step(const SchemeContext& ctx, const ProblemSpec& problem, const ScalarField& u,
                    double t_prev, double dt, const SplittingConfig& cfg,
                    StageTrace* trace = nullptr);

struct IntegrateOptions {
    ExplicitPolicy explicit_policy = ExplicitPolicy::FivePoint;
    /// When set, receives the stages of the first step.
    StageTrace* trace = nullptr;
};

/// Samples the initial condition at t0, factorizes once, and applies
/// hv_step up to tf.
ScalarField integrate(const ProblemSpec& problem, SchemeKind kind, const SplittingConfig& cfg,
                      const Grid& grid, const IntegrateOptions& options = {});

} // namespace adi
