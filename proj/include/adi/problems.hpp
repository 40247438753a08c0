#pragma once

#include "adi/grid.hpp"

#include <optional>
#include <string>
#include <vector>

namespace adi {

struct DiffusionTensor {
    double d11 = 0.0;
    double d12 = 0.0;
    double d21 = 0.0;
    double d22 = 0.0;

    /// Coefficient of u_xy in div(D grad u).
    double mixed() const noexcept { return d12 + d21; }

    /// Symmetric part is non-negative definite.
    bool is_nonnegative() const noexcept;
};

/// Constant-coefficient problem
///     u_t = div(D grad u) + c . grad u + S   on a rectangle.
struct ProblemSpec {
    std::string name;
    Domain domain;
    double c1 = 0.0;
    double c2 = 0.0;
    DiffusionTensor diffusion;
    BoundaryKind bc = BoundaryKind::Periodic;
    SpatialFunction initial;
    std::optional<SpaceTimeFunction> boundary; ///< required for Dirichlet
    std::optional<SpaceTimeFunction> source;
    std::optional<SpaceTimeFunction> exact;

    /// Throws ConfigError when the description is inconsistent.
    void validate() const;
};

/// Rotated anisotropic transport of e^{-4(sin^2(pi x) + cos^2(pi y))} on
/// the periodic unit square, c = (-2, -3), D = 0.025 [[1, 2], [2, 4]].
ProblemSpec builtin_periodic();

/// Same coefficients with Dirichlet data and a source chosen so that
/// u = -sin(pi x) sin(pi y) / (t + 1) is the exact solution.
ProblemSpec builtin_dirichlet_manufactured();

/// Registered names: "periodic-hw", "dirichlet-manufactured".
std::vector<std::string> problem_names();
ProblemSpec problem_by_name(const std::string& name);

} // namespace adi
