#include "adi/problems.hpp"

#include "adi/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace adi {

namespace {

constexpr double pi = std::numbers::pi;

constexpr double paper_c1 = -2.0;
constexpr double paper_c2 = -3.0;
constexpr DiffusionTensor paper_diffusion{0.025, 0.05, 0.05, 0.1};

} // namespace

bool DiffusionTensor::is_nonnegative() const noexcept
{
    const double off = 0.5 * mixed();
    // Allow roundoff for the degenerate (singular) case.
    return d11 >= 0.0 && d22 >= 0.0 &&
           d11 * d22 - off * off >= -1e-14 * std::max(1.0, d11 * d22);
}

void ProblemSpec::validate() const
{
    if (!initial) throw ConfigError("problem '" + name + "' has no initial condition");
    if (bc == BoundaryKind::Dirichlet && !boundary) {
        throw ConfigError("problem '" + name + "' is Dirichlet but has no boundary function");
    }
    if (!diffusion.is_nonnegative()) {
        throw InvalidCoefficientsError("problem '" + name +
                                       "': diffusion tensor is not non-negative definite");
    }
}

ProblemSpec builtin_periodic()
{
    ProblemSpec p;
    p.name = "periodic-hw";
    p.domain = Domain{0.0, 1.0, 0.0, 1.0};
    p.c1 = paper_c1;
    p.c2 = paper_c2;
    p.diffusion = paper_diffusion;
    p.bc = BoundaryKind::Periodic;
    p.initial = [](double x, double y) {
        const double sx = std::sin(pi * x);
        const double cy = std::cos(pi * y);
        return std::exp(-4.0 * (sx * sx + cy * cy));
    };
    return p;
}

ProblemSpec builtin_dirichlet_manufactured()
{
    ProblemSpec p;
    p.name = "dirichlet-manufactured";
    p.domain = Domain{0.0, 1.0, 0.0, 1.0};
    p.c1 = paper_c1;
    p.c2 = paper_c2;
    p.diffusion = paper_diffusion;
    p.bc = BoundaryKind::Dirichlet;

    auto exact = [](double x, double y, double t) {
        return -std::sin(pi * x) * std::sin(pi * y) / (t + 1.0);
    };
    p.exact = exact;
    p.boundary = exact;
    p.initial = [exact](double x, double y) { return exact(x, y, 0.0); };

    // S = u_t - d11 u_xx - (d12 + d21) u_xy - d22 u_yy - c1 u_x - c2 u_y
    const double c1 = p.c1;
    const double c2 = p.c2;
    const DiffusionTensor d = p.diffusion;
    p.source = [c1, c2, d](double x, double y, double t) {
        const double w = 1.0 / (t + 1.0);
        const double sx = std::sin(pi * x), cx = std::cos(pi * x);
        const double sy = std::sin(pi * y), cy = std::cos(pi * y);
        const double u_t = sx * sy * w * w;
        const double u_x = -pi * cx * sy * w;
        const double u_y = -pi * sx * cy * w;
        const double u_xx = pi * pi * sx * sy * w;
        const double u_yy = u_xx;
        const double u_xy = -pi * pi * cx * cy * w;
        return u_t - d.d11 * u_xx - d.mixed() * u_xy - d.d22 * u_yy - c1 * u_x - c2 * u_y;
    };
    return p;
}

std::vector<std::string> problem_names() { return {"periodic-hw", "dirichlet-manufactured"}; }

ProblemSpec problem_by_name(const std::string& name)
{
    if (name == "periodic-hw") return builtin_periodic();
    if (name == "dirichlet-manufactured") return builtin_dirichlet_manufactured();
    std::ostringstream msg;
    msg << "unknown problem '" << name << "'; valid names:";
    for (const auto& n : problem_names()) msg << " " << n;
    throw ConfigError(msg.str());
}

} // namespace adi
