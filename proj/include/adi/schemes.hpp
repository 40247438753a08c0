#pragma once

#include "adi/grid.hpp"
#include "adi/linsolve.hpp"
#include "adi/problems.hpp"

#include <optional>
#include <string>
#include <vector>

namespace adi {

enum class SchemeKind { CDS, HO5, HOC };

std::string to_string(SchemeKind kind);
/// Accepts "cds", "ho5", "hoc" in any case.
SchemeKind scheme_from_string(const std::string& name);
std::vector<std::string> scheme_names();

/// How the HOC scheme evaluates F1 and F2 in the explicit stages.
enum class ExplicitPolicy {
    FivePoint,      ///< fourth-order five-point formulas (default)
    CompactInverse, ///< g = B^{-1} A u, periodic grids only
};

/// Per-direction line operators of one scheme.
///
/// The implicit stage equation along an axis reads
///     (B - theta dt A) Y = B y_in - theta dt A u_ref,
/// with B = I for CDS and HO5 and A the discrete F1 (or F2) operator.
struct AxisOperators {
    BandedLineMatrix a;     ///< A (HOC) or F_h (CDS, HO5), Toeplitz rows
    BandedLineMatrix b;     ///< B (HOC) or identity
    BandedLineMatrix stage; ///< B - theta dt A, identity rows on Dirichlet ends
    LineFactorization stage_lu;
    std::optional<LineFactorization> b_lu; ///< CompactInverse policy only
};

/// Immutable, factorized discretization of one problem on one grid.
class SchemeContext {
public:
    SchemeKind kind() const noexcept { return kind_; }
    const Grid& grid() const noexcept { return grid_; }
    double c1() const noexcept { return c1_; }
    double c2() const noexcept { return c2_; }
    const DiffusionTensor& diffusion() const noexcept { return d_; }
    double theta_dt() const noexcept { return theta_dt_; }
    ExplicitPolicy explicit_policy() const noexcept { return policy_; }
    const AxisOperators& axis(Axis a) const noexcept { return a == Axis::X ? x_ : y_; }

private:
    friend SchemeContext build_scheme_context(SchemeKind, const Grid&, double, double,
                                              const DiffusionTensor&, double, ExplicitPolicy);
    SchemeContext(SchemeKind kind, Grid grid, double c1, double c2, DiffusionTensor d,
                  double theta_dt, ExplicitPolicy policy, AxisOperators x, AxisOperators y);

    SchemeKind kind_;
    Grid grid_;
    double c1_;
    double c2_;
    DiffusionTensor d_;
    double theta_dt_;
    ExplicitPolicy policy_;
    AxisOperators x_;
    AxisOperators y_;
};

/// Assembles and factorizes the stage matrices for the given coefficients.
/// Throws UnsupportedCombinationError for HO5 on Dirichlet grids and for
/// the CompactInverse policy outside periodic HOC; throws
/// InvalidCoefficientsError when HOC meets d11 <= 0 or d22 <= 0.
SchemeContext build_scheme_context(SchemeKind kind, const Grid& grid, double c1, double c2,
                                   const DiffusionTensor& d, double theta_dt,
                                   ExplicitPolicy policy = ExplicitPolicy::FivePoint);

SchemeContext build_scheme_context(SchemeKind kind, const Grid& grid, const ProblemSpec& problem,
                                   double theta_dt,
                                   ExplicitPolicy policy = ExplicitPolicy::FivePoint);

/// Tridiagonal or pentadiagonal Toeplitz stencils (lowest offset first).
std::vector<double> central2_stencil(double c, double d, double h);
std::vector<double> five_point_stencil(double c, double d, double h);
std::vector<double> hoc_a_stencil(double c, double d, double h);
std::vector<double> hoc_b_stencil(double c, double d, double h);

// Explicit operator evaluations. Dirichlet outputs are zero on boundary
// nodes, where the solution is prescribed rather than evolved.
ScalarField eval_F0(const SchemeContext& ctx, const ScalarField& u);
ScalarField eval_F1_explicit(const SchemeContext& ctx, const ScalarField& u);
ScalarField eval_F2_explicit(const SchemeContext& ctx, const ScalarField& u);
/// F0 + F1 + F2 in a single pass.
ScalarField eval_F(const SchemeContext& ctx, const ScalarField& u);

/// Solves Y = y_in + theta dt (F_axis(Y) - F_axis(u_ref)) in the scheme's
/// discrete sense. On Dirichlet grids `boundary` supplies the values Y
/// takes on boundary nodes (only its boundary entries are read).
ScalarField implicit_stage_solve(const SchemeContext& ctx, Axis axis, const ScalarField& y_in,
                                 const ScalarField& u_ref, const ScalarField* boundary = nullptr);

} // namespace adi
