#pragma once

#include "adi/grid.hpp"
#include "adi/hv_splitting.hpp"
#include "adi/problems.hpp"
#include "adi/schemes.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace adi {

struct ResolutionError {
    double resolution = 0.0;
    double error = 0.0;
};

struct PowerLawFit {
    double slope = 0.0;    ///< convergence order m in e = C r^m
    double constant = 0.0; ///< C
    std::size_t excluded = 0; ///< points dropped because their error was exactly zero
};

/// Least-squares line through (log r, log e).
/// Throws DomainError on non-positive resolutions or negative errors, or
/// when fewer than two points with non-zero error remain.
PowerLawFit fit_rate(const std::vector<ResolutionError>& points);

/// Rates between consecutive points, log(e_k/e_{k+1}) / log(r_k/r_{k+1}).
std::vector<double> pairwise_rates(const std::vector<ResolutionError>& points);

using Integrator = std::function<ScalarField(const ProblemSpec&, SchemeKind, const SplittingConfig&,
                                             const Grid&)>;

struct TimeStudyConfig {
    std::string problem = "periodic-hw";
    std::vector<SchemeKind> schemes{SchemeKind::CDS, SchemeKind::HO5, SchemeKind::HOC};
    double theta = 0.5;
    double sigma = 0.5;
    double h = 0.1;
    std::vector<double> dts;   ///< empty: tf / k for k = 30, 40, ..., 90
    double dt_ref = 0.0;       ///< 0: tf / 100
    double tf = 0.1;
    ExplicitPolicy explicit_policy = ExplicitPolicy::FivePoint;
    unsigned threads = 0;      ///< 0: hardware concurrency

    /// Fills defaults and checks the protocol invariants.
    void resolve();
};

struct SpaceStudyConfig {
    std::string problem = "periodic-hw";
    std::vector<SchemeKind> schemes{SchemeKind::CDS, SchemeKind::HO5, SchemeKind::HOC};
    double theta = 0.5;
    double sigma = 0.5;
    double mu = 0.4;
    std::vector<double> hs{0.1, 0.05, 0.025, 0.0125};
    double h_ref = 0.00625;
    double tf = 0.1;
    /// Measure against the closed-form solution instead of a fine-grid run.
    bool exact_error = false;
    ExplicitPolicy explicit_policy = ExplicitPolicy::FivePoint;
    unsigned threads = 0;

    void resolve() const;
};

struct ConvergenceRow {
    SchemeKind scheme = SchemeKind::HOC;
    BoundaryKind bc = BoundaryKind::Periodic;
    double theta = 0.5;
    double mu = 0.0;
    double h = 0.0;
    double dt = 0.0;
    std::size_t steps = 0;
    double l2_error = 0.0;
    double linf_error = 0.0;
};

struct RateRow {
    SchemeKind scheme = SchemeKind::HOC;
    std::string norm;      ///< "l2" or "linf"
    std::string parameter; ///< resolution variable: "dt" or "h"
    PowerLawFit fit;
    std::vector<double> pairwise;
};

struct ConvergenceReport {
    std::string parameter; ///< "dt" or "h"
    std::vector<ConvergenceRow> rows;
    std::vector<RateRow> rates;

    const RateRow& rate(SchemeKind scheme, const std::string& norm) const;
};

ConvergenceReport time_convergence_study(TimeStudyConfig cfg, const Integrator& integrator = {});
ConvergenceReport space_convergence_study(const SpaceStudyConfig& cfg,
                                          const Integrator& integrator = {});

/// `scheme,bc,theta,mu,h,dt,steps,l2_error,linf_error`
void write_report_csv(std::ostream& os, const ConvergenceReport& report);
/// `scheme,norm,parameter,rate,constant`
void write_rates_csv(std::ostream& os, const ConvergenceReport& report);
/// `log10_resolution,log10_l2,log10_linf`, one `# scheme` block per scheme.
void write_plot_data(std::ostream& os, const ConvergenceReport& report);

} // namespace adi
