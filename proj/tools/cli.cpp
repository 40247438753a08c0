#include "cli.hpp"

#include "adi/errors.hpp"
#include "adi/grid.hpp"
#include "adi/harness.hpp"
#include "adi/hv_splitting.hpp"
#include "adi/problems.hpp"
#include "adi/schemes.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace adi::cli {

namespace {

struct RunConfig {
    std::string problem = "periodic-hw";
    std::vector<std::string> schemes;
    double theta = 0.5;
    double sigma = 0.5;
    double tf = 0.1;
    std::optional<double> mu;
    std::optional<double> h;
    std::vector<double> dts;
    std::vector<long> steps;
    std::optional<double> dt_ref;
    std::vector<double> h_list;
    std::optional<double> h_ref;
    bool exact_error = false;
    std::string hoc_explicit = "five-point";
    std::string out;
    std::string rates;
    std::string plot_data;
    std::string stage_trace;
    unsigned threads = 0;
};

// Files are staged in memory and written only once every computation has
// succeeded, so a failing run never leaves partial output behind.
struct PendingFile {
    std::string path;
    std::string contents;
};

void write_files(const std::vector<PendingFile>& files)
{
    for (const auto& f : files) {
        std::ofstream os(f.path, std::ios::binary | std::ios::trunc);
        if (!os) throw ConfigError("cannot open '" + f.path + "' for writing");
        os << f.contents;
        if (!os) throw ConfigError("failed writing '" + f.path + "'");
    }
}

std::string format_value(double v)
{
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

void require_positive(const char* flag, double v)
{
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ConfigError(std::string("--") + flag + " must be a positive finite number, got " +
                          format_value(v));
    }
}

ExplicitPolicy parse_policy(const std::string& name)
{
    if (name == "five-point") return ExplicitPolicy::FivePoint;
    if (name == "compact") return ExplicitPolicy::CompactInverse;
    throw ConfigError("unknown --hoc-explicit value '" + name + "'; valid values: five-point compact");
}

std::vector<SchemeKind> parse_schemes(const std::vector<std::string>& names, const ProblemSpec& p)
{
    std::vector<SchemeKind> kinds;
    if (names.empty()) {
        for (const auto& n : scheme_names()) {
            const SchemeKind k = scheme_from_string(n);
            if (k == SchemeKind::HO5 && p.bc == BoundaryKind::Dirichlet) continue;
            kinds.push_back(k);
        }
        return kinds;
    }
    for (const auto& n : names) kinds.push_back(scheme_from_string(n));
    return kinds;
}

// Checks the scheme, boundary and policy pairing up front so the message
// names the offending flags instead of surfacing from deep in a study.
void check_combination(const std::vector<SchemeKind>& kinds, const ProblemSpec& p,
                       ExplicitPolicy policy)
{
    for (SchemeKind k : kinds) {
        if (k == SchemeKind::HO5 && p.bc == BoundaryKind::Dirichlet) {
            throw UnsupportedCombinationError(
                "unsupported combination: scheme ho5 has no boundary closure for Dirichlet "
                "problem '" + p.name + "'; use cds or hoc");
        }
        if (policy == ExplicitPolicy::CompactInverse &&
            (k != SchemeKind::HOC || p.bc != BoundaryKind::Periodic)) {
            throw UnsupportedCombinationError(
                "unsupported combination: --hoc-explicit compact requires scheme hoc on a "
                "periodic problem");
        }
    }
}

std::string derived_path(const std::string& out, const std::string& suffix)
{
    const auto slash = out.find_last_of('/');
    const auto dot = out.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return out + suffix;
    return out.substr(0, dot) + suffix;
}

void print_rates(std::ostream& out, const ConvergenceReport& report)
{
    out << "rates (" << report.parameter << "):\n";
    for (const auto& r : report.rates) {
        out << "  " << std::left << std::setw(4) << to_string(r.scheme) << " " << std::setw(5)
            << r.norm << std::right << std::fixed << std::setprecision(4) << r.fit.slope;
        if (!r.pairwise.empty()) {
            out << "  pairwise";
            for (double q : r.pairwise) out << " " << q;
        }
        out << std::defaultfloat << "\n";
    }
}

std::vector<PendingFile> study_outputs(const RunConfig& rc, const ConvergenceReport& report)
{
    std::vector<PendingFile> files;
    if (!rc.out.empty()) {
        std::ostringstream os;
        write_report_csv(os, report);
        files.push_back({rc.out, os.str()});
    }
    std::string rates_path = rc.rates;
    if (rates_path.empty() && !rc.out.empty()) rates_path = derived_path(rc.out, ".rates.csv");
    if (!rates_path.empty()) {
        std::ostringstream os;
        write_rates_csv(os, report);
        files.push_back({rates_path, os.str()});
    }
    if (!rc.plot_data.empty()) {
        std::ostringstream os;
        write_plot_data(os, report);
        files.push_back({rc.plot_data, os.str()});
    }
    return files;
}

int run_list_problems(std::ostream& out)
{
    for (const auto& name : problem_names()) {
        const ProblemSpec p = problem_by_name(name);
        out << name << "  bc=" << to_string(p.bc) << "  c=(" << p.c1 << "," << p.c2 << ")  D=["
            << p.diffusion.d11 << "," << p.diffusion.d12 << ";" << p.diffusion.d21 << ","
            << p.diffusion.d22 << "]" << (p.exact ? "  exact" : "") << "\n";
    }
    return exit_ok;
}

int run_solve(const RunConfig& rc, std::ostream& out)
{
    const ProblemSpec problem = problem_by_name(rc.problem);
    if (rc.schemes.size() > 1) throw ConfigError("solve takes a single --scheme");
    const std::vector<SchemeKind> kinds =
        rc.schemes.empty() ? std::vector<SchemeKind>{SchemeKind::HOC}
                           : parse_schemes(rc.schemes, problem);
    const ExplicitPolicy policy = parse_policy(rc.hoc_explicit);
    check_combination(kinds, problem, policy);

    if (!rc.h) throw ConfigError("solve requires --h");
    require_positive("h", *rc.h);
    if (rc.mu && !rc.dts.empty()) throw ConfigError("give either --dt or --mu, not both");
    if (!rc.mu && rc.dts.empty()) throw ConfigError("solve requires --dt or --mu");
    if (rc.dts.size() > 1) throw ConfigError("solve takes a single --dt");
    if (!rc.steps.empty() || rc.dt_ref || !rc.h_list.empty() || rc.h_ref) {
        throw ConfigError("--steps, --dt-ref, --h-list and --h-ref apply to studies only");
    }
    if (rc.mu) require_positive("mu", *rc.mu);
    if (rc.out.empty()) throw ConfigError("solve requires --out");

    SplittingConfig cfg;
    cfg.theta = rc.theta;
    cfg.sigma = rc.sigma;
    cfg.tf = rc.tf;
    cfg.dt = rc.mu ? *rc.mu * *rc.h * *rc.h : rc.dts.front();
    require_positive("dt", cfg.dt);
    const std::size_t steps = cfg.steps();
    const Grid grid = Grid::with_spacing(problem.domain, *rc.h, problem.bc);

    StageTrace trace;
    IntegrateOptions options;
    options.explicit_policy = policy;
    if (!rc.stage_trace.empty()) options.trace = &trace;
    const ScalarField u = integrate(problem, kinds.front(), cfg, grid, options);

    std::vector<PendingFile> files;
    {
        const std::vector<std::string> meta{
            "problem " + problem.name,
            "scheme " + to_string(kinds.front()),
            "theta " + format_value(cfg.theta),
            "sigma " + format_value(cfg.sigma),
            "dt " + format_value(cfg.dt),
            "steps " + std::to_string(steps),
            "t " + format_value(cfg.tf),
        };
        std::ostringstream os;
        write_field_csv(os, u, meta);
        files.push_back({rc.out, os.str()});
    }
    if (!rc.stage_trace.empty()) {
        std::ostringstream os;
        os << "# stages of the first step from t=" << format_value(trace.t_prev) << "\nx,y";
        for (std::size_t k = 0; k < StageTrace::stage_count; ++k) os << "," << StageTrace::stage_name(k);
        os << "\n" << std::setprecision(17);
        for (std::size_t j = 0; j < grid.n_y(); ++j) {
            for (std::size_t i = 0; i < grid.n_x(); ++i) {
                os << grid.x(i) << "," << grid.y(j);
                for (const auto& s : trace.stages) os << "," << s(i, j);
                os << "\n";
            }
        }
        files.push_back({rc.stage_trace, os.str()});
    }
    write_files(files);

    out << "solved " << problem.name << " with " << to_string(kinds.front()) << " on "
        << grid.n_x() << "x" << grid.n_y() << ", dt=" << format_value(cfg.dt) << ", " << steps
        << " steps\n";
    if (problem.exact) {
        const auto& exact = *problem.exact;
        const double tf = cfg.tf;
        const ScalarField ref = sample(grid, [&](double x, double y) { return exact(x, y, tf); });
        const ErrorNorms e = error_norms(u, ref);
        out << "l2_error=" << format_value(e.l2) << " linf_error=" << format_value(e.linf) << "\n";
    }
    out << "wrote " << rc.out << "\n";
    return exit_ok;
}

void check_common_study(const RunConfig& rc)
{
    if (!rc.stage_trace.empty()) throw ConfigError("--stage-trace applies to solve only");
    if (rc.threads > 1024) throw ConfigError("--threads must be at most 1024");
}

int run_study_time(const RunConfig& rc, std::ostream& out)
{
    check_common_study(rc);
    const ProblemSpec problem = problem_by_name(rc.problem);
    TimeStudyConfig cfg;
    cfg.problem = rc.problem;
    cfg.schemes = parse_schemes(rc.schemes, problem);
    cfg.explicit_policy = parse_policy(rc.hoc_explicit);
    check_combination(cfg.schemes, problem, cfg.explicit_policy);
    if (rc.mu) throw ConfigError("--mu applies to solve and study-space only");
    if (!rc.h_list.empty() || rc.h_ref || rc.exact_error) {
        throw ConfigError("--h-list, --h-ref and --exact-error apply to study-space only");
    }
    if (!rc.dts.empty() && !rc.steps.empty()) throw ConfigError("give either --dt or --steps, not both");
    cfg.theta = rc.theta;
    cfg.sigma = rc.sigma;
    cfg.tf = rc.tf;
    cfg.threads = rc.threads;
    if (rc.h) {
        require_positive("h", *rc.h);
        cfg.h = *rc.h;
    }
    for (double dt : rc.dts) require_positive("dt", dt);
    cfg.dts = rc.dts;
    for (long s : rc.steps) {
        if (s <= 0) throw ConfigError("--steps entries must be positive");
        cfg.dts.push_back(cfg.tf / static_cast<double>(s));
    }
    if (rc.dt_ref) {
        require_positive("dt-ref", *rc.dt_ref);
        cfg.dt_ref = *rc.dt_ref;
    }
    cfg.resolve();
    (void)Grid::with_spacing(problem.domain, cfg.h, problem.bc);

    const ConvergenceReport report = time_convergence_study(cfg);
    write_files(study_outputs(rc, report));
    print_rates(out, report);
    return exit_ok;
}

int run_study_space(const RunConfig& rc, std::ostream& out)
{
    check_common_study(rc);
    const ProblemSpec problem = problem_by_name(rc.problem);
    SpaceStudyConfig cfg;
    cfg.problem = rc.problem;
    cfg.schemes = parse_schemes(rc.schemes, problem);
    cfg.explicit_policy = parse_policy(rc.hoc_explicit);
    check_combination(cfg.schemes, problem, cfg.explicit_policy);
    if (!rc.dts.empty() || !rc.steps.empty() || rc.dt_ref) {
        throw ConfigError("study-space sets dt = mu h^2; --dt, --steps and --dt-ref do not apply");
    }
    if (rc.h) throw ConfigError("study-space takes --h-list, not --h");
    cfg.theta = rc.theta;
    cfg.sigma = rc.sigma;
    cfg.tf = rc.tf;
    cfg.threads = rc.threads;
    cfg.exact_error = rc.exact_error;
    if (rc.mu) cfg.mu = *rc.mu;
    if (!rc.h_list.empty()) cfg.hs = rc.h_list;
    if (rc.h_ref) cfg.h_ref = *rc.h_ref;
    for (double h : cfg.hs) require_positive("h-list", h);
    require_positive("mu", cfg.mu);
    if (cfg.exact_error && !problem.exact) {
        throw ConfigError("--exact-error needs a problem with a closed-form solution");
    }
    cfg.resolve();
    for (double h : cfg.hs) (void)Grid::with_spacing(problem.domain, h, problem.bc);
    if (!cfg.exact_error) (void)Grid::with_spacing(problem.domain, cfg.h_ref, problem.bc);

    const ConvergenceReport report = space_convergence_study(cfg);
    write_files(study_outputs(rc, report));
    print_rates(out, report);
    return exit_ok;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    RunConfig rc;
    CLI::App app{"Convection-diffusion solver with mixed derivatives (ADI splitting)", "adi_cli"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_config("--config", "", "Read options from a key = value file");
    app.require_subcommand(1);

    app.add_option("--problem", rc.problem, "Built-in problem name (see list-problems)");
    app.add_option("--scheme", rc.schemes, "Spatial scheme(s): cds, ho5, hoc")->delimiter(',');
    app.add_option("--theta", rc.theta, "Implicitness parameter theta");
    app.add_option("--sigma", rc.sigma, "Correction weight sigma");
    app.add_option("--tf", rc.tf, "Final time");
    app.add_option("--mu", rc.mu, "Parabolic mesh ratio, dt = mu h^2");
    app.add_option("--h", rc.h, "Mesh width");
    app.add_option("--dt", rc.dts, "Time step (solve) or comma-separated list (study-time)")
        ->delimiter(',');
    app.add_option("--steps", rc.steps, "study-time: comma-separated step counts, dt = tf/steps")
        ->delimiter(',');
    app.add_option("--dt-ref", rc.dt_ref, "study-time: reference time step");
    app.add_option("--h-list", rc.h_list, "study-space: comma-separated mesh widths")->delimiter(',');
    app.add_option("--h-ref", rc.h_ref, "study-space: reference mesh width");
    app.add_flag("--exact-error", rc.exact_error, "study-space: measure against the exact solution");
    app.add_option("--hoc-explicit", rc.hoc_explicit, "HOC explicit evaluation: five-point or compact");
    app.add_option("--out", rc.out, "Output CSV (field for solve, report for studies)");
    app.add_option("--rates", rc.rates, "Rates CSV (default: derived from --out)");
    app.add_option("--plot-data", rc.plot_data, "Log-log plot data file");
    app.add_option("--stage-trace", rc.stage_trace, "solve: write the stages of the first step");
    app.add_option("--threads", rc.threads, "Worker threads for studies (0: all cores)");

    auto* solve = app.add_subcommand("solve", "Integrate one problem and write the final field");
    auto* study_time = app.add_subcommand("study-time", "Temporal convergence study");
    auto* study_space = app.add_subcommand("study-space", "Spatial convergence study");
    auto* list = app.add_subcommand("list-problems", "List built-in problems");
    for (auto* sub : {solve, study_time, study_space, list}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return exit_usage;
    }

    try {
        require_positive("theta", rc.theta);
        require_positive("sigma", rc.sigma);
        require_positive("tf", rc.tf);
        if (*list) return run_list_problems(out);
        if (*solve) return run_solve(rc, out);
        if (*study_time) return run_study_time(rc, out);
        return run_study_space(rc, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
}

} // namespace adi::cli
