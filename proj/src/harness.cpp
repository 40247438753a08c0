#include "adi/harness.hpp"

#include "adi/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iostream>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

namespace adi {

PowerLawFit fit_rate(const std::vector<ResolutionError>& points)
{
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t used = 0, excluded = 0;
    for (const auto& p : points) {
        if (!(p.resolution > 0.0) || !std::isfinite(p.resolution)) {
            throw DomainError("fit_rate: resolutions must be positive and finite");
        }
        if (!(p.error >= 0.0) || !std::isfinite(p.error)) {
            throw DomainError("fit_rate: errors must be non-negative and finite");
        }
        if (p.error == 0.0) {
            ++excluded;
            continue;
        }
        const double x = std::log(p.resolution);
        const double y = std::log(p.error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++used;
    }
    if (excluded > 0) {
        std::cerr << "warning: fit_rate excluded " << excluded << " point(s) with zero error\n";
    }
    if (used < 2) throw DomainError("fit_rate: need at least two points with non-zero error");
    const double n = static_cast<double>(used);
    const double denom = n * sxx - sx * sx;
    if (!(std::abs(denom) > 1e-300)) throw DomainError("fit_rate: resolutions are all equal");
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    return {slope, std::exp(intercept), excluded};
}

std::vector<double> pairwise_rates(const std::vector<ResolutionError>& points)
{
    std::vector<double> out;
    for (std::size_t k = 0; k + 1 < points.size(); ++k) {
        const auto& a = points[k];
        const auto& b = points[k + 1];
        out.push_back(std::log(a.error / b.error) / std::log(a.resolution / b.resolution));
    }
    return out;
}

namespace {

bool divides(double interval, double step)
{
    const double r = interval / step;
    return std::abs(r - std::round(r)) <= 1e-9 * std::max(1.0, r);
}

unsigned thread_count(unsigned requested, std::size_t jobs)
{
    unsigned t = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(jobs, 1)));
}

// Runs independent jobs on a small worker pool; rethrows the first failure.
void run_jobs(std::vector<std::function<void()>>& jobs, unsigned threads)
{
    threads = thread_count(threads, jobs.size());
    if (threads <= 1) {
        for (auto& job : jobs) job();
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= jobs.size()) return;
            try {
                jobs[k]();
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

Integrator default_integrator(ExplicitPolicy policy)
{
    return [policy](const ProblemSpec& p, SchemeKind k, const SplittingConfig& c, const Grid& g) {
        IntegrateOptions opts;
        opts.explicit_policy = policy;
        return integrate(p, k, c, g, opts);
    };
}

void add_rates(ConvergenceReport& report, SchemeKind scheme,
               const std::vector<ConvergenceRow>& rows, bool by_dt)
{
    std::vector<ResolutionError> l2, linf;
    for (const auto& r : rows) {
        if (r.scheme != scheme) continue;
        const double res = by_dt ? r.dt : r.h;
        l2.push_back({res, r.l2_error});
        linf.push_back({res, r.linf_error});
    }
    report.rates.push_back({scheme, "l2", report.parameter, fit_rate(l2), pairwise_rates(l2)});
    report.rates.push_back({scheme, "linf", report.parameter, fit_rate(linf), pairwise_rates(linf)});
}

std::string format_number(double v)
{
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

} // namespace

const RateRow& ConvergenceReport::rate(SchemeKind scheme, const std::string& norm) const
{
    for (const auto& r : rates) {
        if (r.scheme == scheme && r.norm == norm) return r;
    }
    throw ConfigError("no " + norm + " rate for scheme " + to_string(scheme));
}

void TimeStudyConfig::resolve()
{
    if (dts.empty()) {
        for (int k = 30; k <= 90; k += 10) dts.push_back(tf / k);
    }
    if (dt_ref == 0.0) dt_ref = tf / 100.0;
    if (!(tf > 0.0)) throw ConfigError("time study: tf must be positive");
    if (schemes.empty()) throw ConfigError("time study: no schemes selected");
    if (dts.size() < 2) throw ConfigError("time study: need at least two time steps");
    const double smallest = *std::min_element(dts.begin(), dts.end());
    if (!(dt_ref > 0.0) || !(dt_ref < smallest)) {
        throw ConfigError("time study: reference dt must be positive and below every swept dt");
    }
    for (double dt : dts) {
        if (!(dt > 0.0) || !divides(tf, dt)) {
            throw ConfigError("time study: dt " + format_number(dt) + " does not divide tf");
        }
    }
    if (!divides(tf, dt_ref)) throw ConfigError("time study: reference dt does not divide tf");
    if (!(h > 0.0)) throw ConfigError("time study: h must be positive");
}

void SpaceStudyConfig::resolve() const
{
    if (!(mu > 0.0) || !std::isfinite(mu)) throw ConfigError("space study: mu must be positive");
    if (!(tf > 0.0)) throw ConfigError("space study: tf must be positive");
    if (schemes.empty()) throw ConfigError("space study: no schemes selected");
    if (hs.size() < 2) throw ConfigError("space study: need at least two mesh widths");
    auto check_h = [&](double h) {
        if (!(h > 0.0)) throw ConfigError("space study: mesh widths must be positive");
        if (!divides(tf, mu * h * h)) {
            throw ConfigError("space study: dt = mu h^2 = " + format_number(mu * h * h) +
                              " does not divide tf for h = " + format_number(h));
        }
    };
    for (double h : hs) check_h(h);
    if (!exact_error) {
        check_h(h_ref);
        for (double h : hs) {
            const double r = h / h_ref;
            if (!(h > h_ref) || std::abs(r - std::round(r)) > 1e-9 * r) {
                throw ConfigError("space study: h = " + format_number(h) +
                                  " is not an integer multiple of h_ref");
            }
        }
    }
}

ConvergenceReport time_convergence_study(TimeStudyConfig cfg, const Integrator& integrator)
{
    cfg.resolve();
    const ProblemSpec problem = problem_by_name(cfg.problem);
    const Grid grid = Grid::with_spacing(problem.domain, cfg.h, problem.bc);
    const Integrator run = integrator ? integrator : default_integrator(cfg.explicit_policy);

    auto config_for = [&](double dt) {
        SplittingConfig sc;
        sc.theta = cfg.theta;
        sc.sigma = cfg.sigma;
        sc.dt = dt;
        sc.t0 = 0.0;
        sc.tf = cfg.tf;
        return sc;
    };

    const std::size_t ns = cfg.schemes.size();
    const std::size_t nd = cfg.dts.size();
    std::vector<std::optional<ScalarField>> refs(ns), sols(ns * nd);
    std::vector<std::function<void()>> jobs;
    for (std::size_t s = 0; s < ns; ++s) {
        jobs.emplace_back([&, s] { refs[s] = run(problem, cfg.schemes[s], config_for(cfg.dt_ref), grid); });
        for (std::size_t d = 0; d < nd; ++d) {
            jobs.emplace_back([&, s, d] {
                sols[s * nd + d] = run(problem, cfg.schemes[s], config_for(cfg.dts[d]), grid);
            });
        }
    }
    run_jobs(jobs, cfg.threads);

    ConvergenceReport report;
    report.parameter = "dt";
    for (std::size_t s = 0; s < ns; ++s) {
        for (std::size_t d = 0; d < nd; ++d) {
            const auto norms = error_norms(*sols[s * nd + d], *refs[s]);
            const double dt = cfg.dts[d];
            report.rows.push_back({cfg.schemes[s], problem.bc, cfg.theta, dt / (cfg.h * cfg.h),
                                   cfg.h, dt, config_for(dt).steps(), norms.l2, norms.linf});
        }
        add_rates(report, cfg.schemes[s], report.rows, true);
    }
    return report;
}

ConvergenceReport space_convergence_study(const SpaceStudyConfig& cfg, const Integrator& integrator)
{
    cfg.resolve();
    const ProblemSpec problem = problem_by_name(cfg.problem);
    if (cfg.exact_error && !problem.exact) {
        throw ConfigError("problem '" + problem.name + "' has no exact solution for exact-error mode");
    }
    const Integrator run = integrator ? integrator : default_integrator(cfg.explicit_policy);

    auto config_for = [&](double h) {
        SplittingConfig sc;
        sc.theta = cfg.theta;
        sc.sigma = cfg.sigma;
        sc.dt = cfg.mu * h * h;
        sc.t0 = 0.0;
        sc.tf = cfg.tf;
        return sc;
    };

    const std::size_t ns = cfg.schemes.size();
    const std::size_t nh = cfg.hs.size();
    std::vector<std::optional<ScalarField>> refs(ns), sols(ns * nh);
    std::vector<std::function<void()>> jobs;
    const Grid ref_grid = Grid::with_spacing(problem.domain, cfg.h_ref, problem.bc);
    for (std::size_t s = 0; s < ns; ++s) {
        if (!cfg.exact_error) {
            jobs.emplace_back([&, s] { refs[s] = run(problem, cfg.schemes[s], config_for(cfg.h_ref), ref_grid); });
        }
        for (std::size_t k = 0; k < nh; ++k) {
            jobs.emplace_back([&, s, k] {
                const Grid g = Grid::with_spacing(problem.domain, cfg.hs[k], problem.bc);
                sols[s * nh + k] = run(problem, cfg.schemes[s], config_for(cfg.hs[k]), g);
            });
        }
    }
    // Longest jobs (the references) are queued first per scheme.
    run_jobs(jobs, cfg.threads);

    ConvergenceReport report;
    report.parameter = "h";
    for (std::size_t s = 0; s < ns; ++s) {
        for (std::size_t k = 0; k < nh; ++k) {
            const ScalarField& u = *sols[s * nh + k];
            const ScalarField target =
                cfg.exact_error
                    ? sample(u.grid(), [&](double x, double y) { return (*problem.exact)(x, y, cfg.tf); })
                    : restrict_to(*refs[s], u.grid());
            const auto norms = error_norms(u, target);
            const double h = cfg.hs[k];
            const auto sc = config_for(h);
            report.rows.push_back({cfg.schemes[s], problem.bc, cfg.theta, cfg.mu, h, sc.dt,
                                   sc.steps(), norms.l2, norms.linf});
        }
        add_rates(report, cfg.schemes[s], report.rows, false);
    }
    return report;
}

void write_report_csv(std::ostream& os, const ConvergenceReport& report)
{
    os << "scheme,bc,theta,mu,h,dt,steps,l2_error,linf_error\n";
    for (const auto& r : report.rows) {
        os << to_string(r.scheme) << ',' << to_string(r.bc) << ',' << format_number(r.theta) << ','
           << format_number(r.mu) << ',' << format_number(r.h) << ',' << format_number(r.dt) << ','
           << r.steps << ',' << format_number(r.l2_error) << ',' << format_number(r.linf_error)
           << '\n';
    }
}

void write_rates_csv(std::ostream& os, const ConvergenceReport& report)
{
    os << "scheme,norm,parameter,rate,constant\n";
    for (const auto& r : report.rates) {
        os << to_string(r.scheme) << ',' << r.norm << ',' << r.parameter << ','
           << format_number(r.fit.slope) << ',' << format_number(r.fit.constant) << '\n';
    }
}

void write_plot_data(std::ostream& os, const ConvergenceReport& report)
{
    os << "log10_resolution,log10_l2,log10_linf\n";
    std::optional<SchemeKind> current;
    for (const auto& r : report.rows) {
        if (!current || *current != r.scheme) {
            os << "# scheme " << to_string(r.scheme) << '\n';
            current = r.scheme;
        }
        const double res = report.parameter == "dt" ? r.dt : r.h;
        os << format_number(std::log10(res)) << ',' << format_number(std::log10(r.l2_error)) << ','
           << format_number(std::log10(r.linf_error)) << '\n';
    }
}

} // namespace adi
