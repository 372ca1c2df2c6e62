#pragma once

// Command-line front end: yield, spectrum, sweep and verify. `run` takes
// the argument vector and two streams so it can be driven from tests;
// tools/bubblerad.cpp is a thin main around it. Needs CLI11.hpp on the
// include path.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "closed_form.hpp"
#include "concurrency.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "oracles.hpp"
#include "spectral.hpp"
#include "trajectory.hpp"
#include "units.hpp"

namespace bubblerad::cli {

enum exit_code : int { exit_ok = 0, exit_usage = 1, exit_data = 2, exit_numerical = 3 };

/// Bad flag values detected after CLI11 parsing (exit 1).
class usage_error : public error {
public:
    using error::error;
};

inline constexpr std::string_view supraluminal_warning =
    "warning: peak surface speed reaches c; this trajectory requires supraluminal velocities and the yield is unphysical";

inline constexpr std::string_view jobs_env = "BUBBLERAD_JOBS";

struct CommonOptions {
    std::string config;
    std::string out;
    std::optional<std::size_t> jobs;
    std::optional<double> rel_tol;
    bool quiet = false;
};

inline std::string fmt(const char* spec, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, x);
    return buf;
}

inline std::string sci(double x) { return fmt("%.6e", x); }

/// --jobs, else BUBBLERAD_JOBS, else the hardware concurrency.
inline std::size_t resolve_jobs(const std::optional<std::size_t>& flag) {
    if (flag) {
        if (*flag == 0)
            throw usage_error("--jobs must be at least 1");
        return *flag;
    }
    if (const char* env = std::getenv(std::string(jobs_env).c_str()); env != nullptr && *env != '\0') {
        std::size_t n = 0;
        if (!detail::parse_size(detail::trim(env), n) || n == 0)
            throw usage_error(std::string(jobs_env) + " must be a positive integer, got '" + env + "'");
        return n;
    }
    return default_jobs();
}

struct LoadedRun {
    RunConfig config;
    Trajectory trajectory;
    PhysicalConstants constants;
    QuadratureSettings settings;
};

inline LoadedRun load_run(const CommonOptions& common) {
    if (common.config.empty())
        throw usage_error("--config is required");
    const std::filesystem::path path(common.config);
    auto cfg = load_config(path);
    auto traj = make_trajectory(cfg, path.parent_path());
    auto settings = cfg.quadrature;
    if (common.rel_tol)
        settings.rel_tol = *common.rel_tol;
    settings.validate();
    return {cfg, std::move(traj), make_constants(cfg), settings};
}

inline void emit(const CommonOptions& common, std::string_view text, std::ostream& out) {
    if (common.out.empty())
        out << text;
    else
        write_text_file(common.out, text);
}

// ---------------------------------------------------------------- yield

inline int cmd_yield(const CommonOptions& common, std::ostream& out, std::ostream& err) {
    const auto run = load_run(common);
    const auto r = evaluate(run.trajectory, run.constants, run.settings);
    emit(common, result_json(r), out);

    if (r.supraluminal)
        err << supraluminal_warning << '\n';
    if (!common.quiet) {
        const auto bound = make_bound_report(r.photon_number, r.quadrature_error_estimate, r.v_max);
        err << "photon_number     " << sci(r.photon_number) << "  (+/- " << fmt("%.1e", r.quadrature_error_estimate) << ")\n"
            << "radiated_energy_J " << sci(r.radiated_energy) << '\n'
            << "v_max_m_s         " << sci(r.v_max) << '\n'
            << "beta              " << sci(r.beta_effective) << '\n'
            << "bound_value       " << sci(r.bound_value) << '\n'
            << "bound: N <= 0.1 (v_max/c)^4 " << (bound.satisfied ? "holds" : "violated")
            << " (N / (v_max/c)^4 = " << fmt("%.4g", bound.ratio) << ")\n";
        if (r.supraluminal)
            err << "verdict: not physical (v_max >= c)\n";
        else if (r.photon_number < 1.0)
            err << "verdict: subluminal trajectory, fewer than one photon per pulse\n";
        else
            err << "verdict: subluminal trajectory, at least one photon per pulse\n";
    }
    return exit_ok;
}

// ------------------------------------------------------------- spectrum

struct SpectrumOptions {
    std::optional<double> omega_max;
    std::size_t points = 201;
};

inline int cmd_spectrum(const CommonOptions& common, const SpectrumOptions& opt, std::ostream& out, std::ostream& err) {
    if (opt.points < 2)
        throw usage_error("--points must be at least 2");
    const auto run = load_run(common);
    const SpectralModel model(run.trajectory, run.settings);
    const double omega_max = opt.omega_max.value_or(20.0 / model.time_scale());
    if (!(omega_max > 0.0 && std::isfinite(omega_max)))
        throw usage_error("--omega-max must be positive");
    const auto s = spectrum_table(run.trajectory, omega_max, opt.points, run.settings, run.constants, resolve_jobs(common.jobs));
    emit(common, spectrum_csv(s), out);
    // The summary shares stdout only when the table goes to a file.
    std::ostream& summary = common.out.empty() ? err : out;
    if (!common.quiet) {
        summary << "peak_omega_rad_s " << sci(s.peak_omega) << '\n'
                << "mean_omega_rad_s " << sci(s.mean_omega) << '\n'
                << "grid_total       " << sci(s.total) << '\n';
    }
    return exit_ok;
}

// ---------------------------------------------------------------- sweep

enum class SweepParameter { beta, gamma_ns, rmin_over_r0, v_max_m_s };

inline std::string_view to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::beta: return "beta";
        case SweepParameter::gamma_ns: return "gamma_ns";
        case SweepParameter::rmin_over_r0: return "rmin_over_r0";
        case SweepParameter::v_max_m_s: return "v_max_m_s";
    }
    return "?";
}

struct SweepSpec {
    SweepParameter parameter = SweepParameter::beta;
    double from = 0.0;
    double to = 0.0;
    std::size_t points = 5;
    bool log_scale = false;

    void validate() const {
        if (!(std::isfinite(from) && std::isfinite(to) && from < to))
            throw usage_error("sweep needs finite --from < --to");
        if (points < 2)
            throw usage_error("sweep needs --points >= 2");
        if (log_scale && !(from > 0.0))
            throw usage_error("log-scale sweep needs positive bounds");
    }

    std::vector<double> grid() const {
        validate();
        std::vector<double> g(points);
        for (std::size_t i = 0; i < points; ++i) {
            const double f = static_cast<double>(i) / static_cast<double>(points - 1);
            g[i] = log_scale ? from * std::pow(to / from, f) : from + f * (to - from);
        }
        g.front() = from;
        g.back() = to;
        return g;
    }
};

/// The base pulse with one parameter replaced:
///  beta          radii rescaled at fixed rmin/r0, gamma and period
///  gamma_ns      gamma set, period scaled with it, radii kept
///  rmin_over_r0  ratio set at fixed beta, gamma and period
///  v_max_m_s     gamma and period scaled so the peak speed hits the value
inline LorentzianPulse swept_pulse(const LorentzianPulse& base, SweepParameter p, double value) {
    constexpr double c = PhysicalConstants::c;
    const double x = base.rmin() / base.r0();
    switch (p) {
        case SweepParameter::beta: {
            if (!(value > 0.0))
                throw invalid_argument("beta must be positive");
            const double r0 = value * c * base.gamma() / std::sqrt((1.0 - x) * (1.0 + x));
            return LorentzianPulse(r0, x * r0, base.gamma(), base.period());
        }
        case SweepParameter::gamma_ns: {
            const double g = value * 1e-9;
            if (!(g > 0.0))
                throw invalid_argument("gamma must be positive");
            return LorentzianPulse(base.r0(), base.rmin(), g, base.period() * (g / base.gamma()));
        }
        case SweepParameter::rmin_over_r0: {
            if (!(value > 0.0 && value < 1.0))
                throw invalid_argument("rmin_over_r0 must lie in (0, 1)");
            const double r0 = beta(base) * c * base.gamma() / std::sqrt((1.0 - value) * (1.0 + value));
            return LorentzianPulse(r0, value * r0, base.gamma(), base.period());
        }
        case SweepParameter::v_max_m_s: {
            if (!(value > 0.0))
                throw invalid_argument("v_max must be positive");
            const double s = max_surface_velocity(base) / value;
            return LorentzianPulse(base.r0(), base.rmin(), base.gamma() * s, base.period() * s);
        }
    }
    throw invalid_argument("unknown sweep parameter");
}

inline std::vector<SweepRow> run_sweep(const LorentzianPulse& base, const SweepSpec& spec, const PhysicalConstants& constants,
                                       const QuadratureSettings& settings, std::size_t jobs) {
    const auto grid = spec.grid();
    std::vector<SweepRow> rows(grid.size());
    parallel_for(grid.size(), jobs, [&](std::size_t i) {
        auto& row = rows[i];
        row.parameter = grid[i];
        try {
            const auto pulse = swept_pulse(base, spec.parameter, grid[i]);
            const auto y = evaluate(pulse, constants, settings);
            const auto b = make_bound_report(y.photon_number, y.quadrature_error_estimate, y.v_max);
            row.photon_number = y.photon_number;
            row.v_max = y.v_max;
            row.bound_value = y.bound_value;
            row.ratio = b.ratio;
            row.status = y.supraluminal ? "supraluminal" : "ok";
        } catch (const numerical_error&) {
            row.status = "numerical_error";
        } catch (const error&) {
            row.status = "invalid";
        }
    });
    return rows;
}

inline int cmd_sweep(const CommonOptions& common, const SweepSpec& spec, std::ostream& out, std::ostream& err) {
    spec.validate();
    const auto run = load_run(common);
    const auto* base = std::get_if<LorentzianPulse>(&run.trajectory);
    if (base == nullptr)
        throw invalid_argument("sweeps need a model = lorentzian base config");
    const auto rows = run_sweep(*base, spec, run.constants, run.settings, resolve_jobs(common.jobs));
    emit(common, sweep_csv(to_string(spec.parameter), rows), out);
    if (!common.quiet) {
        std::size_t failed = 0;
        for (const auto& r : rows) failed += (r.status == "ok") ? 0 : 1;
        err << rows.size() << " grid points, " << failed << " not ok\n";
    }
    return exit_ok;
}

// --------------------------------------------------------------- verify

struct VerifyRow {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyOptions {
    /// Replaces both the comparison tolerances and the quadrature rel_tol.
    std::optional<double> rel_tol;
    std::size_t jobs = 1;
};

inline double rel_diff(double a, double b) {
    if (b == 0.0)
        return a == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::abs(a / b - 1.0);
}

/// Bound grid used by verify: rmin / r0 and gamma over the model family
/// at r0 = 1 um, keeping only subluminal points.
struct BoundGridSummary {
    std::size_t points = 0;
    std::size_t violations = 0;
    std::size_t failures = 0;
    bool all_below_one = true;
    double sup_ratio = 0.0;
    double sup_at_x = 0.0;
    double smallest_violating_x = std::numeric_limits<double>::infinity();
};

inline BoundGridSummary bound_grid(std::size_t nx, std::size_t ngamma, const PhysicalConstants& constants,
                                   const QuadratureSettings& settings, std::size_t jobs) {
    struct Cell {
        double x = 0.0;
        bool used = false;
        bool failed = false;
        BoundReport report;
    };
    std::vector<Cell> cells(nx * ngamma);
    parallel_for(cells.size(), jobs, [&](std::size_t k) {
        const std::size_t i = k / ngamma;
        const std::size_t j = k % ngamma;
        const double x = 0.05 + 0.9 * static_cast<double>(i) / static_cast<double>(nx - 1);
        const double lg = -14.0 + 5.0 * static_cast<double>(j) / static_cast<double>(ngamma - 1);
        const double gamma = std::pow(10.0, lg);
        const LorentzianPulse p(1e-6, x * 1e-6, gamma, 100.0 * gamma);
        auto& cell = cells[k];
        cell.x = x;
        if (max_surface_velocity(p) >= PhysicalConstants::c)
            return;
        cell.used = true;
        try {
            cell.report = bound_check(p, constants, settings);
        } catch (const numerical_error&) {
            cell.failed = true;
        }
    });
    BoundGridSummary s;
    for (const auto& c : cells) {
        if (!c.used)
            continue;
        ++s.points;
        if (c.failed) {
            ++s.failures;
            continue;
        }
        if (!c.report.satisfied) {
            ++s.violations;
            s.smallest_violating_x = std::min(s.smallest_violating_x, c.x);
        }
        if (!(c.report.photon_number < 1.0))
            s.all_below_one = false;
        if (c.report.ratio > s.sup_ratio) {
            s.sup_ratio = c.report.ratio;
            s.sup_at_x = c.x;
        }
    }
    return s;
}

inline std::vector<VerifyRow> verify_rows(const VerifyOptions& opt) {
    const double tol = opt.rel_tol.value_or(1e-6);
    const double scaling_tol = opt.rel_tol.value_or(1e-8);
    QuadratureSettings q;
    if (opt.rel_tol)
        q.rel_tol = *opt.rel_tol;
    const PhysicalConstants k;
    const double alpha = k.alpha;
    std::vector<VerifyRow> rows;

    auto guarded = [&](const std::string& name, auto&& body) {
        try {
            rows.push_back(body());
        } catch (const std::exception& e) {
            rows.push_back({name, false, std::string("error: ") + e.what()});
        }
    };
    auto number = [&](const Trajectory& t) { return photon_number(t, q, k).value; };

    const LorentzianPulse ref(2e-6, 1e-6, 1e-9, 100e-9);
    const double b_ref = beta(ref);

    for (const double wg : {0.0, 1.0}) {
        const std::string name = wg == 0.0 ? "form factor |F(0)|" : "form factor |F(1/gamma)|";
        guarded(name, [&] {
            const double w = wg / ref.gamma();
            const double num = std::abs(form_factor(ref, w, q).value);
            const double cf = lorentzian_form_factor_closed(b_ref, ref.gamma(), w);
            const double d = rel_diff(num, cf);
            return VerifyRow{name, d <= tol, sci(num) + " s^3 vs closed form " + sci(cf) + ", rel " + fmt("%.1e", d)};
        });
    }

    guarded("closed form, 27-point grid", [&] {
        double worst = 0.0;
        for (const double b : {1e-6, 1e-4, 1e-2})
            for (const double x : {0.1, 0.5, 0.9})
                for (const double g : {1e-10, 1e-9, 1e-8}) {
                    const double r0 = b * PhysicalConstants::c * g / std::sqrt((1.0 - x) * (1.0 + x));
                    const LorentzianPulse p(r0, x * r0, g, 100.0 * g);
                    worst = std::max(worst, rel_diff(number(p), lorentzian_photon_number(alpha, beta(p))));
                }
        return VerifyRow{"closed form, 27-point grid", worst <= tol, "max rel deviation " + fmt("%.1e", worst)};
    });

    guarded("coefficient convention", [&] {
        const double b = 1e-2;
        const double r0 = b * PhysicalConstants::c * 1e-9 / std::sqrt(0.75);
        const LorentzianPulse p(r0, 0.5 * r0, 1e-9, 100e-9);
        const double n = number(p);
        const double adopted = lorentzian_photon_number(alpha, beta(p));
        const double quoted = lorentzian_photon_number(alpha, beta(p), quoted_lorentzian_coefficient);
        return VerifyRow{"coefficient convention", rel_diff(n, adopted) <= tol,
                         "numeric " + sci(n) + "; 15pi^2/8 gives " + sci(adopted) + ", 15pi^2/16 gives " + sci(quoted) +
                             " (numeric/15pi^2/16 = " + fmt("%.6f", n / quoted) + ")"};
    });

    guarded("radiated energy", [&] {
        const auto e = radiated_energy(ref, q, k).value;
        const double cf = lorentzian_radiated_energy(alpha, b_ref, ref.gamma());
        const double d = rel_diff(e, cf);
        return VerifyRow{"radiated energy", d <= tol, sci(e) + " J vs hbar (3/gamma) N " + sci(cf) + ", rel " + fmt("%.1e", d)};
    });

    guarded("time compression N ~ s^4", [&] {
        const double n0 = number(ref);
        double worst = 0.0;
        for (const double s : {2.0, 10.0}) {
            const LorentzianPulse p(ref.r0(), ref.rmin(), ref.gamma() / s, ref.period() / s);
            worst = std::max(worst, rel_diff(number(p), n0 * s * s * s * s));
        }
        return VerifyRow{"time compression N ~ s^4", worst <= scaling_tol, "s in {2, 10}, max rel " + fmt("%.1e", worst)};
    });

    guarded("dip amplitude N ~ lambda^2", [&] {
        const double r0 = 1e-6;
        const LorentzianPulse base(r0, 0.9 * r0, 1e-9, 100e-9);
        const double n0 = number(base);
        double worst = 0.0;
        for (const double l : {0.5, 3.0}) {
            const double rmin = std::sqrt(r0 * r0 - l * base.depth());
            worst = std::max(worst, rel_diff(number(LorentzianPulse(r0, rmin, 1e-9, 100e-9)), n0 * l * l));
        }
        return VerifyRow{"dip amplitude N ~ lambda^2", worst <= scaling_tol, "lambda in {0.5, 3}, max rel " + fmt("%.1e", worst)};
    });

    guarded("time translation", [&] {
        const LorentzianPulse shifted(ref.r0(), ref.rmin(), ref.gamma(), 3.7 * ref.period());
        const double d = rel_diff(number(shifted), number(ref));
        return VerifyRow{"time translation", d < 1e-10 || (opt.rel_tol && d <= *opt.rel_tol), "rel change " + fmt("%.1e", d)};
    });

    guarded("gamma independence", [&] {
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (const double g : {1e-11, 1e-10, 1e-9, 1e-8}) {
            const double r0 = b_ref * PhysicalConstants::c * g / std::sqrt(0.75);
            const double n = number(LorentzianPulse(r0, 0.5 * r0, g, 100.0 * g));
            lo = std::min(lo, n);
            hi = std::max(hi, n);
        }
        const double spread = hi / lo - 1.0;
        return VerifyRow{"gamma independence", spread <= tol, "gamma 0.01..10 ns at fixed beta, spread " + fmt("%.1e", spread)};
    });

    guarded("spectrum peak and mean", [&] {
        const auto s = spectrum_table(ref, 40.0 / ref.gamma(), 2001, q, k, opt.jobs);
        const auto m = peak_and_mean_omega(ref.gamma());
        const double dp = rel_diff(s.peak_omega, m.peak);
        const double dm = rel_diff(s.mean_omega, m.mean);
        const double t = std::max(1e-3, opt.rel_tol.value_or(0.0));
        return VerifyRow{"spectrum peak and mean", dp <= t && dm <= t,
                         "peak " + sci(s.peak_omega) + " (rel " + fmt("%.1e", dp) + "), mean " + sci(s.mean_omega) +
                             " (rel " + fmt("%.1e", dm) + ") rad/s"};
    });

    double n_1500 = 0.0;
    guarded("1500 m/s estimate", [&] {
        const auto p = lorentzian_with_peak_speed(1500.0, 0.5, 1e-9);
        n_1500 = number(p);
        const double via_beta = lorentzian_photon_number(alpha, 1500.0 / PhysicalConstants::c);
        const double via_bound = velocity_bound(1500.0);
        const bool ok = n_1500 >= 1e-25 && n_1500 <= 1e-22 && via_beta >= 1e-25 && via_beta <= 1e-22;
        return VerifyRow{"1500 m/s estimate", ok,
                         "v_max route " + sci(n_1500) + ", beta = v/c route " + sci(via_beta) + ", bound " + sci(via_bound)};
    });

    guarded("deficit factor", [&] {
        const double gap = observed_gap(n_1500, 1e5);
        const double gap_bound = observed_gap(velocity_bound(1500.0), 1e5);
        return VerifyRow{"deficit factor", gap >= 1e27 && gap_bound >= 1e27,
                         "1e5 observed: " + sci(gap) + " (numeric), " + sci(gap_bound) + " (bound)"};
    });

    const auto grid = bound_grid(20, 10, k, q, opt.jobs);
    {
        std::string detail = std::to_string(grid.points) + " subluminal points, sup N/(v/c)^4 = " + fmt("%.4g", grid.sup_ratio) +
                             " at rmin/r0 = " + fmt("%.3g", grid.sup_at_x);
        if (grid.violations > 0)
            detail += ", " + std::to_string(grid.violations) + " violate it (from rmin/r0 = " +
                      fmt("%.3g", grid.smallest_violating_x) + ")";
        if (grid.failures > 0)
            detail += ", " + std::to_string(grid.failures) + " did not converge";
        rows.push_back({"bound N <= 0.1 (v/c)^4", grid.violations == 0 && grid.failures == 0, detail});
    }
    rows.push_back({"N < 1 when v_max < c", grid.all_below_one && grid.failures == 0,
                    std::to_string(grid.points) + " subluminal grid points"});

    {
        const double t = to_si(characteristic_time({1.0, Unit::micrometre}, {1.0, Unit::km_per_s}));
        rows.push_back({"characteristic time 1 um / 1 km/s", t == 1e-9, fmt("%.15g", t) + " s"});
    }
    return rows;
}

inline int cmd_verify(const CommonOptions& common, std::ostream& out, std::ostream& err) {
    VerifyOptions opt;
    opt.rel_tol = common.rel_tol;
    opt.jobs = resolve_jobs(common.jobs);
    if (opt.rel_tol && !(*opt.rel_tol > 0.0))
        throw usage_error("--rel-tol must be positive");
    const auto rows = verify_rows(opt);
    std::string table;
    std::size_t failed = 0;
    for (const auto& r : rows) {
        char head[64];
        std::snprintf(head, sizeof head, "%-4s  %-34s  ", r.pass ? "PASS" : "FAIL", r.name.c_str());
        table += head + r.detail + "\n";
        failed += r.pass ? 0 : 1;
    }
    table += std::to_string(rows.size() - failed) + "/" + std::to_string(rows.size()) + " checks passed\n";
    emit(common, table, out);
    if (failed > 0 && !common.quiet)
        err << failed << " check(s) failed\n";
    return failed == 0 ? exit_ok : exit_numerical;
}

// ------------------------------------------------------------------ run

inline void add_common(CLI::App& sub, CommonOptions& c, bool needs_config) {
    auto* cfg = sub.add_option("--config", c.config, "Run configuration (key = value)");
    if (needs_config)
        cfg->required();
    sub.add_option("--out", c.out, "Write the table / JSON here instead of stdout");
    sub.add_option("--jobs", c.jobs, "Worker threads (default: $BUBBLERAD_JOBS or all cores)");
    sub.add_option("--rel-tol", c.rel_tol, "Relative quadrature tolerance");
    sub.add_flag("--quiet", c.quiet, "Suppress the stderr report");
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Photon yield of a collapsing bubble interface", "bubblerad"};
    app.require_subcommand(1);

    CommonOptions common;
    SpectrumOptions spectrum;
    SweepSpec sweep;
    std::string sweep_param;
    std::string sweep_scale = "linear";

    auto* y = app.add_subcommand("yield", "Photon number, energy, peak speed and bound for one configuration");
    add_common(*y, common, true);

    auto* s = app.add_subcommand("spectrum", "dN/dOmega table");
    add_common(*s, common, true);
    s->add_option("--omega-max", spectrum.omega_max, "Upper frequency in rad/s (default 20 / t_char)");
    s->add_option("--points", spectrum.points, "Grid points (>= 2)");

    auto* w = app.add_subcommand("sweep", "Evaluate a Lorentzian over a one-parameter grid");
    add_common(*w, common, true);
    w->add_option("--param", sweep_param, "beta | gamma_ns | rmin_over_r0 | v_max_m_s")
        ->required()
        ->check(CLI::IsMember({"beta", "gamma_ns", "rmin_over_r0", "v_max_m_s"}));
    w->add_option("--from", sweep.from, "First grid value")->required();
    w->add_option("--to", sweep.to, "Last grid value")->required();
    w->add_option("--points", sweep.points, "Grid points (>= 2)");
    w->add_option("--scale", sweep_scale, "linear | log")->check(CLI::IsMember({"linear", "log"}));

    auto* v = app.add_subcommand("verify", "Check the numerics against the closed forms");
    add_common(*v, common, false);

    std::vector<const char*> argv;
    argv.push_back("bubblerad");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*y)
            return cmd_yield(common, out, err);
        if (*s)
            return cmd_spectrum(common, spectrum, out, err);
        if (*w) {
            if (sweep_param == "beta")
                sweep.parameter = SweepParameter::beta;
            else if (sweep_param == "gamma_ns")
                sweep.parameter = SweepParameter::gamma_ns;
            else if (sweep_param == "rmin_over_r0")
                sweep.parameter = SweepParameter::rmin_over_r0;
            else
                sweep.parameter = SweepParameter::v_max_m_s;
            sweep.log_scale = sweep_scale == "log";
            return cmd_sweep(common, sweep, out, err);
        }
        return cmd_verify(common, out, err);
    } catch (const usage_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const numerical_error& e) {
        err << "numerical error: " << e.what() << '\n';
        return exit_numerical;
    } catch (const error& e) {
        err << "error: " << e.what() << '\n';
        return exit_data;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_data;
    }
}

}  // namespace bubblerad::cli
