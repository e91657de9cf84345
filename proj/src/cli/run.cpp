#include "rabi/cli/run.hpp"

#include "rabi/cli/parallel.hpp"
#include "rabi/ed.hpp"
#include "rabi/effective.hpp"
#include "rabi/quench.hpp"
#include "rabi/scaling.hpp"
#include "rabi/version.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <ostream>

namespace rabi::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::int64_t flag(bool b) { return b ? 1 : 0; }

std::vector<std::pair<double, Ratio>> coupling_ratio_grid(const RunConfig& cfg) {
    std::vector<std::pair<double, Ratio>> out;
    const auto ratios = cfg.ratio.ratios();
    for (double g : cfg.g->values()) {
        if (!(g >= 0.0)) throw UsageError("--g values must be non-negative");
        for (const auto& r : ratios) out.emplace_back(g, r);
    }
    return out;
}

std::vector<double> tauq_grid(const RunConfig& cfg) {
    auto values = cfg.tauq->values();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0)) throw UsageError("--tauq values must be positive");
        if (i > 0 && !(values[i] > values[i - 1])) throw UsageError("--tauq grid must be strictly ascending");
    }
    return values;
}

RunOutcome run_effective(const RunConfig& cfg) {
    const double w = cfg.omega0;
    RunOutcome res;
    res.table = ResultTable({{"g", ""},
                             {"ratio", ""},
                             {"phase", ""},
                             {"epsilon", "omega0"},
                             {"r_squeeze", ""},
                             {"alpha", ""},
                             {"alpha_rescaled", ""},
                             {"e_G", "omega0"},
                             {"d2_e_G", "omega0"},
                             {"n_c", ""},
                             {"dx", ""},
                             {"dp", ""},
                             {"error", ""}});
    for (const auto& [g, ratio] : coupling_ratio_grid(cfg)) {
        const std::string rtext = ratio.to_string();
        try {
            const auto o = effective::observables(ModelParams(1.0, ratio, g));
            const double d2 = o.phase == Phase::Critical ? kNaN : effective::d2_ground_energy(g);
            res.table.add_row({g, rtext, std::string(to_string(o.phase)), w * o.epsilon, o.r_squeeze, o.alpha,
                               flag(o.alpha_rescaled), w * o.e_G, w * d2, o.n_c, o.dx, o.dp, std::string()});
        } catch (const std::exception& e) {
            res.all_ok = false;
            res.table.add_row({g, rtext, std::string(), kNaN, kNaN, kNaN, std::int64_t{0}, kNaN, kNaN, kNaN, kNaN,
                               kNaN, std::string(e.what())});
        }
    }
    return res;
}

RunOutcome run_ed(const RunConfig& cfg) {
    const double w = cfg.omega0;
    const auto grid = coupling_ratio_grid(cfg);
    if (cfg.quartic) {
        for (const auto& [g, r] : grid) {
            if (g > 1.05) throw UsageError("--quartic needs g <= 1.05");
        }
    }
    if (cfg.max_cutoff < ed::FockBasis::kMinCutoff) throw UsageError("--max-cutoff must be at least 8");

    std::vector<std::optional<ed::EDResult>> results(grid.size());
    std::vector<std::string> errors(grid.size());
    ed::DiagonalizeOptions opts;
    opts.max_cutoff = cfg.max_cutoff;
    parallel_for(grid.size(), cfg.workers, [&](std::size_t i) {
        const auto& [g, ratio] = grid[i];
        try {
            auto r = cfg.quartic ? ed::diagonalize_quartic(g, ratio, cfg.levels, cfg.ed_tol, opts)
                                 : ed::diagonalize(ModelParams(1.0, ratio, g), cfg.levels, cfg.ed_tol, opts);
            if (!r.converged) errors[i] = "cutoff cap reached before convergence";
            results[i] = std::move(r);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });

    RunOutcome res;
    res.table = ResultTable({{"g", ""},
                             {"ratio", ""},
                             {"level", ""},
                             {"energy", "omega0"},
                             {"gap", "omega0"},
                             {"parity", ""},
                             {"n_phot", ""},
                             {"n_c", ""},
                             {"x_mean", ""},
                             {"dx", ""},
                             {"dp", ""},
                             {"doublet", ""},
                             {"cutoff", ""},
                             {"converged", ""},
                             {"error", ""}});
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& [g, ratio] = grid[i];
        const double r = ratio.value();
        if (!errors[i].empty()) res.all_ok = false;
        for (std::size_t k = 0; k < cfg.levels; ++k) {
            const auto lvl = static_cast<std::int64_t>(k);
            if (!results[i] || k >= results[i]->states.size()) {
                res.table.add_row({g, r, lvl, kNaN, kNaN, std::string(), kNaN, kNaN, kNaN, kNaN, kNaN,
                                   std::int64_t{0}, std::int64_t{0}, std::int64_t{0},
                                   errors[i].empty() ? std::string("level not computed") : errors[i]});
                res.all_ok = false;
                continue;
            }
            const auto& R = *results[i];
            const auto& s = R.states[k];
            res.table.add_row({g, r, lvl, w * s.energy, w * (s.energy - R.states[0].energy),
                               std::string(ed::to_string(s.block)), s.obs.n_phot, s.obs.n_phot / r, s.obs.x_mean,
                               s.obs.dx, s.obs.dp, flag(s.doublet), std::int64_t{R.cutoff_used},
                               flag(R.converged), errors[i]});
        }
    }
    return res;
}

quench::IntegratorOptions integrator_options(const RunConfig& cfg) {
    quench::IntegratorOptions o;
    o.rel_tol = cfg.rtol;
    o.abs_tol = cfg.atol;
    o.sample_stride = cfg.sample_stride;
    if (!(o.rel_tol >= 1e-13 && o.rel_tol <= 1e-6)) throw UsageError("--rtol must lie in [1e-13, 1e-6]");
    if (!(o.abs_tol > 0.0)) throw UsageError("--atol must be positive");
    return o;
}

std::vector<Column> sweep_columns() {
    return {{"tau_q", "1/omega0"},
            {"E_r", "omega0"},
            {"E_r_raw", "omega0"},
            {"invariant_drift", ""},
            {"underflow_flag", ""},
            {"uncorrected_baseline", ""},
            {"steps", ""},
            {"error", ""}};
}

std::vector<Cell> sweep_row(const quench::SweepPoint& p, double w) {
    if (!p.result) {
        return {p.tau_q / w, kNaN, kNaN, kNaN, std::int64_t{0}, std::int64_t{0}, std::int64_t{0}, p.error};
    }
    const auto& r = *p.result;
    return {p.tau_q / w,
            w * r.E_r.value,
            w * r.E_r.raw,
            r.invariant_drift,
            flag(r.E_r.underflow),
            flag(r.E_r.uncorrected_baseline),
            static_cast<std::int64_t>(r.steps),
            std::string()};
}

RunOutcome run_quench(const RunConfig& cfg) {
    const double w = cfg.omega0;
    const auto opts = integrator_options(cfg);
    const auto ratio = cfg.ratio.ratios().front();
    const double tau = tauq_grid(cfg).front();
    const auto p = quench::run_sweep_point(cfg.gf, ratio, tau, 0, opts);

    RunOutcome res;
    res.table = ResultTable(sweep_columns());
    res.table.add_row(sweep_row(p, w));
    res.all_ok = p.result.has_value();
    if (p.result && cfg.sample_stride > 0) {
        ResultTable traj({{"t", "1/omega0"},
                          {"g", ""},
                          {"u_re", ""},
                          {"u_im", ""},
                          {"v_re", ""},
                          {"v_im", ""},
                          {"energy", "omega0"}});
        const quench::QuenchProtocol protocol{cfg.gf, tau, ratio};
        for (const auto& s : p.result->samples) {
            traj.add_row({s.t / w, protocol.coupling(s.t), s.u.real(), s.u.imag(), s.v.real(), s.v.imag(),
                          w * s.energy});
        }
        traj.metadata.emplace_back("trajectory", "samples every " + std::to_string(cfg.sample_stride) + " steps");
        res.extra.push_back({".traj.csv", traj.to_csv()});
    }
    return res;
}

RunOutcome run_sweep(const RunConfig& cfg) {
    const double w = cfg.omega0;
    const auto opts = integrator_options(cfg);
    const auto ratio = cfg.ratio.ratios().front();
    const auto taus = tauq_grid(cfg);

    std::vector<quench::SweepPoint> points(taus.size());
    parallel_for(taus.size(), cfg.workers,
                 [&](std::size_t i) { points[i] = quench::run_sweep_point(cfg.gf, ratio, taus[i], i, opts); });

    RunOutcome res;
    res.table = ResultTable(sweep_columns());
    for (const auto& p : points) {
        if (!p.result) res.all_ok = false;
        res.table.add_row(sweep_row(p, w));
    }
    return res;
}

double field_number(const std::string& text) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size()) return kNaN;
    return v;
}

RunOutcome run_fit(const RunConfig& cfg) {
    const auto data = read_csv(cfg.input);
    const auto xi = data.column(cfg.x_col);
    const auto yi = data.column(cfg.y_col);
    std::optional<std::size_t> underflow;
    std::optional<std::size_t> error;
    for (std::size_t c = 0; c < data.header.size(); ++c) {
        if (data.header[c] == "underflow_flag") underflow = c;
        if (data.header[c] == "error") error = c;
    }

    std::vector<scaling::Point> points;
    for (const auto& row : data.rows) {
        if (underflow && row[*underflow] == "1") continue;
        if (error && !row[*error].empty()) continue;
        const double x = field_number(row[xi]);
        const double y = field_number(row[yi]);
        if (std::isnan(x) || std::isnan(y)) continue;
        if (x < cfg.min_x) continue;
        points.push_back({x, y});
    }

    RunOutcome res;
    res.table = ResultTable({{"x_center", ""},
                             {"mu", ""},
                             {"mu_stderr", ""},
                             {"log_amplitude", ""},
                             {"x_lo", ""},
                             {"x_hi", ""},
                             {"r_squared", ""},
                             {"n_points", ""}});
    const auto add = [&](double center, const scaling::PowerLawFit& f) {
        res.table.add_row({center, f.mu, f.mu_stderr, f.log_amplitude, f.x_lo, f.x_hi, f.r_squared,
                           static_cast<std::int64_t>(f.n_points)});
    };

    if (cfg.sliding > 0.0) {
        std::vector<scaling::Point> inside;
        for (const auto& p : points) {
            if (!cfg.window || scaling::Window{cfg.window->first, cfg.window->second}.contains(p.x)) {
                inside.push_back(p);
            }
        }
        for (const auto& le : scaling::sliding_window_exponents(inside, cfg.sliding, cfg.min_x)) {
            add(le.x_center, le.fit);
        }
    } else {
        const auto fit = cfg.window ? scaling::fit_loglog(points, {cfg.window->first, cfg.window->second})
                                    : scaling::fit_loglog(points);
        add(std::sqrt(fit.x_lo * fit.x_hi), fit);
    }
    return res;
}

RunOutcome run_kzm(const RunConfig& cfg) {
    const double w = cfg.omega0;
    RunOutcome res;
    res.table = ResultTable({{"tau_q", "1/omega0"},
                             {"g_hat_numeric", ""},
                             {"g_hat_asymptotic", ""},
                             {"abs_difference", ""},
                             {"impulsive_flag", ""},
                             {"error", ""}});
    for (double tau : tauq_grid(cfg)) {
        try {
            const auto f = scaling::freeze_out(tau, 1.0);
            res.table.add_row({tau / w, f.g_hat_numeric, f.g_hat_asymptotic,
                               std::abs(f.g_hat_numeric - f.g_hat_asymptotic), flag(f.impulsive_from_start),
                               std::string()});
        } catch (const std::exception& e) {
            res.all_ok = false;
            res.table.add_row({tau / w, kNaN, kNaN, kNaN, std::int64_t{0}, std::string(e.what())});
        }
    }
    return res;
}

std::string meta_text(const RunConfig& cfg, double wall_seconds, bool all_ok) {
    std::string out;
    out += "version = " + std::string(kVersion) + "\n";
    for (const auto& [k, v] : cfg.echo) out += k + " = " + v + "\n";
    out += "output = " + cfg.output + "\n";
    out += "workers = " + std::to_string(cfg.workers) + "\n";
    out += "stochastic = none (no seeds; reruns are bit-identical for the same build)\n";
    out += "all_points_ok = " + std::string(all_ok ? "true" : "false") + "\n";
    out += "wall_time_s = " + format_number(wall_seconds) + "\n";
    return out;
}

}  // namespace

RunOutcome execute(const RunConfig& cfg) {
    switch (cfg.command) {
    case Command::Effective: return run_effective(cfg);
    case Command::Ed: return run_ed(cfg);
    case Command::Quench: return run_quench(cfg);
    case Command::Sweep: return run_sweep(cfg);
    case Command::Fit: return run_fit(cfg);
    case Command::Kzm: return run_kzm(cfg);
    }
    throw UsageError("unknown command");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = parse_config(args);
        if (!cfg.output.empty()) check_writable(cfg.output);
        if (cfg.command == Command::Quench && cfg.sample_stride > 0 && cfg.output.empty()) {
            throw UsageError("--sample-stride needs --output (trajectory goes to <output>.traj.csv)");
        }
    } catch (const HelpRequested& h) {
        out << h.what();
        return kExitOk;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    const auto t0 = std::chrono::steady_clock::now();
    RunOutcome res;
    try {
        res = execute(cfg);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    auto& meta = res.table.metadata;
    meta.emplace_back("rabi", kVersion);
    for (const auto& [k, v] : cfg.echo) meta.emplace_back("config " + k, v);
    meta.emplace_back("wall_time_s", format_number(wall));

    try {
        if (cfg.output.empty()) {
            out << res.table.to_csv();
        } else {
            write_atomic(cfg.output, res.table.to_csv());
            write_atomic(cfg.output + ".meta", meta_text(cfg, wall, res.all_ok));
            for (const auto& f : res.extra) write_atomic(cfg.output + f.suffix, f.content);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    if (!res.all_ok) {
        err << "numerical failure: one or more grid points failed; see the error column\n";
        return kExitNumerical;
    }
    return kExitOk;
}

}  // namespace rabi::cli
