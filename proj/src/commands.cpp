// commands.cpp — subcommand drivers: config in, tables and reports out

#include "dissfield/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "dissfield/io.hpp"

namespace dissfield {

namespace {

using io::Json;

class Emitter {
public:
    Emitter(std::filesystem::path dir, OutputFormat fmt, RunReport& rep) : dir_(std::move(dir)), fmt_(fmt), rep_(rep) {}

    // Writes <stem>.csv or <stem>.json depending on the configured format.
    void table(const std::string& stem, io::Table t, std::vector<std::pair<std::string, std::string>> extra = {}) {
        std::vector<std::pair<std::string, std::string>> meta{
            {"tool", std::string("dissfield ") + rep_.tool_version},
            {"command", rep_.command},
            {"config_digest", rep_.config_digest},
        };
        meta.insert(meta.end(), extra.begin(), extra.end());
        t.metadata = std::move(meta);
        if (fmt_ == OutputFormat::csv)
            file(stem + ".csv", io::format_csv(t));
        else
            file(stem + ".json", io::dump(io::table_to_json(t)));
    }

    void json(const std::string& name, const Json& j) { file(name, io::dump(j)); }

    void file(const std::string& name, const std::string& text) {
        io::write_text(dir_ / name, text);
        rep_.outputs.push_back({name, io::sha256_file(dir_ / name)});
    }

private:
    std::filesystem::path dir_;
    OutputFormat fmt_;
    RunReport& rep_;
};

Json header(const RunReport& rep) {
    return Json{{"command", rep.command}, {"tool_version", rep.tool_version}, {"config_digest", rep.config_digest}};
}

Json optional_number(const std::optional<double>& x) { return x ? io::number(*x) : Json(nullptr); }

RunReport start(const std::string& command, const RunConfig& cfg) {
    RunReport rep;
    rep.command = command;
    rep.config_digest = cfg.digest();
    return rep;
}

std::filesystem::path output_dir(const RunConfig& cfg, const CommandOptions& opts) {
    return opts.out ? *opts.out : build_output(cfg).directory;
}

int threads_for(const RunConfig& cfg, const CommandOptions& opts) {
    if (opts.threads) {
        if (*opts.threads < 1) throw Error(ErrorKind::ConfigInvalid, "--threads: must be >= 1");
        return *opts.threads;
    }
    return build_threads(cfg);
}

std::string units(const ResponseEvaluator& ev, double kB) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "hbar=%.17g kB=%.17g", ev.hbar(), kB);
    return buf;
}

std::string fmt(double x) { return io::format_number(x); }

} // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"kk-check", "greens", "thermo", "correlate", "langevin"};
    return names;
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::ConfigInvalid:
    case ErrorKind::InvalidInput:
        return kExitConfig;
    default:
        return kExitNumerical;
    }
}

RunReport cmd_kk_check(const RunConfig& cfg, const CommandOptions& opts) {
    RunReport rep = start("kk-check", cfg);
    const auto model = build_model(cfg);
    const auto kk = build_kk(cfg);
    const auto out = build_output(cfg);
    Emitter em(output_dir(cfg, opts), out.format, rep);

    const KKReport r = kk_report(model, kk.omega);
    io::Table t{{}, {"omega", "re_closed", "re_kk", "abs_dev", "rel_dev"}, {}};
    for (const auto& row : r.rows) t.rows.push_back({row.omega, row.re_closed, row.re_kk, row.abs_dev, row.rel_dev});
    em.table("kk", t, {{"model", model.name()}, {"convention", KKReport::convention}});

    rep.warnings = r.warnings;
    const bool pass = r.max_rel_dev <= kk.threshold;
    Json j = header(rep);
    j["model"] = model.name();
    j["points"] = r.rows.size();
    j["max_abs_dev"] = io::number(r.max_abs_dev);
    j["max_rel_dev"] = io::number(r.max_rel_dev);
    j["threshold"] = kk.threshold;
    j["pass"] = pass;
    j["convention"] = KKReport::convention;
    j["warnings"] = rep.warnings;
    em.json("kk_summary.json", j);
    if (!pass) {
        rep.exit_code = kExitThreshold;
        rep.message = "max relative deviation " + fmt(r.max_rel_dev) + " exceeds threshold " + fmt(kk.threshold);
    }
    return rep;
}

RunReport cmd_greens(const RunConfig& cfg, const CommandOptions& opts) {
    RunReport rep = start("greens", cfg);
    const auto ev = build_evaluator(cfg);
    const auto gs = build_greens(cfg);
    const auto out = build_output(cfg);
    Emitter em(output_dir(cfg, opts), out.format, rep);

    io::Table t{{}, {"omega", "re_G", "im_G"}, {}};
    for (double w : gs.omega) {
        std::complex<double> g;
        try {
            g = ev.greens(w);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::PoleHit) throw;
            g = ev.greens_regularized(w);
            rep.warnings.push_back("PoleHit at omega = " + fmt(w) + ": regularized value reported");
        }
        t.rows.push_back({w, g.real(), g.imag()});
    }
    em.table("greens", t,
             {{"model", ev.model().name()}, {"omega_k", fmt(ev.mode().omega_k)}, {"units", units(ev, 1.0)}});

    const auto sr = commutator_sum_rule(ev);
    const bool pass = std::abs(sr.value - 1.0) <= gs.sum_rule_tolerance;
    Json res = Json::array();
    for (double r : ev.resonances()) res.push_back(r);
    Json j = header(rep);
    j["model"] = ev.model().name();
    j["omega_k"] = ev.mode().omega_k;
    j["static_frequency"] = io::number(ev.static_frequency());
    j["resonances"] = res;
    j["sum_rule"] = io::number(sr.value);
    j["sum_rule_error"] = io::number(sr.error);
    j["sum_rule_tolerance"] = gs.sum_rule_tolerance;
    j["pass"] = pass;
    j["warnings"] = rep.warnings;
    em.json("greens_summary.json", j);
    if (!pass) {
        rep.exit_code = kExitThreshold;
        rep.message = "sum rule " + fmt(sr.value) + " outside 1 +- " + fmt(gs.sum_rule_tolerance);
    }
    return rep;
}

RunReport cmd_thermo(const RunConfig& cfg, const CommandOptions& opts) {
    RunReport rep = start("thermo", cfg);
    const auto ev = build_evaluator(cfg);
    const auto consts = build_constants(cfg);
    const auto ts = build_thermo(cfg);
    const auto out = build_output(cfg);
    const int threads = threads_for(cfg, opts);
    Emitter em(output_dir(cfg, opts), out.format, rep);

    const auto reports = thermo_sweep(ev, ts.T, consts.kB, ts.integration, threads);
    io::Table t{{},
                {"T", "U_star", "F_closed", "F_integrated", "S_closed", "S_closed_alt", "S_fd", "E_system",
                 "E_reservoir_excess", "E_interaction", "U_gibbs_helmholtz", "consistency_dev"},
                {}};
    double worst = 0.0;
    int failed = 0;
    Json errors = Json::array();
    for (const auto& r : reports) {
        t.rows.push_back({r.T, r.U_star, r.F_closed, r.F_star, r.S_closed, r.S_closed_alt, r.S_star, r.E_system,
                          r.E_reservoir_excess, r.E_interaction, r.consistency.U_from_GibbsHelmholtz,
                          r.consistency.max_rel_dev});
        if (r.error) {
            ++failed;
            rep.warnings.push_back("T = " + fmt(r.T) + ": " + *r.error);
            errors.push_back(Json{{"T", r.T}, {"error", *r.error}});
        } else {
            worst = std::max(worst, r.consistency.max_rel_dev);
        }
    }
    em.table("thermo", t,
             {{"model", ev.model().name()}, {"omega_k", fmt(ev.mode().omega_k)}, {"units", units(ev, consts.kB)}});

    const bool pass = worst <= ts.consistency_threshold;
    Json j = header(rep);
    j["model"] = ev.model().name();
    j["omega_k"] = ev.mode().omega_k;
    j["points"] = reports.size();
    j["max_consistency_dev"] = io::number(worst);
    j["consistency_threshold"] = ts.consistency_threshold;
    j["pass"] = pass && failed == 0;
    j["errors"] = errors;
    em.json("thermo_summary.json", j);
    if (failed > 0) {
        rep.exit_code = kExitNumerical;
        rep.message = std::to_string(failed) + " temperature point(s) failed; see warnings";
    } else if (!pass) {
        rep.exit_code = kExitThreshold;
        rep.message = "consistency deviation " + fmt(worst) + " exceeds " + fmt(ts.consistency_threshold);
    }
    return rep;
}

RunReport cmd_correlate(const RunConfig& cfg, const CommandOptions& opts) {
    RunReport rep = start("correlate", cfg);
    const auto cs = build_correlate(cfg);
    const auto coherent = build_coherent(cfg);
    const auto ev = build_evaluator(cfg);
    const auto consts = build_constants(cfg);
    const auto out = build_output(cfg);
    Emitter em(output_dir(cfg, opts), out.format, rep);

    const ThermalState state =
        cs.T == 0.0 ? ThermalState::vacuum(consts.hbar, consts.kB) : ThermalState(cs.T, consts.hbar, consts.kB);
    auto to_table = [](const CorrelatorTable& rows) {
        io::Table t{{}, {"dt", "dr", "value", "est_error"}, {}};
        for (const auto& r : rows) t.rows.push_back({r.dt, r.dr, r.value, r.est_error});
        return t;
    };
    const std::vector<std::pair<std::string, std::string>> meta{
        {"model", ev.model().name()}, {"k", fmt(ev.mode().k)}, {"T", fmt(cs.T)}, {"units", units(ev, consts.kB)}};
    em.table("corr_phi", to_table(thermal_corr_phi(ev, state, cs.grid)), meta);
    em.table("corr_pi", to_table(thermal_corr_pi(ev, state, cs.grid)), meta);
    if (coherent) {
        auto cmeta = meta;
        cmeta[2] = {"T", "0"};
        cmeta.emplace_back("amplitude", coherent->name());
        cmeta.emplace_back("pi_mean_sign", opts.pi_mean_sign == PiMeanSign::subtract ? "subtract" : "add");
        em.table("coherent_phi", to_table(coherent_corr_phi(ev, *coherent, cs.grid)), cmeta);
        em.table("coherent_pi", to_table(coherent_corr_pi(ev, *coherent, cs.grid, opts.pi_mean_sign)), cmeta);
    }
    return rep;
}

RunReport cmd_langevin(const RunConfig& cfg, const CommandOptions& opts) {
    RunReport rep = start("langevin", cfg);
    const auto ev = build_evaluator(cfg);
    auto ls = build_langevin(cfg);
    const auto out = build_output(cfg);
    ls.config.threads = threads_for(cfg, opts);
    Emitter em(output_dir(cfg, opts), out.format, rep);
    const auto& lc = ls.config;

    const EnsembleStats st = run_ensemble(ev, lc);
    const FdtComparison cmp = fdt_compare(ev, lc, st);
    rep.warnings = st.warnings;

    const std::int64_t dumps = std::min(ls.dump_trajectories, lc.n_traj);
    for (std::int64_t i = 0; i < dumps; ++i) {
        const auto noise = sample_noise(ev, lc, static_cast<std::uint64_t>(i));
        const auto tr = integrate_gle(ev, lc, noise, lc.method);
        io::Table t{{}, {"t", "phi", "phidot"}, {}};
        for (std::size_t n = 0; n < tr.phi.size(); ++n)
            t.rows.push_back({static_cast<double>(n) * tr.dt, tr.phi[n], tr.phidot[n]});
        char stem[32];
        std::snprintf(stem, sizeof stem, "traj_%04lld", static_cast<long long>(i));
        em.table(stem, t, {{"trajectory", std::to_string(i)}, {"seed", std::to_string(lc.seed)}});
    }

    const char* method = lc.method == MemoryMethod::auxiliary     ? "auxiliary"
                         : lc.method == MemoryMethod::convolution ? "convolution"
                                                                  : "automatic";
    Json acf = Json::array();
    for (const auto& p : st.acf_phi)
        acf.push_back(Json{{"lag", p.lag}, {"value", io::number(p.value)}, {"stderr", optional_number(p.stderr_)}});
    Json checks = Json::array();
    for (const auto& c : cmp.checks)
        checks.push_back(Json{{"name", c.name},
                              {"lag", c.lag},
                              {"simulated", io::number(c.simulated)},
                              {"predicted", io::number(c.predicted)},
                              {"stderr", optional_number(c.stderr_)},
                              {"quadrature_error", io::number(c.quadrature_error)},
                              {"pass", c.pass}});
    Json j = header(rep);
    j["model"] = ev.model().name();
    j["omega_k"] = ev.mode().omega_k;
    j["settings"] = Json{{"T", lc.T},         {"kB", lc.kB},           {"dt", lc.dt},
                         {"t_max", lc.t_max}, {"burn_in", lc.burn_in}, {"n_traj", lc.n_traj},
                         {"seed", lc.seed},   {"method", method}};
    j["n_traj"] = st.n_traj;
    j["failures"] = st.failures;
    j["mean_phi"] = io::number(st.mean_phi);
    j["var_phi"] = io::number(st.var_phi);
    j["var_pi"] = io::number(st.var_pi);
    j["var_phi_first_half"] = io::number(st.var_phi_first_half);
    j["var_phi_second_half"] = io::number(st.var_phi_second_half);
    j["stderr"] = Json{{"mean_phi", optional_number(st.stderr_mean_phi)},
                       {"var_phi", optional_number(st.stderr_var_phi)},
                       {"var_pi", optional_number(st.stderr_var_pi)},
                       {"half_difference", optional_number(st.stderr_half_difference)}};
    j["acf_phi"] = acf;
    j["fdt"] = Json{{"pass", cmp.pass}, {"stationary", cmp.stationary}, {"checks", checks}};
    j["warnings"] = rep.warnings;
    em.json("ensemble.json", j);

    if (st.failures > 0) {
        rep.exit_code = kExitNumerical;
        rep.message = std::to_string(st.failures) + " trajectories failed (dt = " + fmt(lc.dt) + "): " +
                      st.warnings.front();
    } else if (st.n_traj >= 2 && !cmp.pass) {
        rep.exit_code = kExitThreshold;
        rep.message = "fluctuation-dissipation comparison failed at 3 standard errors";
    }
    return rep;
}

RunReport run_command(const std::string& command, const CommandOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    RunReport rep;
    rep.command = command;
    std::optional<std::filesystem::path> dir = opts.out;
    try {
        const RunConfig cfg = RunConfig::load(opts.config);
        rep.config_digest = cfg.digest();
        dir = output_dir(cfg, opts);
        std::filesystem::create_directories(*dir);
        if (command == "kk-check")
            rep = cmd_kk_check(cfg, opts);
        else if (command == "greens")
            rep = cmd_greens(cfg, opts);
        else if (command == "thermo")
            rep = cmd_thermo(cfg, opts);
        else if (command == "correlate")
            rep = cmd_correlate(cfg, opts);
        else if (command == "langevin")
            rep = cmd_langevin(cfg, opts);
        else
            throw Error(ErrorKind::ConfigInvalid, "unknown command '" + command + "'");
    } catch (const Error& e) {
        rep.exit_code = exit_code_for(e.kind());
        rep.message = e.what();
    } catch (const std::filesystem::filesystem_error& e) {
        rep.exit_code = kExitConfig;
        rep.message = e.what();
    } catch (const std::exception& e) {
        rep.exit_code = kExitNumerical;
        rep.message = e.what();
    }
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (dir && std::filesystem::is_directory(*dir)) {
        Json outputs = Json::array();
        for (const auto& o : rep.outputs) outputs.push_back(Json{{"path", o.path}, {"sha256", o.sha256}});
        Json j{{"command", rep.command},   {"config_digest", rep.config_digest},
               {"tool_version", rep.tool_version}, {"wall_time", rep.wall_time},
               {"warnings", rep.warnings}, {"outputs", outputs},
               {"exit_code", rep.exit_code}, {"message", rep.message}};
        try {
            io::write_text(*dir / "run_report.json", io::dump(j));
        } catch (const Error& e) {
            if (rep.exit_code == kExitOk) {
                rep.exit_code = kExitConfig;
                rep.message = e.what();
            }
        }
    }
    return rep;
}

} // namespace dissfield
