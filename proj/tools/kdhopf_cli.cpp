// Command-line front end: spectrum | report | simulate | sweep | verify.
// Exit codes: 0 success, 1 criterion or run failure, 2 config error.
#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "kdhopf/acceptance.hpp"
#include "kdhopf/errors.hpp"
#include "kdhopf/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace kdhopf;

namespace {

struct Common {
    std::string config_path;
    std::string out_dir;
    int threads = 1;
    std::optional<std::uint64_t> seed;
};

RunConfig load(const Common& c) {
    json j;
    if (c.config_path.empty()) {
        j = {{"distribution", {{"family", "bimodal_lorentzian"}, {"omega0", 2.0}}}};
    } else {
        j = load_config(c.config_path).raw;
    }
    // Command-line overrides go into the hashed config so sidecars reflect them.
    if (c.seed) j["simulation"]["seed"] = *c.seed;
    if (!c.out_dir.empty()) j["output"]["directory"] = c.out_dir;
    RunConfig cfg = parse_config(j);
    cfg.sim.threads = c.threads;
    return cfg;
}

void emit_json(const RunConfig& cfg, const std::string& name, const json& j) {
    const fs::path p = fs::path(cfg.directory) / name;
    write_json(p, j);
    write_sidecar(p, cfg.raw);
    std::cout << "wrote " << p.string() << "\n";
}

template <class Writer>
void emit_csv(const RunConfig& cfg, const std::string& name, Writer&& w) {
    if (!cfg.wants("csv")) return;
    const fs::path p = fs::path(cfg.directory) / name;
    w(p);
    write_sidecar(p, cfg.raw);
    std::cout << "wrote " << p.string() << "\n";
}

int cmd_spectrum(const RunConfig& cfg) {
    const auto dist = cfg.distribution();
    std::vector<BranchSample> rows;
    const Region region = default_second_sheet_region(dist);
    int principal = 0, second = 0;
    for (int i = 0; i < cfg.K_steps; ++i) {
        const double K =
            cfg.K_steps == 1 ? cfg.K_min : cfg.K_min + (cfg.K_max - cfg.K_min) * i / (cfg.K_steps - 1);
        if (K <= 0.0) continue;  // no finite target 2/K
        const auto s = find_eigenvalues(dist, K, 1, cfg.h);
        for (const auto& r : s.eigenvalues) rows.push_back({K, {r.lambda, Sheet::principal}, r.residual}), ++principal;
        for (const auto& r : s.boundary) rows.push_back({K, {r.lambda, Sheet::principal}, r.residual});
        for (const auto& g : find_generalized_eigenvalues(dist, K, region)) rows.push_back({K, g.point, g.residual}), ++second;
    }
    emit_csv(cfg, "spectrum.csv", [&](const fs::path& p) { write_branch_csv(p, rows); });
    if (cfg.wants("json")) {
        json recs = json::array();
        for (const auto& r : rows) {
            recs.push_back({{"K", r.K},
                            {"re_lambda", r.point.lambda.real()},
                            {"im_lambda", r.point.lambda.imag()},
                            {"sheet", to_string(r.point.sheet)},
                            {"residual", r.residual}});
        }
        emit_json(cfg, "spectrum.json", {{"points", recs}, {"eigenvalues", principal}, {"generalized", second}});
    }
    return 0;
}

int cmd_report(const RunConfig& cfg) {
    const auto dist = cfg.distribution();
    const TransitionReport rep = verify_assumptions(dist, cfg.h);
    json j = {{"distribution", {{"family", cfg.family}, {"omega0", cfg.omega0}}},
              {"model", {{"K", cfg.K}, {"h", cfg.h}}},
              {"transition", to_json(rep)},
              {"assumptions_hold", rep.flags.all()}};
    if (rep.flags.all()) {
        try {
            const CmCoefficients c = cfg.h == 0.0 ? coefficients_sine(dist) : coefficients_second_harmonic(dist, cfg.h);
            j["coefficients"] = to_json(c);
            const double lead = c.kind == CmKind::sine ? c.p2.real() : c.q2.real();
            j["bifurcation"] = lead < 0.0 ? "supercritical" : "subcritical";
            j["prediction"] = to_json(predict_orbit(c, cfg.K - rep.K_c));
        } catch (const AssumptionViolated& e) {
            j["coefficients_error"] = e.what();
        }
    }
    emit_json(cfg, "report.json", j);
    return 0;
}

int cmd_simulate(const RunConfig& cfg) {
    const auto dist = cfg.distribution();
    const ModelParams p{cfg.K, cfg.h};
    const SweepSettings& st = cfg.sim;
    if (cfg.kind == RunKind::center_manifold || cfg.kind == RunKind::averaged) {
        const CmCoefficients c = cfg.h == 0.0 ? coefficients_sine(dist) : coefficients_second_harmonic(dist, cfg.h);
        const double dt = default_reduced_dt(c);
        const double t_end = default_reduced_t_end(c, cfg.epsilon);
        const double a = st.initial_amplitude;
        const ReducedTrajectory tr = cfg.kind == RunKind::center_manifold
                                         ? integrate_center_manifold(c, cfg.epsilon, {cplx(a), cplx(a)}, t_end, dt,
                                                                     st.record_stride)
                                         : integrate_averaged(c, cfg.epsilon, a, a, t_end, dt, st.record_stride);
        emit_csv(cfg, "trajectory.csv", [&](const fs::path& path) { write_trajectory_csv(path, tr); });
        if (cfg.wants("json")) {
            emit_json(cfg, "simulate.json",
                      {{"kind", to_string(cfg.kind)}, {"epsilon", cfg.epsilon}, {"prediction", to_json(predict_orbit(c, cfg.epsilon))}});
        }
        return 0;
    }
    OrderParameterSeries s;
    switch (cfg.kind) {
        case RunKind::galerkin: s = run_simulation(dist, p, SimKind::galerkin, st); break;
        case RunKind::finite_n: s = run_simulation(dist, p, SimKind::finite_n, st); break;
        case RunKind::oa_oracle: s = run_simulation(dist, p, SimKind::oa_oracle, st); break;
        case RunKind::linearized:
            s = simulate_linearized(p, dist, st.M, st.initial_amplitude, st.t_end, st.dt, st.record_stride, st.galerkin);
            break;
        default: break;
    }
    emit_csv(cfg, "series.csv", [&](const fs::path& path) { write_series_csv(path, s); });
    if (cfg.wants("json")) {
        json j = {{"kind", to_string(cfg.kind)},
                  {"K", cfg.K},
                  {"h", cfg.h},
                  {"samples", s.times.size()},
                  {"final_abs_eta1", s.eta1.empty() ? 0.0 : std::abs(s.eta1.back())},
                  {"tail_ratio", s.tail_ratio},
                  {"truncation_warning", s.truncation_warning}};
        try {
            j["steady_amplitude"] = steady_amplitude(s, st.transient_fraction);
            const FrequencyEstimate f = dominant_frequency(s, st.transient_fraction);
            j["dominant_frequency"] = f.frequency;
            j["no_peak"] = f.no_peak;
        } catch (const Error& e) {
            j["analysis_error"] = e.what();
        }
        emit_json(cfg, "simulate.json", j);
    }
    if (s.truncation_warning) std::cerr << "warning: harmonic tail ratio " << s.tail_ratio << " exceeds 10%\n";
    return 0;
}

int cmd_sweep(const RunConfig& cfg) {
    SimKind kind = SimKind::galerkin;
    if (cfg.kind == RunKind::finite_n) kind = SimKind::finite_n;
    else if (cfg.kind == RunKind::oa_oracle) kind = SimKind::oa_oracle;
    else if (cfg.kind != RunKind::galerkin) throw ConfigError("sweep supports galerkin, finite_n and oa_oracle");
    const SweepResult r = bifurcation_sweep(cfg.distribution(), cfg.h, cfg.K_list, kind, cfg.sim);
    emit_csv(cfg, "sweep.csv", [&](const fs::path& p) { write_sweep_csv(p, r); });
    if (cfg.wants("json")) {
        json j = to_json(r);
        j["expected_exponent"] = cfg.h == 0.0 ? 0.5 : 1.0;
        j["exponent_tolerance"] = cfg.h == 0.0 ? AcceptanceTolerances{}.sqrt_exponent : AcceptanceTolerances{}.linear_exponent;
        emit_json(cfg, "sweep.json", j);
    }
    return 0;
}

int cmd_verify(const RunConfig& cfg, const std::vector<int>& ids) {
    const AcceptanceTolerances tol = apply_overrides(AcceptanceTolerances{}, cfg.tolerances);
    const auto results = run_acceptance(tol, std::max(1, cfg.sim.threads), std::cout, ids);
    json rows = json::array();
    bool ok = true;
    for (const auto& r : results) {
        ok = ok && r.pass;
        rows.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    }
    if (cfg.wants("json")) emit_json(cfg, "verify.json", {{"criteria", rows}, {"all_pass", ok}});
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hopf onset in the Kuramoto-Daido model: spectra, normal forms and simulations"};
    app.require_subcommand(1);
    Common common;
    std::uint64_t seed = 0;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config_path, "JSON run config");
        sub->add_option("--out", common.out_dir, "output directory (overrides the config)");
        sub->add_option("--threads", common.threads, "worker threads for sweep rows")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "random seed (overrides the config)");
    };
    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues and generalized eigenvalues over a K grid");
    auto* report = app.add_subcommand("report", "transition point, assumptions, coefficients and orbit prediction");
    auto* simulate = app.add_subcommand("simulate", "one simulation run");
    auto* sweep = app.add_subcommand("sweep", "bifurcation sweep against the predicted amplitude");
    auto* verify = app.add_subcommand("verify", "acceptance suite");
    std::vector<int> ids;
    verify->add_option("--criteria", ids, "run only these criterion numbers")->delimiter(',');
    for (auto* s : {spectrum, report, simulate, sweep, verify}) add_common(s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    for (auto* s : {spectrum, report, simulate, sweep, verify}) {
        if (s->count("--seed")) common.seed = seed;
    }

    try {
        const RunConfig cfg = load(common);
        if (*spectrum) return cmd_spectrum(cfg);
        if (*report) return cmd_report(cfg);
        if (*simulate) return cmd_simulate(cfg);
        if (*sweep) return cmd_sweep(cfg);
        if (*verify) return cmd_verify(cfg, ids);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
