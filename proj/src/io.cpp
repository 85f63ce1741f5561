#include "kdhopf/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "kdhopf/errors.hpp"

namespace kdhopf {

namespace fs = std::filesystem;
using nlohmann::json;

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string config_hash(const json& config) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(config.dump())));
    return buf;
}

namespace {

// Round-trip precision, fixed so identical runs give identical bytes.
std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    return out;
}

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

}  // namespace

void write_branch_csv(const fs::path& path, const std::vector<BranchSample>& samples) {
    auto out = open_out(path);
    out << kBranchHeader << '\n';
    for (const auto& s : samples) {
        out << num(s.K) << ',' << num(s.point.lambda.real()) << ',' << num(s.point.lambda.imag()) << ','
            << to_string(s.point.sheet) << ',' << num(s.residual) << '\n';
    }
}

void write_trajectory_csv(const fs::path& path, const ReducedTrajectory& traj) {
    auto out = open_out(path);
    out << kTrajectoryHeader << '\n';
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto& s = traj.states[i];
        out << num(traj.times[i]) << ',' << num(s.alpha_plus.real()) << ',' << num(s.alpha_plus.imag()) << ','
            << num(s.alpha_minus.real()) << ',' << num(s.alpha_minus.imag()) << '\n';
    }
}

void write_series_csv(const fs::path& path, const OrderParameterSeries& s) {
    auto out = open_out(path);
    out << kSeriesHeader << '\n';
    for (std::size_t i = 0; i < s.times.size(); ++i) {
        const cplx e2 = i < s.eta2.size() ? s.eta2[i] : cplx{};
        out << num(s.times[i]) << ',' << num(s.eta1[i].real()) << ',' << num(s.eta1[i].imag()) << ','
            << num(e2.real()) << ',' << num(e2.imag()) << '\n';
    }
}

void write_sweep_csv(const fs::path& path, const SweepResult& r) {
    auto out = open_out(path);
    out << kSweepHeader << '\n';
    for (const auto& row : r.rows) {
        out << num(row.K) << ',' << num(row.epsilon) << ',' << num(row.measured_amplitude) << ','
            << num(row.predicted_amplitude) << ',' << num(row.measured_frequency) << ','
            << num(row.predicted_frequency) << ',' << to_string(row.source) << '\n';
    }
}

void write_json(const fs::path& path, const json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

void write_sidecar(const fs::path& artifact, const json& config) {
    json meta = {{"artifact", artifact.filename().string()},
                 {"config_hash", config_hash(config)},
                 {"tool_version", kToolVersion}};
    write_json(fs::path(artifact.string() + ".meta.json"), meta);
}

json to_json(const TransitionReport& r) {
    json cands = json::array();
    for (auto [y, K] : r.candidates) cands.push_back({{"y", y}, {"K", K}});
    json j = {{"candidates", cands},
              {"y_c", r.y_c},
              {"K_c", r.K_c},
              {"dlambda_dK", cjson(r.dlambda_dK)},
              {"h", r.h},
              {"assumptions",
               {{"A1", r.flags.a1},
                {"A2", r.flags.a2},
                {"A3", r.flags.a3},
                {"A4", r.flags.a4},
                {"A5", r.flags.a5},
                {"all", r.flags.all()},
                {"diagnostics", r.flags.diagnostics}}}};
    j["K_c2"] = r.K_c2 ? json(*r.K_c2) : json(nullptr);
    return j;
}

json to_json(const CmCoefficients& c) {
    json j = {{"kind", to_string(c.kind)}, {"y_c", c.y_c}, {"K_c", c.K_c}, {"h", c.h}};
    if (c.kind == CmKind::sine) {
        j["p1"] = cjson(c.p1);
        j["p2"] = cjson(c.p2);
        j["p3"] = cjson(c.p3);
        j["p4"] = cjson(c.p4);
    } else {
        j["q1"] = cjson(c.q1);
        j["q2"] = cjson(c.q2);
        j["q3"] = cjson(c.q3);
    }
    return j;
}

json to_json(const OrbitPrediction& p) {
    return {{"epsilon", p.epsilon},        {"exists", p.exists},
            {"stable", p.stable},          {"r_star", p.r_star},
            {"amplitude", p.amplitude},    {"frequency", p.frequency},
            {"frequency_band", p.frequency_band}, {"scaling", to_string(p.scaling)},
            {"beta", p.beta_free}};
}

json to_json(const SweepResult& r) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"K", row.K},
                        {"epsilon", row.epsilon},
                        {"amp_measured", row.measured_amplitude},
                        {"amp_predicted", row.predicted_amplitude},
                        {"freq_measured", row.measured_frequency},
                        {"freq_predicted", row.predicted_frequency},
                        {"source", to_string(row.source)},
                        {"truncation_warning", row.truncation_warning}});
    }
    json j = {{"K_c", r.K_c}, {"y_c", r.y_c}, {"rows", rows}};
    j["exponent"] = r.exponent ? json(*r.exponent) : json(nullptr);
    return j;
}

RunKind parse_run_kind(const std::string& s) {
    if (s == "galerkin") return RunKind::galerkin;
    if (s == "finite_n") return RunKind::finite_n;
    if (s == "oa_oracle") return RunKind::oa_oracle;
    if (s == "linearized") return RunKind::linearized;
    if (s == "center_manifold") return RunKind::center_manifold;
    if (s == "averaged") return RunKind::averaged;
    throw ConfigError("unknown simulation kind '" + s + "'");
}

const char* to_string(RunKind k) {
    switch (k) {
        case RunKind::galerkin: return "galerkin";
        case RunKind::finite_n: return "finite_n";
        case RunKind::oa_oracle: return "oa_oracle";
        case RunKind::linearized: return "linearized";
        case RunKind::center_manifold: return "center_manifold";
        case RunKind::averaged: return "averaged";
    }
    return "?";
}

AnalyticDistribution RunConfig::distribution() const { return AnalyticDistribution::bimodal_lorentzian(omega0); }

bool RunConfig::wants(const std::string& format) const {
    for (const auto& f : formats) {
        if (f == format) return true;
    }
    return false;
}

namespace {

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError("'" + where + "' must be an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!ok.count(it.key())) throw ConfigError("unknown key '" + where + "." + it.key() + "'");
    }
}

template <class T>
void get(const json& obj, const char* key, const std::string& where, T& dst) {
    if (!obj.contains(key)) return;
    try {
        dst = obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("bad value for '" + where + "." + key + "'");
    }
}

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

}  // namespace

RunConfig parse_config(const json& j) {
    RunConfig c;
    only_keys(j, "config", {"distribution", "model", "simulation", "analysis", "spectrum", "sweep", "output", "verify"});
    require(j.contains("distribution"), "missing 'distribution' section");

    const json& d = j.at("distribution");
    only_keys(d, "distribution", {"family", "omega0"});
    get(d, "family", "distribution", c.family);
    require(c.family == "bimodal_lorentzian",
            "distribution.family '" + c.family + "' is not available from a config file");
    get(d, "omega0", "distribution", c.omega0);
    require(std::isfinite(c.omega0) && c.omega0 > 0.0, "distribution.omega0 must be > 0");

    if (j.contains("model")) {
        const json& m = j.at("model");
        only_keys(m, "model", {"K", "h"});
        get(m, "K", "model", c.K);
        get(m, "h", "model", c.h);
        require(c.K > 0.0, "model.K must be > 0");
        require(c.h < 1.0, "model.h must be < 1");
    }

    if (j.contains("simulation")) {
        const json& s = j.at("simulation");
        only_keys(s, "simulation",
                  {"kind", "N", "M", "J", "dt", "t_end", "seed", "record_stride", "initial_amplitude", "node_rule",
                   "filter_strength", "epsilon"});
        std::string kind = to_string(c.kind);
        get(s, "kind", "simulation", kind);
        c.kind = parse_run_kind(kind);
        get(s, "N", "simulation", c.sim.N);
        get(s, "M", "simulation", c.sim.M);
        get(s, "J", "simulation", c.sim.J);
        get(s, "dt", "simulation", c.sim.dt);
        get(s, "t_end", "simulation", c.sim.t_end);
        get(s, "seed", "simulation", c.sim.seed);
        get(s, "record_stride", "simulation", c.sim.record_stride);
        get(s, "initial_amplitude", "simulation", c.sim.initial_amplitude);
        get(s, "filter_strength", "simulation", c.sim.galerkin.filter_strength);
        get(s, "epsilon", "simulation", c.epsilon);
        std::string rule = "automatic";
        get(s, "node_rule", "simulation", rule);
        if (rule == "automatic") c.sim.galerkin.rule = NodeRule::automatic;
        else if (rule == "real_line") c.sim.galerkin.rule = NodeRule::real_line;
        else if (rule == "shifted_contour") c.sim.galerkin.rule = NodeRule::shifted_contour;
        else throw ConfigError("unknown simulation.node_rule '" + rule + "'");
        require(c.sim.N >= 2, "simulation.N must be >= 2");
        require(c.sim.M >= 2, "simulation.M must be >= 2");
        require(c.sim.J >= 2, "simulation.J must be >= 2");
        require(c.sim.dt > 0.0, "simulation.dt must be > 0");
        require(c.sim.t_end > 0.0, "simulation.t_end must be > 0");
        require(c.sim.record_stride >= 1, "simulation.record_stride must be >= 1");
    }

    if (j.contains("analysis")) {
        const json& a = j.at("analysis");
        only_keys(a, "analysis", {"transient_fraction"});
        get(a, "transient_fraction", "analysis", c.sim.transient_fraction);
        require(c.sim.transient_fraction >= 0.0 && c.sim.transient_fraction < 1.0,
                "analysis.transient_fraction must lie in [0, 1)");
    }

    if (j.contains("spectrum")) {
        const json& s = j.at("spectrum");
        only_keys(s, "spectrum", {"K_min", "K_max", "K_steps"});
        get(s, "K_min", "spectrum", c.K_min);
        get(s, "K_max", "spectrum", c.K_max);
        get(s, "K_steps", "spectrum", c.K_steps);
        require(c.K_steps >= 1, "spectrum.K_steps must be >= 1 (empty K grid)");
        require(c.K_max >= c.K_min, "spectrum.K_max must be >= K_min");
    }

    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        only_keys(s, "sweep", {"K_list"});
        get(s, "K_list", "sweep", c.K_list);
        require(!c.K_list.empty(), "sweep.K_list is empty");
    }

    if (j.contains("output")) {
        const json& o = j.at("output");
        only_keys(o, "output", {"directory", "formats"});
        get(o, "directory", "output", c.directory);
        get(o, "formats", "output", c.formats);
        for (const auto& f : c.formats) require(f == "csv" || f == "json", "unknown output format '" + f + "'");
    }

    if (j.contains("verify")) {
        const json& v = j.at("verify");
        only_keys(v, "verify", {"full", "tolerances"});
        get(v, "full", "verify", c.verify_full);
        if (v.contains("tolerances")) {
            require(v.at("tolerances").is_object(), "verify.tolerances must be an object");
            c.tolerances = v.at("tolerances");
        }
    }

    c.raw = j;
    return c;
}

RunConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

}  // namespace kdhopf
