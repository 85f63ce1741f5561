#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "kdhopf/errors.hpp"
#include "kdhopf/io.hpp"

using namespace kdhopf;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string first_line(const fs::path& p) {
    std::ifstream in(p);
    std::string l;
    std::getline(in, l);
    return l;
}

fs::path scratch() {
    const fs::path d = fs::temp_directory_path() / "kdhopf_io_test";
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("FNV-1a reference values") {
    CHECK(fnv1a("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a("foobar") == 0x85944171f73967e8ull);
    CHECK(config_hash(json{{"a", 1}}) == config_hash(json::parse(R"({ "a" : 1 })")));
}

TEST_CASE("CSV headers are frozen") {
    const fs::path d = scratch();
    OrderParameterSeries s;
    s.times = {0.0, 1.0};
    s.eta1 = {cplx(0.1, 0.2), cplx(0.3, -0.4)};
    s.eta2 = {cplx(0.0), cplx(0.5)};
    write_series_csv(d / "s.csv", s);
    CHECK(first_line(d / "s.csv") == "t,re_eta1,im_eta1,re_eta2,im_eta2");
    CHECK(slurp(d / "s.csv").find("1,0.29999999999999999,-0.40000000000000002,0.5,0") != std::string::npos);

    write_branch_csv(d / "b.csv", {{4.0, {cplx(0.0, 1.7), Sheet::second}, 1e-12}});
    CHECK(first_line(d / "b.csv") == "K,re,im,sheet,residual");
    CHECK(slurp(d / "b.csv").find(",second,") != std::string::npos);

    ReducedTrajectory tr;
    tr.times = {0.0};
    tr.states = {{cplx(1.0), cplx(2.0)}};
    write_trajectory_csv(d / "t.csv", tr);
    CHECK(first_line(d / "t.csv") == "t,re_alpha_plus,im_alpha_plus,re_alpha_minus,im_alpha_minus");

    SweepResult r;
    r.rows.push_back({});
    write_sweep_csv(d / "w.csv", r);
    CHECK(first_line(d / "w.csv") == "K,epsilon,amp_measured,amp_predicted,freq_measured,freq_predicted,source");
}

TEST_CASE("sidecar records hash and version") {
    const fs::path d = scratch();
    const json cfg = {{"distribution", {{"omega0", 2.0}}}};
    write_json(d / "x.json", {{"v", 1}});
    write_sidecar(d / "x.json", cfg);
    const json meta = json::parse(slurp(d / "x.json.meta.json"));
    CHECK(meta["config_hash"] == config_hash(cfg));
    CHECK(meta["tool_version"] == kToolVersion);
    CHECK(meta["artifact"] == "x.json");
}

TEST_CASE("config parsing") {
    const json ok = json::parse(R"({
        "distribution": {"family": "bimodal_lorentzian", "omega0": 2.0},
        "model": {"K": 4.2, "h": -0.5},
        "simulation": {"kind": "finite_n", "N": 1000, "seed": 7},
        "sweep": {"K_list": [4.1, 4.2]}
    })");
    const RunConfig c = parse_config(ok);
    CHECK(c.K == 4.2);
    CHECK(c.h == -0.5);
    CHECK(c.kind == RunKind::finite_n);
    CHECK(c.sim.N == 1000);
    CHECK(c.sim.seed == 7);
    CHECK(c.sim.M == 400);
    CHECK(c.K_list.size() == 2);

    auto bad = [&](const char* text) { return parse_config(json::parse(text)); };
    CHECK_THROWS_AS(bad(R"({"model": {"K": 1}})"), ConfigError);
    CHECK_THROWS_AS(bad(R"({"distribution": {"omega0": 2, "width": 1}})"), ConfigError);
    CHECK_THROWS_AS(bad(R"({"distribution": {"omega0": 2}, "extra": {}})"), ConfigError);
    CHECK_THROWS_AS(bad(R"({"distribution": {"omega0": "two"}})"), ConfigError);
    CHECK_THROWS_AS(bad(R"({"distribution": {"omega0": 2}, "model": {"K": -1}})"), ConfigError);
    CHECK_THROWS_AS(bad(R"({"distribution": {"omega0": 2}, "model": {"h": 1.0}})"), ConfigError);
    CHECK_THROWS_AS(bad(R"({"distribution": {"omega0": 2}, "simulation": {"kind": "pde"}})"), ConfigError);
    CHECK_THROWS_AS(bad(R"({"distribution": {"omega0": 2}, "spectrum": {"K_steps": 0}})"), ConfigError);
    CHECK_THROWS_AS(bad(R"({"distribution": {"omega0": 2}, "sweep": {"K_list": []}})"), ConfigError);
    CHECK_THROWS_AS(bad(R"({"distribution": {"family": "gaussian", "omega0": 2}})"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("identical runs write identical bytes") {
    const fs::path d = scratch();
    const auto dist = AnalyticDistribution::bimodal_lorentzian(2.0);
    for (const char* name : {"r1.csv", "r2.csv"}) {
        const auto s = simulate_galerkin({4.16, 0.0}, dist, 60, 4, 1e-3, 5.0, 0.05, 5);
        write_series_csv(d / name, s);
    }
    CHECK(slurp(d / "r1.csv") == slurp(d / "r2.csv"));
}
