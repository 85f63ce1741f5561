#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kdhopf/analysis.hpp"
#include "kdhopf/reduced_ode.hpp"

namespace kdhopf {

inline constexpr const char* kToolVersion = "0.1.0";

// Frozen CSV headers.
inline constexpr const char* kBranchHeader = "K,re,im,sheet,residual";
inline constexpr const char* kTrajectoryHeader = "t,re_alpha_plus,im_alpha_plus,re_alpha_minus,im_alpha_minus";
inline constexpr const char* kSeriesHeader = "t,re_eta1,im_eta1,re_eta2,im_eta2";
inline constexpr const char* kSweepHeader = "K,epsilon,amp_measured,amp_predicted,freq_measured,freq_predicted,source";

// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& bytes);
std::string config_hash(const nlohmann::json& config);

void write_branch_csv(const std::filesystem::path& path, const std::vector<BranchSample>& samples);
void write_trajectory_csv(const std::filesystem::path& path, const ReducedTrajectory& traj);
void write_series_csv(const std::filesystem::path& path, const OrderParameterSeries& s);
void write_sweep_csv(const std::filesystem::path& path, const SweepResult& r);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

// <path>.meta.json next to every artifact: config hash, tool version, artifact name.
void write_sidecar(const std::filesystem::path& artifact, const nlohmann::json& config);

nlohmann::json to_json(const TransitionReport& r);
nlohmann::json to_json(const CmCoefficients& c);
nlohmann::json to_json(const OrbitPrediction& p);
nlohmann::json to_json(const SweepResult& r);

enum class RunKind { galerkin, finite_n, oa_oracle, linearized, center_manifold, averaged };

RunKind parse_run_kind(const std::string& s);
const char* to_string(RunKind k);

struct RunConfig {
    // distribution
    std::string family = "bimodal_lorentzian";
    double omega0 = 2.0;
    // model
    double K = 4.16;
    double h = 0.0;
    // simulation
    RunKind kind = RunKind::galerkin;
    SweepSettings sim;
    double epsilon = 0.16;  // reduced-model runs only
    // spectrum grid
    double K_min = 0.0;
    double K_max = 11.0;
    int K_steps = 111;
    // sweep
    std::vector<double> K_list = {4.04, 4.09, 4.16, 4.25};
    // output
    std::string directory = "out";
    std::vector<std::string> formats = {"csv", "json"};
    // verify
    bool verify_full = true;
    nlohmann::json tolerances = nlohmann::json::object();

    nlohmann::json raw = nlohmann::json::object();  // canonical form, hashed into sidecars

    AnalyticDistribution distribution() const;
    bool wants(const std::string& format) const;
};

// Throws ConfigError on unknown keys, wrong types or out-of-range values.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace kdhopf
