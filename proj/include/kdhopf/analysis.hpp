#pragma once

#include <optional>
#include <vector>

#include "kdhopf/center_manifold.hpp"
#include "kdhopf/simulate.hpp"

namespace kdhopf {

// Max |eta_1| over the window after the transient. If reference_frequency > 0 the
// window must hold at least 10 periods 2 pi / reference_frequency.
double steady_amplitude(const OrderParameterSeries& s, double transient_fraction = 0.5,
                        double reference_frequency = 0.0);

struct FrequencyEstimate {
    double frequency = 0.0;  // angular, folded to >= 0
    bool no_peak = false;
};

// Largest peak of the Hann-windowed spectrum of eta_1, refined by quadratic interpolation.
FrequencyEstimate dominant_frequency(const OrderParameterSeries& s, double transient_fraction = 0.5,
                                     double reference_frequency = 0.0);

struct DecayFit {
    double rate = 0.0;       // slope of log envelope
    double frequency = 0.0;  // angular, from zero-crossing spacing
    int peaks = 0;
};

// Envelope fit on [t0, t1]. Throws NonDecaying if the slope is >= 0 and require_decay is set.
DecayFit fit_decay_rate(const OrderParameterSeries& s, double t0, double t1, bool require_decay = true);

enum class SimKind { galerkin, finite_n, oa_oracle };

const char* to_string(SimKind k);

struct SweepSettings {
    int M = 400;
    int J = 8;
    std::size_t N = 100000;
    double dt = 0.05;
    double t_end = 1000.0;
    int record_stride = 2;
    double transient_fraction = 0.5;
    double initial_amplitude = 1e-3;
    std::uint64_t seed = 1;
    int threads = 1;
    GalerkinOptions galerkin;
};

struct SweepRow {
    double K = 0.0;
    double epsilon = 0.0;
    double measured_amplitude = 0.0;
    double predicted_amplitude = 0.0;
    double measured_frequency = 0.0;
    double predicted_frequency = 0.0;
    SeriesSource source = SeriesSource::galerkin;
    bool truncation_warning = false;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::optional<double> exponent;  // slope of log amplitude against log epsilon over epsilon > 0
    double K_c = 0.0;
    double y_c = 0.0;
};

// Simulated run for one coupling value; exposed so callers can inspect the series.
OrderParameterSeries run_simulation(const AnalyticDistribution& dist, const ModelParams& p, SimKind kind,
                                    const SweepSettings& st);

SweepResult bifurcation_sweep(const AnalyticDistribution& dist, double h, const std::vector<double>& K_list,
                              SimKind kind, const SweepSettings& st);

// Least-squares slope of log(y) against log(x) over points with x, y > 0.
std::optional<double> log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

// Uniform phases from the seed, mapped through 53-bit draws of mt19937_64.
std::vector<double> random_phases(std::size_t n, std::uint64_t seed);

}  // namespace kdhopf
