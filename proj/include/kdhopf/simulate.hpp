#pragma once

#include <array>
#include <complex>
#include <vector>

#include "kdhopf/distributions.hpp"

namespace kdhopf {

struct ModelParams {
    double K = 0.0;
    double h = 0.0;
};

enum class SeriesSource { finite_n, galerkin, oa_oracle, linearized };

const char* to_string(SeriesSource s);

struct OrderParameterSeries {
    SeriesSource source = SeriesSource::galerkin;
    std::vector<double> times;
    std::vector<cplx> eta1;
    std::vector<cplx> eta2;
    // Galerkin only: weighted |Z_J| / |Z_1| at the final time, and whether it exceeded 10%.
    double tail_ratio = 0.0;
    bool truncation_warning = false;
};

struct FiniteNState {
    std::vector<double> theta;
    std::vector<double> omega;
};

// (eta_1, eta_2) of a phase vector.
std::pair<cplx, cplx> order_parameters(const std::vector<double>& theta);

OrderParameterSeries simulate_finite_n(const ModelParams& p, const std::vector<double>& omegas,
                                       const std::vector<double>& theta0, double t_end, double dt,
                                       int record_stride = 1);

// real_line: nodes on the real axis, positive weights.
// shifted_contour: nodes t_k + i sigma with complex weights g(t_k + i sigma) dt_k. Exact by
// Cauchy's theorem when every Z_j is analytic above the axis, which holds for h = 0 and
// for the linearized first harmonic.
enum class NodeRule { automatic, real_line, shifted_contour };

const char* to_string(NodeRule r);

struct GalerkinNodes {
    std::vector<cplx> omega;
    std::vector<cplx> weight;
    NodeRule rule = NodeRule::real_line;
    double sigma = 0.0;
};

GalerkinNodes make_galerkin_nodes(const AnalyticDistribution& dist, int M, NodeRule rule, double sigma = 0.5);

struct GalerkinOptions {
    NodeRule rule = NodeRule::automatic;
    double sigma = 0.5;
    // Damping nu (j/J)^order on harmonic j. Negative selects the default:
    // 0 on the shifted contour, 5 on the real line.
    double filter_strength = -1.0;
    int filter_order = 8;
};

struct GalerkinState {
    GalerkinNodes nodes;
    int J = 0;
    std::vector<cplx> Z;  // Z[(j-1) * M + k], j = 1..J

    int M() const { return static_cast<int>(nodes.omega.size()); }
    cplx& at(int j, int k) { return Z[static_cast<std::size_t>(j - 1) * nodes.omega.size() + k]; }
    cplx at(int j, int k) const { return Z[static_cast<std::size_t>(j - 1) * nodes.omega.size() + k]; }
};

// Z_1 = a at every node, higher harmonics zero.
GalerkinState uniform_galerkin_state(GalerkinNodes nodes, int J, cplx a);

NodeRule resolve_rule(const ModelParams& p, const GalerkinOptions& opt);

OrderParameterSeries simulate_galerkin(const ModelParams& p, GalerkinState& state, double t_end, double dt,
                                       int record_stride = 1, const GalerkinOptions& opt = {});

OrderParameterSeries simulate_galerkin(const ModelParams& p, const AnalyticDistribution& dist, int M, int J,
                                       cplx Z1_0, double t_end, double dt, int record_stride = 1,
                                       const GalerkinOptions& opt = {});

OrderParameterSeries simulate_linearized(const ModelParams& p, const AnalyticDistribution& dist, int M, cplx Z1_0,
                                         double t_end, double dt, int record_stride = 1,
                                         const GalerkinOptions& opt = {});

// Two-population reduction of the bimodal Lorentzian with h = 0.
OrderParameterSeries ott_antonsen_oracle(double omega0, double K, std::array<cplx, 2> z0, double t_end, double dt,
                                         int record_stride = 1);

}  // namespace kdhopf
