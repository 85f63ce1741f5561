#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kdhopf/distributions.hpp"

namespace kdhopf {

enum class Sheet { principal, second };

const char* to_string(Sheet s);

struct SpectralPoint {
    cplx lambda;
    Sheet sheet = Sheet::principal;
};

// |Re lambda| below this counts as lying on the imaginary axis.
inline constexpr double kAxisTol = 1e-8;

enum class DispersionMethod { automatic, closed_form, quadrature };

// Largest depth -Re(lambda) reachable on the second sheet (infinite for the closed form).
double second_sheet_reach(const AnalyticDistribution& dist, DispersionMethod method = DispersionMethod::automatic);

// Throws DomainError if the point violates its sheet invariant.
void check_sheet(const AnalyticDistribution& dist, const SpectralPoint& p,
                 DispersionMethod method = DispersionMethod::automatic);

cplx dispersion(const AnalyticDistribution& dist, const SpectralPoint& p,
                DispersionMethod method = DispersionMethod::automatic);
cplx dispersion_derivative(const AnalyticDistribution& dist, const SpectralPoint& p, int n,
                           DispersionMethod method = DispersionMethod::automatic);

// The analytic function obtained by continuing D across the axis: the principal
// branch for Re lambda >= 0 and the second-sheet branch for Re lambda < 0.
cplx continued_dispersion(const AnalyticDistribution& dist, cplx lambda, int n = 0,
                          DispersionMethod method = DispersionMethod::automatic);

// Raw Cauchy integral (-1)^n n! int g(w) / (lambda - i w)^(n+1) dw on the real line.
// It is the principal branch for Re lambda > 0 and a different function for Re lambda < 0.
cplx cauchy_integral(const AnalyticDistribution& dist, cplx lambda, int n = 0, double abs_tol = 1e-12);

// Dispersion of harmonic j: int g(w) / (lambda - i j w) dw, continued, n-th derivative.
cplx harmonic_dispersion(const AnalyticDistribution& dist, int harmonic, cplx lambda, int n = 0,
                         DispersionMethod method = DispersionMethod::automatic);

// Right-hand side of D_j(lambda) = 1 / (i j K f_j): 2/K for j = 1, 1/(K h) for j = 2.
double eigen_target(int harmonic, double K, double h);

struct Root {
    cplx lambda;
    int multiplicity = 1;
    double residual = 0.0;
    bool on_axis = false;
};

struct EigenvalueSearch {
    std::vector<Root> eigenvalues;  // Re lambda > 0
    std::vector<Root> boundary;     // |Re lambda| <= kAxisTol, not eigenvalues
};

struct SearchOptions {
    int seeds_re = 20;
    int seeds_im = 40;
    double residual_tol = 1e-10;
    double merge_tol = 1e-8;
    DispersionMethod method = DispersionMethod::automatic;
};

EigenvalueSearch find_eigenvalues(const AnalyticDistribution& dist, double K, int harmonic, double h,
                                  const SearchOptions& opt = {});

struct Region {
    double re_min, re_max, im_min, im_max;
};

struct GeneralizedRoot {
    SpectralPoint point;
    double residual = 0.0;
};

// Default rectangle for second-sheet searches: -reach <= Re <= 0 (capped at 1 for the closed form).
Region default_second_sheet_region(const AnalyticDistribution& dist);

std::vector<GeneralizedRoot> find_generalized_eigenvalues(const AnalyticDistribution& dist, double K,
                                                          const Region& region, const SearchOptions& opt = {});

struct BranchSample {
    double K;
    SpectralPoint point;
    double residual;
};

struct EigenvalueBranch {
    int harmonic = 1;
    std::vector<BranchSample> samples;
    std::vector<double> crossings;  // K values where Re lambda changes sign
    double step_bound = 0.0;
};

struct BranchOptions {
    int harmonic = 1;
    double h = 0.0;
    double max_jump = 0.25;      // |lambda_{i+1} - lambda_i| bound
    double residual_tol = 1e-11;
    double crossing_tol = 1e-10;
    int min_halvings = 0;
    int max_halvings = 30;
    DispersionMethod method = DispersionMethod::automatic;
};

EigenvalueBranch track_branch(const AnalyticDistribution& dist, double K_start, double K_end,
                              const SpectralPoint& seed, int steps, const BranchOptions& opt = {});

struct AssumptionFlags {
    bool a1 = false, a2 = false, a3 = false, a4 = false, a5 = false;
    std::vector<std::string> diagnostics;
    bool all() const { return a1 && a2 && a3 && a4 && a5; }
};

struct TransitionReport {
    std::vector<std::pair<double, double>> candidates;  // (y_j, K_j)
    double y_c = 0.0;
    double K_c = 0.0;
    std::optional<double> K_c2;
    cplx dlambda_dK;
    double h = 0.0;
    AssumptionFlags flags;
};

// Candidates, y_c, K_c and the onset speed. Throws DegenerateTie or AssumptionViolated
// (no Hilbert zero found).
TransitionReport transition_point(const AnalyticDistribution& dist);

// transition_point plus the assumption flags; never throws for mathematical reasons.
TransitionReport verify_assumptions(const AnalyticDistribution& dist, double h);

struct PairingValue {
    int m = 0, n = 0;
    cplx value;
};

// Pairings as right-limits at +-i y_c from dispersion derivatives by partial fractions.
PairingValue pairing(const AnalyticDistribution& dist, const TransitionReport& report, int m, int n);

// Same pairings by direct quadrature on a contour shifted into the upper strip.
cplx pairing_quadrature(const AnalyticDistribution& dist, double y_c, int m, int n, double abs_tol = 1e-12);

}  // namespace kdhopf
