#pragma once

#include <complex>
#include <string>
#include <vector>

#include "kdhopf/spectral.hpp"

namespace kdhopf {

enum class CmKind { sine, second_harmonic };

const char* to_string(CmKind k);

struct CmCoefficients {
    CmKind kind = CmKind::sine;
    double y_c = 0.0;
    double K_c = 0.0;
    double h = 0.0;
    cplx p1, p2, p3, p4;  // sine
    cplx q1, q2, q3;      // second harmonic
};

// The quadratic ordering used for h != 0 needs the quadratic term to dominate.
inline constexpr double kMinSecondHarmonic = 0.05;

CmCoefficients coefficients_sine(const AnalyticDistribution& dist);
CmCoefficients coefficients_second_harmonic(const AnalyticDistribution& dist, double h);

enum class Stability { stable, saddle, unstable };

const char* to_string(Stability s);

struct FixedPoint {
    double r_plus = 0.0;
    double r_minus = 0.0;
    Stability stability = Stability::stable;
};

std::vector<FixedPoint> averaged_fixed_points(const CmCoefficients& c, double epsilon);

enum class Scaling { sqrt_epsilon, linear_epsilon };

const char* to_string(Scaling s);

struct OrbitPrediction {
    double epsilon = 0.0;
    bool exists = false;
    bool stable = false;
    double r_star = 0.0;
    double amplitude = 0.0;
    double frequency = 0.0;
    // The O(epsilon) frequency shift is not computed; this is the band it lives in.
    double frequency_band = 0.0;
    std::string beta_free = "orbit phase beta is fixed by initial conditions, not predicted";
    Scaling scaling = Scaling::sqrt_epsilon;
};

OrbitPrediction predict_orbit(const CmCoefficients& c, double epsilon);

}  // namespace kdhopf
