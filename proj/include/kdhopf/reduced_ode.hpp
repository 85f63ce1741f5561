#pragma once

#include <array>
#include <vector>

#include "kdhopf/center_manifold.hpp"

namespace kdhopf {

struct CenterState {
    cplx alpha_plus;
    cplx alpha_minus;
};

enum class SystemKind { full_sine, full_second_harmonic, polar, averaged_sine, averaged_second_harmonic };

const char* to_string(SystemKind k);

// states hold (alpha_+, alpha_-) for the full systems; radii are stored as
// real parts of the same pair for the averaged systems; polar holds (psi, r_+, r_-).
struct ReducedTrajectory {
    SystemKind kind = SystemKind::full_sine;
    std::vector<double> times;
    std::vector<CenterState> states;
    std::vector<std::array<double, 3>> polar;
};

// |alpha| beyond this means the trajectory left the small-amplitude regime.
inline constexpr double kReducedOverflow = 10.0;

double default_reduced_dt(const CmCoefficients& c);
double default_reduced_t_end(const CmCoefficients& c, double epsilon);

// Right-hand side of the truncated centre-manifold system.
CenterState center_manifold_field(const CmCoefficients& c, double epsilon, const CenterState& s);

ReducedTrajectory integrate_center_manifold(const CmCoefficients& c, double epsilon, const CenterState& init,
                                            double t_end, double dt, int record_stride = 1);

ReducedTrajectory integrate_averaged(const CmCoefficients& c, double epsilon, double r_plus0, double r_minus0,
                                     double t_end, double dt, int record_stride = 1);

// (psi, r_+, r_-) with psi = (arg(alpha_+) - arg(alpha_-)) / 2, defined modulo pi.
ReducedTrajectory to_polar(const ReducedTrajectory& full);

}  // namespace kdhopf
