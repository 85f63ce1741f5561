#include "kdhopf/reduced_ode.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kdhopf/errors.hpp"
#include "kdhopf/rk4.hpp"

namespace kdhopf {

namespace {

const cplx I(0.0, 1.0);

// e^{-i arg(a)} with arg(0) := 0, the continuous extension of the field at the origin.
cplx unit_conj_phase(cplx a) {
    const double r = std::abs(a);
    return r == 0.0 ? cplx(1.0) : std::conj(a) / r;
}

void check_step(double t_end, double dt, int stride) {
    if (!(dt > 0.0) || !(t_end >= 0.0) || stride < 1) throw DomainError("need dt > 0, t_end >= 0, stride >= 1");
}

long step_count(double t_end, double dt) { return std::lround(std::ceil(t_end / dt - 1e-9)); }

}  // namespace

const char* to_string(SystemKind k) {
    switch (k) {
        case SystemKind::full_sine: return "full_sine";
        case SystemKind::full_second_harmonic: return "full_second_harmonic";
        case SystemKind::polar: return "polar";
        case SystemKind::averaged_sine: return "averaged_sine";
        default: return "averaged_second_harmonic";
    }
}

double default_reduced_dt(const CmCoefficients& c) { return std::min(0.01, 0.05 / c.y_c); }

double default_reduced_t_end(const CmCoefficients& c, double epsilon) {
    const double re = c.kind == CmKind::sine ? c.p1.real() : c.q1.real();
    return 50.0 / std::abs(epsilon * re);
}

CenterState center_manifold_field(const CmCoefficients& c, double eps, const CenterState& s) {
    const cplx ap = s.alpha_plus;
    const cplx am = s.alpha_minus;
    const cplx lin = ap + am;
    const double y = c.y_c;
    if (c.kind == CmKind::sine) {
        const cplx bar = std::conj(ap) + std::conj(am);
        return {I * y * ap + c.p1 * eps * lin + bar * (c.p2 * ap * ap + c.p3 * am * am + c.p4 * ap * am),
                -I * y * am + std::conj(c.p1) * eps * lin +
                    bar * (std::conj(c.p2) * am * am + std::conj(c.p3) * ap * ap + std::conj(c.p4) * ap * am)};
    }
    return {I * y * ap + c.q1 * eps * lin + (c.q2 * ap * ap + c.q3 * am * am) * unit_conj_phase(ap),
            -I * y * am + std::conj(c.q1) * eps * lin +
                (c.q2 * am * am + std::conj(c.q3) * ap * ap) * unit_conj_phase(am)};
}

ReducedTrajectory integrate_center_manifold(const CmCoefficients& c, double epsilon, const CenterState& init,
                                            double t_end, double dt, int record_stride) {
    check_step(t_end, dt, record_stride);
    ReducedTrajectory tr;
    tr.kind = c.kind == CmKind::sine ? SystemKind::full_sine : SystemKind::full_second_harmonic;
    auto f = [&](double, const std::array<cplx, 2>& y) {
        const CenterState d = center_manifold_field(c, epsilon, {y[0], y[1]});
        return std::array<cplx, 2>{d.alpha_plus, d.alpha_minus};
    };
    std::array<cplx, 2> y{init.alpha_plus, init.alpha_minus};
    const long n = step_count(t_end, dt);
    tr.times.push_back(0.0);
    tr.states.push_back(init);
    for (long i = 1; i <= n; ++i) {
        y = rk4_step(f, (i - 1) * dt, y, dt);
        if (!(std::abs(y[0]) <= kReducedOverflow && std::abs(y[1]) <= kReducedOverflow)) {
            throw Overflow("reduced trajectory exceeded |alpha| = 10 at t = " + std::to_string(i * dt));
        }
        if (i % record_stride == 0 || i == n) {
            tr.times.push_back(i * dt);
            tr.states.push_back({y[0], y[1]});
        }
    }
    return tr;
}

ReducedTrajectory integrate_averaged(const CmCoefficients& c, double epsilon, double r_plus0, double r_minus0,
                                     double t_end, double dt, int record_stride) {
    check_step(t_end, dt, record_stride);
    if (r_plus0 < 0.0 || r_minus0 < 0.0) throw DomainError("averaged radii must be nonnegative");
    ReducedTrajectory tr;
    const bool sine = c.kind == CmKind::sine;
    tr.kind = sine ? SystemKind::averaged_sine : SystemKind::averaged_second_harmonic;
    const double a = epsilon * (sine ? c.p1.real() : c.q1.real());
    const double b = sine ? c.p2.real() : c.q2.real();
    auto f = [&](double, const std::array<double, 2>& r) {
        std::array<double, 2> d;
        for (int k = 0; k < 2; ++k) d[k] = a * r[k] + b * (sine ? r[k] * r[k] * r[k] : r[k] * r[k]);
        return d;
    };
    std::array<double, 2> r{r_plus0, r_minus0};
    const long n = step_count(t_end, dt);
    tr.times.push_back(0.0);
    tr.states.push_back({r[0], r[1]});
    for (long i = 1; i <= n; ++i) {
        r = rk4_step(f, (i - 1) * dt, r, dt);
        if (!(std::abs(r[0]) <= kReducedOverflow && std::abs(r[1]) <= kReducedOverflow)) {
            throw Overflow("averaged trajectory exceeded r = 10 at t = " + std::to_string(i * dt));
        }
        r[0] = std::max(r[0], 0.0);
        r[1] = std::max(r[1], 0.0);
        if (i % record_stride == 0 || i == n) {
            tr.times.push_back(i * dt);
            tr.states.push_back({r[0], r[1]});
        }
    }
    return tr;
}

ReducedTrajectory to_polar(const ReducedTrajectory& full) {
    if (full.kind != SystemKind::full_sine && full.kind != SystemKind::full_second_harmonic) {
        throw DomainError("polar form needs a full centre-manifold trajectory");
    }
    ReducedTrajectory p;
    p.kind = SystemKind::polar;
    p.times = full.times;
    for (const auto& s : full.states) {
        // alpha_+- = r_+- e^{+-i psi} up to the common rotation.
        double psi = 0.5 * (std::arg(s.alpha_plus) - std::arg(s.alpha_minus));
        psi = std::remainder(psi, std::numbers::pi);
        p.polar.push_back({psi, std::abs(s.alpha_plus), std::abs(s.alpha_minus)});
    }
    return p;
}

}  // namespace kdhopf
