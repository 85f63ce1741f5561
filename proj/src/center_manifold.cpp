#include "kdhopf/center_manifold.hpp"

#include <cmath>

#include "kdhopf/errors.hpp"

namespace kdhopf {

namespace {

const cplx I(0.0, 1.0);

struct OnsetDerivatives {
    TransitionReport rep;
    cplx d1, d2;
};

OnsetDerivatives onset(const AnalyticDistribution& dist, double h) {
    OnsetDerivatives o;
    o.rep = verify_assumptions(dist, h);
    const auto& f = o.rep.flags;
    if (!(f.a3 && f.a4 && f.a5)) {
        std::string why = "center-manifold coefficients need A3-A5";
        for (const auto& d : f.diagnostics) why += "; " + d;
        throw AssumptionViolated(why);
    }
    const SpectralPoint at{cplx(0.0, o.rep.y_c), Sheet::principal};
    o.d1 = dispersion_derivative(dist, at, 1);
    o.d2 = dispersion_derivative(dist, at, 2);
    return o;
}

Stability classify(double a, double b) {
    if (a < 0 && b < 0) return Stability::stable;
    if (a > 0 && b > 0) return Stability::unstable;
    return Stability::saddle;
}

}  // namespace

const char* to_string(CmKind k) { return k == CmKind::sine ? "sine" : "second_harmonic"; }

const char* to_string(Stability s) {
    switch (s) {
        case Stability::stable: return "stable";
        case Stability::saddle: return "saddle";
        default: return "unstable";
    }
}

const char* to_string(Scaling s) { return s == Scaling::sqrt_epsilon ? "sqrt(epsilon)" : "linear(epsilon)"; }

CmCoefficients coefficients_sine(const AnalyticDistribution& dist) {
    const auto o = onset(dist, 0.0);
    const double yc = o.rep.y_c;
    const double Kc = o.rep.K_c;
    CmCoefficients c;
    c.kind = CmKind::sine;
    c.y_c = yc;
    c.K_c = Kc;
    c.p1 = -2.0 / (Kc * Kc * o.d1);
    c.p2 = Kc * Kc * o.d2 / (8.0 * o.d1);
    c.p3 = -Kc * Kc * std::conj(o.d1) / (8.0 * I * yc * o.d1);
    c.p4 = Kc * Kc / (4.0 * I * yc);
    return c;
}

CmCoefficients coefficients_second_harmonic(const AnalyticDistribution& dist, double h) {
    if (h == 0.0) throw AssumptionViolated("second-harmonic coefficients need h != 0");
    if (std::abs(h) < kMinSecondHarmonic) {
        throw AssumptionViolated("|h| below " + std::to_string(kMinSecondHarmonic) +
                                 ": the quadratic ordering of the reduction does not apply");
    }
    const auto o = onset(dist, h);
    if (!o.rep.flags.a1) throw AssumptionViolated("second-harmonic coefficients need A1 (h < 1)");
    const double Kc = o.rep.K_c;
    CmCoefficients c;
    c.kind = CmKind::second_harmonic;
    c.y_c = o.rep.y_c;
    c.K_c = Kc;
    c.h = h;
    c.q1 = -2.0 / (Kc * Kc * o.d1);
    c.q2 = h * Kc / (1.0 - h);
    c.q3 = c.q2 * std::conj(o.d1) / o.d1;
    return c;
}

std::vector<FixedPoint> averaged_fixed_points(const CmCoefficients& c, double epsilon) {
    const bool sine = c.kind == CmKind::sine;
    const double lin = epsilon * (sine ? c.p1.real() : c.q1.real());
    double rstar = 0.0;
    bool exists = false;
    if (sine) {
        const double rad = -lin / c.p2.real();
        exists = rad > 0.0;
        if (exists) rstar = std::sqrt(rad);
    } else {
        rstar = -lin / c.q2.real();
        exists = rstar > 0.0;
    }
    // At lin = 0 the origin is decided by the leading nonlinear term.
    const double nonlinear = sine ? c.p2.real() : c.q2.real();
    std::vector<FixedPoint> out;
    if (lin != 0.0) out.push_back({0.0, 0.0, classify(lin, lin)});
    else out.push_back({0.0, 0.0, nonlinear < 0 ? Stability::stable : Stability::unstable});
    if (exists) {
        const double m = sine ? -2.0 : -1.0;  // diagonal Jacobian factor on a nonzero radius
        out.push_back({rstar, 0.0, classify(m * lin, lin)});
        out.push_back({0.0, rstar, classify(lin, m * lin)});
        out.push_back({rstar, rstar, classify(m * lin, m * lin)});
    }
    return out;
}

OrbitPrediction predict_orbit(const CmCoefficients& c, double epsilon) {
    OrbitPrediction p;
    p.epsilon = epsilon;
    p.frequency = c.y_c;
    p.frequency_band = std::abs(epsilon);
    if (c.kind == CmKind::sine) {
        p.scaling = Scaling::sqrt_epsilon;
        const double rad = -epsilon * c.p1.real() / c.p2.real();
        p.exists = rad > 0.0;
        p.r_star = p.exists ? std::sqrt(rad) : 0.0;
        p.stable = p.exists && epsilon > 0.0 && c.p2.real() < 0.0;
    } else {
        if (std::abs(c.h) < kMinSecondHarmonic) throw AssumptionViolated("|h| below the second-harmonic guard");
        p.scaling = Scaling::linear_epsilon;
        const double r = -epsilon * c.q1.real() / c.q2.real();
        p.exists = r > 0.0;
        p.r_star = p.exists ? r : 0.0;
        p.stable = p.exists && epsilon > 0.0 && c.q2.real() < 0.0;
    }
    p.amplitude = 2.0 * p.r_star;
    return p;
}

}  // namespace kdhopf
