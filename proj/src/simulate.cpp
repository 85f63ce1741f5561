#include "kdhopf/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/legendre.hpp>

#include "kdhopf/errors.hpp"
#include "kdhopf/rk4.hpp"

namespace kdhopf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const cplx I(0.0, 1.0);

long step_count(double t_end, double dt) { return std::lround(std::ceil(t_end / dt - 1e-9)); }

void check_run(double t_end, double dt, int stride) {
    if (!(dt > 0.0) || !(t_end >= 0.0) || stride < 1) throw DomainError("need dt > 0, t_end >= 0, record_stride >= 1");
}

double wrap_phase(double x) {
    double r = std::fmod(x, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r;
}

// Gauss-Legendre rule on (-1, 1), ascending nodes.
void gauss_legendre(int M, std::vector<double>& x, std::vector<double>& w) {
    const auto pos = boost::math::legendre_p_zeros<double>(M);
    x.clear();
    for (auto it = pos.rbegin(); it != pos.rend(); ++it) {
        if (*it != 0.0) x.push_back(-*it);
    }
    for (double z : pos) x.push_back(z);
    std::sort(x.begin(), x.end());
    w.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = boost::math::legendre_p_prime(M, x[i]);
        w[i] = 2.0 / ((1.0 - x[i] * x[i]) * d * d);
    }
}

// Exponential time-differencing RK4 coefficients for dZ/dt = L Z + N with L = i j omega - damping.
// The forcing on far-tail nodes rotates many times per step; treating L exactly keeps those
// nodes from polluting the moments.
struct Etd {
    std::vector<cplx> E, E2, Q, f1, f2, f3;
};

Etd make_etd(const GalerkinState& s, double dt, double nu, int order) {
    const int M = s.M();
    const std::size_t n = s.Z.size();
    Etd P;
    for (auto* v : {&P.E, &P.E2, &P.Q, &P.f1, &P.f2, &P.f3}) v->resize(n);
    constexpr int kCircle = 32;
    for (int j = 1; j <= s.J; ++j) {
        const double damp = nu * std::pow(static_cast<double>(j) / s.J, order);
        for (int k = 0; k < M; ++k) {
            const cplx L = I * static_cast<double>(j) * s.nodes.omega[k] - damp;
            const cplx z = L * dt;
            const std::size_t idx = static_cast<std::size_t>(j - 1) * M + k;
            P.E[idx] = std::exp(z);
            P.E2[idx] = std::exp(0.5 * z);
            auto coeffs = [](cplx w, cplx& q, cplx& a, cplx& b, cplx& c) {
                const cplx ew = std::exp(w), ew2 = std::exp(0.5 * w), w3 = w * w * w;
                q = (ew2 - 1.0) / w;
                a = (-4.0 - w + ew * (4.0 - 3.0 * w + w * w)) / w3;
                b = (2.0 + w + ew * (w - 2.0)) / w3;
                c = (-4.0 - 3.0 * w - w * w + ew * (4.0 - w)) / w3;
            };
            cplx q = 0.0, a = 0.0, b = 0.0, c = 0.0;
            if (std::abs(z) >= 1.0) {
                coeffs(z, q, a, b, c);
            } else {
                // Mean over a circle around z avoids the cancellation of the closed forms.
                for (int m = 0; m < kCircle; ++m) {
                    cplx qq, aa, bb, cc;
                    coeffs(z + std::polar(1.0, 2.0 * std::numbers::pi * (m + 0.5) / kCircle), qq, aa, bb, cc);
                    q += qq;
                    a += aa;
                    b += bb;
                    c += cc;
                }
                q /= double(kCircle);
                a /= double(kCircle);
                b /= double(kCircle);
                c /= double(kCircle);
            }
            P.Q[idx] = dt * q;
            P.f1[idx] = dt * a;
            P.f2[idx] = dt * b;
            P.f3[idx] = dt * c;
        }
    }
    return P;
}

std::pair<cplx, cplx> moments(const GalerkinState& s, const std::vector<cplx>& Z) {
    const int M = s.M();
    cplx e1 = 0.0, e2 = 0.0;
    for (int k = 0; k < M; ++k) e1 += s.nodes.weight[k] * Z[k];
    if (s.J >= 2) {
        for (int k = 0; k < M; ++k) e2 += s.nodes.weight[k] * Z[M + k];
    }
    return {e1, e2};
}

// Coupling terms of the Fourier hierarchy restricted to l = +-1, +-2, with Z_0 = 1,
// Z_{-j} = conj(Z_j) and Z_j = 0 beyond J.
void nonlinear(const ModelParams& p, const GalerkinState& s, const std::vector<cplx>& Z, std::vector<cplx>& out,
               bool linear_only) {
    const int M = s.M();
    const int J = s.J;
    auto [e1, e2] = moments(s, Z);
    if (linear_only) {
        const cplx c = 0.5 * p.K * e1;
        for (int k = 0; k < M; ++k) out[k] = c;
        return;
    }
    const cplx e1b = std::conj(e1), e2b = std::conj(e2);
    const double h = p.h;
    for (int j = 1; j <= J; ++j) {
        const double pre = 0.5 * j * p.K;
        const cplx* lo1 = j >= 2 ? &Z[static_cast<std::size_t>(j - 2) * M] : nullptr;
        const cplx* up1 = j + 1 <= J ? &Z[static_cast<std::size_t>(j) * M] : nullptr;
        const cplx* lo2 = j >= 3 ? &Z[static_cast<std::size_t>(j - 3) * M] : nullptr;
        const cplx* up2 = j + 2 <= J ? &Z[static_cast<std::size_t>(j + 1) * M] : nullptr;
        cplx* o = &out[static_cast<std::size_t>(j - 1) * M];
        for (int k = 0; k < M; ++k) {
            const cplx l1 = lo1 ? lo1[k] : cplx(1.0);
            const cplx u1 = up1 ? up1[k] : cplx(0.0);
            cplx acc = e1 * l1 - e1b * u1;
            if (h != 0.0) {
                const cplx l2 = j == 1 ? std::conj(Z[k]) : (j == 2 ? cplx(1.0) : lo2[k]);
                const cplx u2 = up2 ? up2[k] : cplx(0.0);
                acc += h * (e2 * l2 - e2b * u2);
            }
            o[k] = pre * acc;
        }
    }
}

OrderParameterSeries run_galerkin(const ModelParams& p, GalerkinState& s, double t_end, double dt, int stride,
                                  const GalerkinOptions& opt, bool linear_only) {
    check_run(t_end, dt, stride);
    const int M = s.M();
    if (M < 1 || s.J < 1 || s.Z.size() != static_cast<std::size_t>(M) * s.J) throw DomainError("malformed Galerkin state");
    if (s.nodes.rule == NodeRule::shifted_contour && p.h != 0.0 && !linear_only) {
        throw DomainError("shifted-contour nodes need h = 0: conj(Z_1) is not analytic off the axis");
    }
    double nu = opt.filter_strength;
    if (nu < 0.0) nu = (s.nodes.rule == NodeRule::shifted_contour || linear_only) ? 0.0 : 5.0;
    const Etd P = make_etd(s, dt, nu, opt.filter_order);

    const std::size_t n = s.Z.size();
    std::vector<cplx> Nu(n), Na(n), Nb(n), Nc(n), ya(n), yb(n), yc(n);
    std::vector<cplx>& y = s.Z;

    OrderParameterSeries out;
    out.source = linear_only ? SeriesSource::linearized : SeriesSource::galerkin;
    auto record = [&](double t) {
        auto [e1, e2] = moments(s, y);
        out.times.push_back(t);
        out.eta1.push_back(e1);
        out.eta2.push_back(e2);
    };
    record(0.0);
    const long steps = step_count(t_end, dt);
    for (long st = 1; st <= steps; ++st) {
        // Cox-Matthews ETDRK4.
        nonlinear(p, s, y, Nu, linear_only);
        for (std::size_t i = 0; i < n; ++i) ya[i] = P.E2[i] * y[i] + P.Q[i] * Nu[i];
        nonlinear(p, s, ya, Na, linear_only);
        for (std::size_t i = 0; i < n; ++i) yb[i] = P.E2[i] * y[i] + P.Q[i] * Na[i];
        nonlinear(p, s, yb, Nb, linear_only);
        for (std::size_t i = 0; i < n; ++i) yc[i] = P.E2[i] * ya[i] + P.Q[i] * (2.0 * Nb[i] - Nu[i]);
        nonlinear(p, s, yc, Nc, linear_only);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = P.E[i] * y[i] + P.f1[i] * Nu[i] + 2.0 * P.f2[i] * (Na[i] + Nb[i]) + P.f3[i] * Nc[i];
        }
        if (st % stride == 0 || st == steps) {
            record(st * dt);
            if (!std::isfinite(out.eta1.back().real()) || !std::isfinite(out.eta1.back().imag())) {
                throw Overflow("Galerkin state became non-finite at t = " + std::to_string(st * dt));
            }
        }
    }
    if (s.J >= 2) {
        double top = 0.0, first = 0.0;
        for (int k = 0; k < M; ++k) {
            const double aw = std::abs(s.nodes.weight[k]);
            first += aw * std::abs(s.at(1, k));
            top += aw * std::abs(s.at(s.J, k));
        }
        out.tail_ratio = first > 0.0 ? top / first : 0.0;
        out.truncation_warning = out.tail_ratio > 0.1;
    }
    return out;
}

}  // namespace

const char* to_string(SeriesSource s) {
    switch (s) {
        case SeriesSource::finite_n: return "finite_n";
        case SeriesSource::galerkin: return "galerkin";
        case SeriesSource::oa_oracle: return "oa_oracle";
        default: return "linearized";
    }
}

const char* to_string(NodeRule r) {
    switch (r) {
        case NodeRule::real_line: return "real_line";
        case NodeRule::shifted_contour: return "shifted_contour";
        default: return "automatic";
    }
}

std::pair<cplx, cplx> order_parameters(const std::vector<double>& theta) {
    double c1 = 0, s1 = 0, c2 = 0, s2 = 0;
    for (double t : theta) {
        const double c = std::cos(t), s = std::sin(t);
        c1 += c;
        s1 += s;
        c2 += c * c - s * s;
        s2 += 2.0 * c * s;
    }
    const double n = static_cast<double>(theta.size());
    return {cplx(c1 / n, s1 / n), cplx(c2 / n, s2 / n)};
}

OrderParameterSeries simulate_finite_n(const ModelParams& p, const std::vector<double>& omegas,
                                       const std::vector<double>& theta0, double t_end, double dt,
                                       int record_stride) {
    check_run(t_end, dt, record_stride);
    const std::size_t N = omegas.size();
    if (N < 2 || theta0.size() != N) throw DomainError("finite-N run needs N >= 2 phases matching the frequencies");

    std::vector<double> th(N), y(N), k1(N), k2(N), k3(N), k4(N), cs(N), sn(N);
    for (std::size_t i = 0; i < N; ++i) th[i] = wrap_phase(theta0[i]);
    const double K = p.K, h = p.h;
    const double invN = 1.0 / static_cast<double>(N);

    // Order-parameter form: one pass for eta_1, eta_2, one pass for the velocities.
    auto rhs = [&](const std::vector<double>& x, std::vector<double>& out) {
        double c1 = 0, s1 = 0, c2 = 0, s2 = 0;
        for (std::size_t i = 0; i < N; ++i) {
            const double c = std::cos(x[i]), s = std::sin(x[i]);
            cs[i] = c;
            sn[i] = s;
            c1 += c;
            s1 += s;
            c2 += c * c - s * s;
            s2 += 2.0 * c * s;
        }
        c1 *= invN;
        s1 *= invN;
        c2 *= invN;
        s2 *= invN;
        for (std::size_t i = 0; i < N; ++i) {
            const double c = cs[i], s = sn[i];
            const double first = s1 * c - c1 * s;
            const double second = s2 * (c * c - s * s) - c2 * (2.0 * c * s);
            out[i] = omegas[i] + K * (first + h * second);
        }
    };

    OrderParameterSeries out;
    out.source = SeriesSource::finite_n;
    auto record = [&](double t) {
        auto [e1, e2] = order_parameters(th);
        out.times.push_back(t);
        out.eta1.push_back(e1);
        out.eta2.push_back(e2);
    };
    record(0.0);
    const long steps = step_count(t_end, dt);
    for (long st = 1; st <= steps; ++st) {
        rhs(th, k1);
        for (std::size_t i = 0; i < N; ++i) y[i] = th[i] + 0.5 * dt * k1[i];
        rhs(y, k2);
        for (std::size_t i = 0; i < N; ++i) y[i] = th[i] + 0.5 * dt * k2[i];
        rhs(y, k3);
        for (std::size_t i = 0; i < N; ++i) y[i] = th[i] + dt * k3[i];
        rhs(y, k4);
        for (std::size_t i = 0; i < N; ++i) {
            th[i] = wrap_phase(th[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
        }
        if (st % record_stride == 0 || st == steps) record(st * dt);
    }
    return out;
}

GalerkinNodes make_galerkin_nodes(const AnalyticDistribution& dist, int M, NodeRule rule, double sigma) {
    if (M < 2) throw DomainError("Galerkin needs M >= 2 nodes");
    if (rule == NodeRule::automatic) rule = NodeRule::real_line;
    if (rule == NodeRule::shifted_contour && !(sigma > 0.0 && sigma <= dist.strip_width())) {
        throw DomainError("contour shift must lie in (0, strip_width]");
    }
    std::vector<double> x, wx;
    gauss_legendre(M, x, wx);
    const double c = dist.scale();
    const double hp = std::numbers::pi / 2;
    GalerkinNodes nd;
    nd.rule = rule;
    nd.sigma = rule == NodeRule::shifted_contour ? sigma : 0.0;
    cplx total = 0.0;
    for (int i = 0; i < M; ++i) {
        const double u = hp * x[i];
        const double cu = std::cos(u);
        const double t = c * std::tan(u);
        const double jac = hp * wx[i] * c / (cu * cu);
        const cplx w = rule == NodeRule::shifted_contour ? cplx(t, sigma) : cplx(t, 0.0);
        const cplx g = rule == NodeRule::shifted_contour ? dist.density(w) : cplx(dist.density(t));
        nd.omega.push_back(w);
        nd.weight.push_back(g * jac);
        total += g * jac;
    }
    for (auto& w : nd.weight) w /= total;
    return nd;
}

GalerkinState uniform_galerkin_state(GalerkinNodes nodes, int J, cplx a) {
    if (J < 1) throw DomainError("Galerkin needs J >= 1");
    GalerkinState s;
    s.J = J;
    s.nodes = std::move(nodes);
    s.Z.assign(static_cast<std::size_t>(J) * s.nodes.omega.size(), cplx(0.0));
    for (int k = 0; k < s.M(); ++k) s.at(1, k) = a;
    return s;
}

NodeRule resolve_rule(const ModelParams& p, const GalerkinOptions& opt) {
    if (opt.rule != NodeRule::automatic) return opt.rule;
    return p.h == 0.0 ? NodeRule::shifted_contour : NodeRule::real_line;
}

OrderParameterSeries simulate_galerkin(const ModelParams& p, GalerkinState& state, double t_end, double dt,
                                       int record_stride, const GalerkinOptions& opt) {
    if (state.J < 2) throw DomainError("simulate_galerkin needs J >= 2");
    return run_galerkin(p, state, t_end, dt, record_stride, opt, false);
}

OrderParameterSeries simulate_galerkin(const ModelParams& p, const AnalyticDistribution& dist, int M, int J,
                                       cplx Z1_0, double t_end, double dt, int record_stride,
                                       const GalerkinOptions& opt) {
    GalerkinState s = uniform_galerkin_state(make_galerkin_nodes(dist, M, resolve_rule(p, opt), opt.sigma), J, Z1_0);
    return simulate_galerkin(p, s, t_end, dt, record_stride, opt);
}

OrderParameterSeries simulate_linearized(const ModelParams& p, const AnalyticDistribution& dist, int M, cplx Z1_0,
                                         double t_end, double dt, int record_stride, const GalerkinOptions& opt) {
    // The linear first-harmonic problem never involves conj(Z_1), so the contour is always valid.
    const NodeRule rule = opt.rule == NodeRule::automatic ? NodeRule::shifted_contour : opt.rule;
    GalerkinState s = uniform_galerkin_state(make_galerkin_nodes(dist, M, rule, opt.sigma), 1, Z1_0);
    return run_galerkin(p, s, t_end, dt, record_stride, opt, true);
}

OrderParameterSeries ott_antonsen_oracle(double omega0, double K, std::array<cplx, 2> z0, double t_end, double dt,
                                         int record_stride) {
    check_run(t_end, dt, record_stride);
    // z_k = a(+-omega0 + i): residues of the two Lorentzian halves under the ansatz Z_j = a^j.
    auto f = [&](double, const std::array<cplx, 2>& z) {
        const cplx s = z[0] + z[1];
        return std::array<cplx, 2>{(I * omega0 - 1.0) * z[0] + 0.25 * K * (s - std::conj(s) * z[0] * z[0]),
                                   (-I * omega0 - 1.0) * z[1] + 0.25 * K * (s - std::conj(s) * z[1] * z[1])};
    };
    OrderParameterSeries out;
    out.source = SeriesSource::oa_oracle;
    std::array<cplx, 2> z = z0;
    auto record = [&](double t) {
        const cplx e1 = 0.5 * (z[0] + z[1]);
        out.times.push_back(t);
        out.eta1.push_back(e1);
        out.eta2.push_back(0.5 * (z[0] * z[0] + z[1] * z[1]));
    };
    record(0.0);
    const long steps = step_count(t_end, dt);
    for (long st = 1; st <= steps; ++st) {
        z = rk4_step(f, (st - 1) * dt, z, dt);
        if (st % record_stride == 0 || st == steps) record(st * dt);
    }
    return out;
}

}  // namespace kdhopf
