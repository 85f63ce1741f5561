#include "kdhopf/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "kdhopf/errors.hpp"
#include "kdhopf/quadrature.hpp"

namespace kdhopf {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

// Below this |Re lambda| the quadrature route integrates on a contour shifted
// into the strip instead of the real line, where the kernel is nearly singular.
constexpr double kContourBand = 0.02;
constexpr double kQuadTol = 1e-12;

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

bool use_closed(const AnalyticDistribution& dist, DispersionMethod m) {
    if (m == DispersionMethod::closed_form) {
        if (!dist.has_closed_dispersion()) throw DomainError("closed-form dispersion not available for this family");
        return true;
    }
    return m == DispersionMethod::automatic && dist.has_closed_dispersion();
}

// (lambda+1)/((lambda+1)^2 + w0^2) = (1/2)[1/(u - i w0) + 1/(u + i w0)], u = lambda + 1.
cplx closed_dispersion(double w0, cplx lambda, int n) {
    const cplx u = lambda + 1.0;
    const cplx a = u - I * w0;
    const cplx b = u + I * w0;
    if (std::abs(a) < kPoleGuard || std::abs(b) < kPoleGuard) {
        throw PoleProximity("dispersion evaluated at a pole of its continuation: lambda = (" +
                            std::to_string(lambda.real()) + ", " + std::to_string(lambda.imag()) + ")");
    }
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return 0.5 * sign * factorial(n) * (std::pow(a, -(n + 1)) + std::pow(b, -(n + 1)));
}

// Same integral on Im w = sigma; equals the continued function for Re lambda > -sigma.
cplx shifted_integral(const AnalyticDistribution& dist, cplx lambda, int n, double sigma) {
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const double fac = sign * factorial(n);
    auto f = [&](double t) {
        const cplx k = lambda + sigma - I * t;
        return dist.density(cplx(t, sigma)) / std::pow(k, n + 1);
    };
    return fac * quad::real_line(f, lambda.imag(), dist.scale(), kQuadTol, "shifted dispersion integral");
}

cplx quadrature_continued(const AnalyticDistribution& dist, cplx lambda, int n) {
    const double x = lambda.real();
    if (x >= kContourBand) return cauchy_integral(dist, lambda, n, kQuadTol);
    if (x > -kContourBand) return shifted_integral(dist, lambda, n, dist.strip_width());
    // Second sheet away from the axis: real-line integral plus the continuation term
    // d^n/dlambda^n [2 pi g(-i lambda)] = 2 pi (-i)^n g^(n)(-i lambda).
    return cauchy_integral(dist, lambda, n, kQuadTol) +
           2.0 * kPi * std::pow(-I, n) * dist.density_derivative(-I * lambda, n);
}

struct NewtonOut {
    cplx z;
    double residual = std::numeric_limits<double>::infinity();
    bool ok = false;
};

// fdf(z) returns {F(z), F'(z)}; valid(z) restricts iterates to the admissible domain.
template <class FDF, class Valid>
NewtonOut newton(FDF&& fdf, Valid&& valid, cplx z, double tol, int max_iter = 100) {
    NewtonOut out{z};
    try {
        for (int it = 0; it < max_iter; ++it) {
            auto [f, df] = fdf(z);
            out.z = z;
            out.residual = std::abs(f);
            if (out.residual < tol) {
                out.ok = true;
                return out;
            }
            if (df == 0.0) return out;
            cplx step = f / df;
            const double cap = 0.5 * (1.0 + std::abs(z));
            if (std::abs(step) > cap) step *= cap / std::abs(step);
            const cplx zn = z - step;
            if (!valid(zn)) return out;
            if (std::abs(step) < 1e-15 * (1.0 + std::abs(z))) {
                auto [fn, dfn] = fdf(zn);
                (void)dfn;
                out.z = zn;
                out.residual = std::abs(fn);
                out.ok = out.residual < 100.0 * tol;
                return out;
            }
            z = zn;
        }
    } catch (const PoleProximity&) {
        return out;
    } catch (const QuadratureFailure&) {
        return out;
    }
    return out;
}

double max_abs_hilbert_zero(const AnalyticDistribution& dist) {
    const double r = dist.search_radius();
    double m = 0.0;
    for (double y : find_hilbert_zeros(dist, -r, r, 1e-8)) m = std::max(m, std::abs(y));
    return m;
}

void merge_root(std::vector<Root>& roots, const Root& r, double tol) {
    for (auto& q : roots) {
        if (std::abs(q.lambda - r.lambda) < tol) {
            if (r.multiplicity > q.multiplicity || (r.multiplicity == q.multiplicity && r.residual < q.residual)) q = r;
            return;
        }
    }
    roots.push_back(r);
}

bool near_root(const std::vector<Root>& roots, cplx z, double tol) {
    return std::any_of(roots.begin(), roots.end(), [&](const Root& q) { return std::abs(q.lambda - z) < tol; });
}

}  // namespace

const char* to_string(Sheet s) { return s == Sheet::principal ? "principal" : "second"; }

double second_sheet_reach(const AnalyticDistribution& dist, DispersionMethod method) {
    if (use_closed(dist, method)) return std::numeric_limits<double>::infinity();
    return dist.strip_width();
}

void check_sheet(const AnalyticDistribution& dist, const SpectralPoint& p, DispersionMethod method) {
    const double x = p.lambda.real();
    if (!std::isfinite(x) || !std::isfinite(p.lambda.imag())) throw DomainError("non-finite spectral point");
    if (p.sheet == Sheet::principal && x < -kAxisTol) {
        throw DomainError("principal-sheet point needs Re(lambda) >= 0");
    }
    if (p.sheet == Sheet::second) {
        if (x > kAxisTol) throw DomainError("second-sheet point needs Re(lambda) <= 0");
        if (x < -second_sheet_reach(dist, method)) {
            throw DomainError("second-sheet point lies beyond the strip of analyticity");
        }
    }
}

cplx cauchy_integral(const AnalyticDistribution& dist, cplx lambda, int n, double abs_tol) {
    if (n < 0 || n > 3) throw DomainError("dispersion derivative order must be in 0..3");
    if (std::abs(lambda.real()) < 1e-14) throw DomainError("real-line Cauchy integral is singular on the axis");
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    auto f = [&](double w) { return dist.density(w) / std::pow(lambda - I * w, n + 1); };
    return sign * factorial(n) * quad::real_line(f, lambda.imag(), dist.scale(), abs_tol, "dispersion integral");
}

cplx continued_dispersion(const AnalyticDistribution& dist, cplx lambda, int n, DispersionMethod method) {
    if (n < 0 || n > 3) throw DomainError("dispersion derivative order must be in 0..3");
    if (use_closed(dist, method)) return closed_dispersion(dist.omega0(), lambda, n);
    if (lambda.real() < -second_sheet_reach(dist, method)) {
        throw DomainError("continuation requested beyond the strip of analyticity");
    }
    return quadrature_continued(dist, lambda, n);
}

cplx dispersion(const AnalyticDistribution& dist, const SpectralPoint& p, DispersionMethod method) {
    return dispersion_derivative(dist, p, 0, method);
}

cplx dispersion_derivative(const AnalyticDistribution& dist, const SpectralPoint& p, int n, DispersionMethod method) {
    check_sheet(dist, p, method);
    // The principal sheet at an axis point means the right-limit, which the
    // continued function reproduces; tiny negative round-off is clamped to the axis.
    cplx lambda = p.lambda;
    if (p.sheet == Sheet::principal && lambda.real() < 0.0) lambda = {0.0, lambda.imag()};
    if (p.sheet == Sheet::second && lambda.real() > 0.0) lambda = {0.0, lambda.imag()};
    return continued_dispersion(dist, lambda, n, method);
}

cplx harmonic_dispersion(const AnalyticDistribution& dist, int harmonic, cplx lambda, int n, DispersionMethod method) {
    if (harmonic != 1 && harmonic != 2) throw DomainError("harmonic must be 1 or 2");
    const double j = harmonic;
    return std::pow(1.0 / j, n + 1) * continued_dispersion(dist, lambda / j, n, method);
}

double eigen_target(int harmonic, double K, double h) {
    if (!(K > 0.0)) throw DomainError("coupling K must be positive");
    if (harmonic == 1) return 2.0 / K;
    if (harmonic == 2) {
        if (h == 0.0) throw DomainError("harmonic 2 has no eigenvalue equation when h = 0");
        return 1.0 / (K * h);
    }
    throw DomainError("harmonic must be 1 or 2");
}

EigenvalueSearch find_eigenvalues(const AnalyticDistribution& dist, double K, int harmonic, double h,
                                  const SearchOptions& opt) {
    const double target = eigen_target(harmonic, K, h);
    const double j = harmonic;
    const double re_max = 10.0 * K;
    const double im_max = 3.0 * j * (max_abs_hilbert_zero(dist) + dist.scale());
    const double reach = second_sheet_reach(dist, opt.method);

    auto fdf = [&](cplx z) {
        return std::pair{harmonic_dispersion(dist, harmonic, z, 0, opt.method) - target,
                         harmonic_dispersion(dist, harmonic, z, 1, opt.method)};
    };
    auto valid = [&](cplx z) { return z.real() / j > -reach && std::abs(z) < 1e6; };

    std::vector<Root> found;
    for (int a = 0; a < opt.seeds_re; ++a) {
        for (int b = 0; b < opt.seeds_im; ++b) {
            // Columns cluster quadratically toward the axis, where roots are born.
            const double col = (a + 0.5) / opt.seeds_re;
            const cplx seed(re_max * col * col, -im_max + 2.0 * im_max * (b + 0.5) / opt.seeds_im);
            NewtonOut nw = newton(fdf, valid, seed, 1e-13, 200);
            if (!nw.ok || nw.residual >= opt.residual_tol) continue;
            Root r{nw.z, 1, nw.residual, false};
            // A nearly vanishing slope signals a double root; Newton then converges only
            // linearly, so polish on F' = 0 instead.
            const cplx slope = harmonic_dispersion(dist, harmonic, r.lambda, 1, opt.method);
            if (std::abs(slope) < 1e-3) {
                auto d2 = [&](cplx z) {
                    return std::pair{harmonic_dispersion(dist, harmonic, z, 1, opt.method),
                                     harmonic_dispersion(dist, harmonic, z, 2, opt.method)};
                };
                NewtonOut crit = newton(d2, valid, r.lambda, 1e-14, 100);
                if (crit.ok || crit.residual < 1e-6) {
                    const double res = std::abs(fdf(crit.z).first);
                    if (res < opt.residual_tol && crit.residual < 1e-6) r = Root{crit.z, 2, res, false};
                }
            }
            merge_root(found, r, r.multiplicity == 2 ? 1e-6 : opt.merge_tol);
        }
    }

    EigenvalueSearch out;
    for (auto& r : found) {
        if (std::abs(r.lambda.real()) <= kAxisTol) {
            r.on_axis = true;
            out.boundary.push_back(r);
        } else if (r.lambda.real() > 0.0) {
            out.eigenvalues.push_back(r);
        }
    }
    auto order = [](const Root& a, const Root& b) {
        return a.lambda.real() != b.lambda.real() ? a.lambda.real() > b.lambda.real() : a.lambda.imag() < b.lambda.imag();
    };
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), order);
    std::sort(out.boundary.begin(), out.boundary.end(), order);
    return out;
}

Region default_second_sheet_region(const AnalyticDistribution& dist) {
    const double reach = std::min(second_sheet_reach(dist), 1.0);
    const double im = 3.0 * (max_abs_hilbert_zero(dist) + dist.scale());
    return {-reach, 0.0, -im, im};
}

std::vector<GeneralizedRoot> find_generalized_eigenvalues(const AnalyticDistribution& dist, double K,
                                                          const Region& region, const SearchOptions& opt) {
    if (!(region.re_min < region.re_max) || !(region.im_min < region.im_max)) throw DomainError("empty search region");
    if (region.re_max > kAxisTol) throw DomainError("second-sheet region must satisfy Re(lambda) <= 0");
    const double reach = second_sheet_reach(dist, opt.method);
    if (region.re_min < -reach) throw DomainError("region extends beyond the strip of analyticity");
    const double target = eigen_target(1, K, 0.0);

    auto fdf = [&](cplx z) {
        return std::pair{continued_dispersion(dist, z, 0, opt.method) - target,
                         continued_dispersion(dist, z, 1, opt.method)};
    };
    auto valid = [&](cplx z) { return z.real() > -reach && std::abs(z) < 1e6; };
    auto inside = [&](cplx z) {
        return z.real() >= region.re_min - kAxisTol && z.real() <= region.re_max + kAxisTol &&
               z.imag() >= region.im_min && z.imag() <= region.im_max;
    };

    std::vector<Root> found;
    for (int a = 0; a < opt.seeds_re; ++a) {
        for (int b = 0; b < opt.seeds_im; ++b) {
            const cplx seed(region.re_min + (region.re_max - region.re_min) * (a + 0.5) / opt.seeds_re,
                            region.im_min + (region.im_max - region.im_min) * (b + 0.5) / opt.seeds_im);
            NewtonOut nw = newton(fdf, valid, seed, 1e-13, 200);
            if (!nw.ok || nw.residual >= opt.residual_tol || !inside(nw.z)) continue;
            if (near_root(found, nw.z, opt.merge_tol)) continue;
            found.push_back(Root{nw.z, 1, nw.residual, std::abs(nw.z.real()) <= kAxisTol});
        }
    }
    std::sort(found.begin(), found.end(), [](const Root& a, const Root& b) { return a.lambda.imag() < b.lambda.imag(); });
    std::vector<GeneralizedRoot> out;
    for (const auto& r : found) {
        cplx z = r.lambda;
        if (z.real() > 0.0) z = {-0.0, z.imag()};
        out.push_back({SpectralPoint{z, Sheet::second}, r.residual});
    }
    return out;
}

EigenvalueBranch track_branch(const AnalyticDistribution& dist, double K_start, double K_end,
                              const SpectralPoint& seed, int steps, const BranchOptions& opt) {
    if (steps < 1) throw DomainError("track_branch needs steps >= 1");
    check_sheet(dist, seed, opt.method);
    const int harmonic = opt.harmonic;
    const double j = harmonic;
    const double reach = second_sheet_reach(dist, opt.method);

    auto F = [&](cplx z, double K) {
        return harmonic_dispersion(dist, harmonic, z, 0, opt.method) - eigen_target(harmonic, K, opt.h);
    };
    auto dF = [&](cplx z) { return harmonic_dispersion(dist, harmonic, z, 1, opt.method); };
    auto valid = [&](cplx z) { return z.real() / j > -reach; };
    auto solve = [&](cplx guess, double K) {
        return newton([&](cplx z) { return std::pair{F(z, K), dF(z)}; }, valid, guess, opt.residual_tol, 40);
    };
    auto label = [&](cplx z) { return z.real() < -opt.crossing_tol ? Sheet::second : Sheet::principal; };
    auto sample = [&](double K, cplx z) { return BranchSample{K, SpectralPoint{z, label(z)}, std::abs(F(z, K))}; };

    EigenvalueBranch br;
    br.harmonic = harmonic;
    br.step_bound = opt.max_jump;

    if (K_start == K_end) {
        br.samples.push_back({K_start, seed, std::abs(F(seed.lambda, K_start))});
        return br;
    }
    NewtonOut start = solve(seed.lambda, K_start);
    if (!start.ok) throw BranchLost("seed does not converge to a root at K_start");
    br.samples.push_back(sample(K_start, start.z));

    auto crossing = [&](double Ka, cplx za, double Kb, cplx zb) {
        // Bisection in K on the sign of Re(lambda).
        double lo = Ka, hi = Kb;
        cplx zlo = za, zm = za;
        double Km = Ka;
        for (int it = 0; it < 100; ++it) {
            Km = 0.5 * (lo + hi);
            const double t = (Km - Ka) / (Kb - Ka);
            NewtonOut nw = solve(za + t * (zb - za), Km);
            if (!nw.ok) throw BranchLost("Newton failed while refining an axis crossing");
            zm = nw.z;
            if (std::abs(zm.real()) < opt.crossing_tol || std::abs(hi - lo) < 1e-14) break;
            if ((zm.real() > 0) == (zlo.real() > 0)) {
                lo = Km;
                zlo = zm;
            } else {
                hi = Km;
            }
        }
        return std::pair{Km, zm};
    };

    double K = K_start;
    cplx z = start.z;
    const double dK_nominal = (K_end - K_start) / steps;
    for (int i = 1; i <= steps; ++i) {
        const double K_target = (i == steps) ? K_end : K_start + i * dK_nominal;
        double dK = (K_target - K) / std::pow(2.0, opt.min_halvings);
        int halvings = opt.min_halvings;
        while ((K_target - K) * dK_nominal > 0.0 && std::abs(K_target - K) > 1e-15 * std::abs(K_target)) {
            double Kn = K + dK;
            if ((K_target - Kn) * dK_nominal < 0.0) Kn = K_target;
            // Predictor dlambda/dK = -(dtarget/dK) / F'(lambda) with dtarget/dK = -target/K.
            const double c = eigen_target(harmonic, K, opt.h);
            cplx guess = z;
            try {
                guess = z + (Kn - K) * (-c / K) / dF(z);
            } catch (const PoleProximity&) {
            }
            NewtonOut nw = solve(guess, Kn);
            if (!nw.ok || std::abs(nw.z - z) > opt.max_jump) {
                if (++halvings > opt.max_halvings) {
                    throw BranchLost("continuation failed near K = " + std::to_string(K) + " after step halving");
                }
                dK *= 0.5;
                continue;
            }
            const bool a_axis = std::abs(z.real()) < opt.crossing_tol;
            const bool b_axis = std::abs(nw.z.real()) < opt.crossing_tol;
            if (!a_axis && !b_axis && (z.real() > 0) != (nw.z.real() > 0)) {
                auto [Kc, zc] = crossing(K, z, Kn, nw.z);
                br.crossings.push_back(Kc);
                br.samples.push_back(sample(Kc, zc));
            } else if (b_axis && !a_axis) {
                br.crossings.push_back(Kn);
            }
            K = Kn;
            z = nw.z;
        }
        br.samples.push_back(sample(K_target, z));
    }
    return br;
}

TransitionReport transition_point(const AnalyticDistribution& dist) {
    const double r = dist.search_radius();
    const auto zeros = find_hilbert_zeros(dist, -r, r, 1e-10);
    if (zeros.empty()) throw AssumptionViolated("no zero of the Hilbert transform in the search window");

    TransitionReport rep;
    double gmax = -1.0;
    for (double y : zeros) {
        const double g = dist.density(y);
        rep.candidates.emplace_back(y, 2.0 / (kPi * g));
        gmax = std::max(gmax, g);
    }
    std::vector<double> maximizers;
    for (double y : zeros) {
        if (dist.density(y) >= gmax * (1.0 - 1e-9)) maximizers.push_back(y);
    }
    double yc = maximizers.front();
    for (double y : maximizers) {
        if (std::abs(y) > std::abs(yc)) yc = y;
    }
    for (double y : maximizers) {
        if (std::abs(std::abs(y) - std::abs(yc)) > 1e-6) {
            throw DegenerateTie("distinct |y| values " + std::to_string(y) + " and " + std::to_string(yc) +
                                " both maximise g over the Hilbert zeros");
        }
    }
    if (dist.is_even()) yc = std::abs(yc);
    else if (std::find_if(maximizers.begin(), maximizers.end(), [](double y) { return y > 0; }) != maximizers.end())
        yc = *std::max_element(maximizers.begin(), maximizers.end());
    rep.y_c = yc;
    rep.K_c = 2.0 / (kPi * dist.density(yc));
    const cplx d1 = dispersion_derivative(dist, {cplx(0.0, yc), Sheet::principal}, 1);
    rep.dlambda_dK = -2.0 / (rep.K_c * rep.K_c * d1);
    return rep;
}

TransitionReport verify_assumptions(const AnalyticDistribution& dist, double h) {
    TransitionReport rep;
    AssumptionFlags fl;
    bool have_transition = false;
    try {
        rep = transition_point(dist);
        have_transition = true;
    } catch (const Error& e) {
        fl.diagnostics.push_back(std::string("transition point unavailable: ") + e.what());
    }
    rep.h = h;

    // A1: h < 1, equivalently K_c < K_c2 where K_c2 = inf 2/(h pi g(y_j)) over the same zeros.
    if (h > 0.0 && have_transition) {
        double k2 = std::numeric_limits<double>::infinity();
        for (const auto& [y, Kj] : rep.candidates) k2 = std::min(k2, 2.0 / (h * kPi * dist.density(y)));
        rep.K_c2 = k2;
        fl.a1 = h < 1.0 && rep.K_c < k2;
        if (!fl.a1) fl.diagnostics.push_back("A1: second-harmonic threshold K_c2 = " + std::to_string(k2) +
                                             " does not exceed K_c");
    } else {
        fl.a1 = h < 1.0;
        if (!fl.a1) fl.diagnostics.push_back("A1: h >= 1");
    }

    const double ratio = strip_bound_ratio(dist);
    fl.a2 = ratio <= 1.0 + 1e-12;
    if (!fl.a2) fl.diagnostics.push_back("A2: strip bound exceeded by factor " + std::to_string(ratio));

    if (have_transition) {
        std::vector<double> maxima;
        const double gmax = dist.density(rep.y_c);
        for (const auto& [y, Kj] : rep.candidates) {
            if (dist.density(y) >= gmax * (1.0 - 1e-9)) maxima.push_back(y);
        }
        const bool two = maxima.size() == 2 && std::abs(maxima[0] + maxima[1]) < 1e-9 && std::abs(maxima[1]) > 1e-9;
        cplx d1 = 0.0;
        try {
            d1 = dispersion_derivative(dist, {cplx(0.0, rep.y_c), Sheet::principal}, 1);
        } catch (const Error&) {
        }
        fl.a3 = two && std::abs(d1) > 1e-8;
        if (!two) fl.diagnostics.push_back("A3: maximisers of g over the Hilbert zeros are not a nonzero pair +-y_c");
        else if (!fl.a3) fl.diagnostics.push_back("A3: derivative of the continued dispersion vanishes at i y_c");
        fl.a4 = rep.dlambda_dK.real() > 0.0;
        if (!fl.a4) fl.diagnostics.push_back("A4: Re(dlambda/dK) <= 0 at onset");
    } else {
        fl.diagnostics.push_back("A3, A4: not evaluated");
    }

    double asym = 0.0;
    const double X = 20.0 * dist.scale() + dist.omega0();
    for (int i = 0; i <= 2000; ++i) {
        const double w = X * i / 2000.0;
        asym = std::max(asym, std::abs(dist.density(w) - dist.density(-w)));
    }
    fl.a5 = asym <= 1e-12;
    if (!fl.a5) fl.diagnostics.push_back("A5: g is not even, max asymmetry " + std::to_string(asym));
    if (fl.a5 != dist.is_even()) fl.diagnostics.push_back("A5: measured evenness disagrees with the is_even flag");

    rep.flags = fl;
    return rep;
}

PairingValue pairing(const AnalyticDistribution& dist, const TransitionReport& report, int m, int n) {
    if (m < 0 || n < 0 || m + n > 3) throw DomainError("pairing needs m, n >= 0 with m + n <= 3");
    const double yc = report.y_c;
    const cplx c = 2.0 * I * yc;
    std::array<std::array<cplx, 4>, 4> t{};
    t[0][0] = 1.0;
    // 1/(lambda - iw)^m integrated against g is (-1)^(m-1)/(m-1)! D^(m-1)(lambda).
    for (int k = 1; k <= 3; ++k) {
        const double coef = ((k - 1) % 2 == 0 ? 1.0 : -1.0) / factorial(k - 1);
        if (k <= m) t[k][0] = coef * dispersion_derivative(dist, {cplx(0.0, yc), Sheet::principal}, k - 1);
        if (k <= n) t[0][k] = coef * dispersion_derivative(dist, {cplx(0.0, -yc), Sheet::principal}, k - 1);
    }
    if (m > 0 && n > 0 && std::abs(yc) < 1e-12) throw AssumptionViolated("mixed pairings need y_c != 0");
    // Partial fractions: 1/(A^a B^b) = [1/(A^(a-1) B^b) - 1/(A^a B^(b-1))] / (lambda_+ - lambda_-).
    for (int a = 1; a <= m; ++a) {
        for (int b = 1; b <= n; ++b) t[a][b] = (t[a - 1][b] - t[a][b - 1]) / c;
    }
    return {m, n, t[m][n]};
}

cplx pairing_quadrature(const AnalyticDistribution& dist, double y_c, int m, int n, double abs_tol) {
    if (m < 0 || n < 0 || m + n > 3) throw DomainError("pairing needs m, n >= 0 with m + n <= 3");
    const double s = dist.strip_width();
    auto f = [&](double t) {
        const cplx w(t, s);
        const cplx a = I * y_c - I * w;
        const cplx b = -I * y_c - I * w;
        return dist.density(w) / (std::pow(a, m) * std::pow(b, n));
    };
    return quad::real_line(f, 0.0, dist.scale(), abs_tol, "pairing integral");
}

}  // namespace kdhopf
