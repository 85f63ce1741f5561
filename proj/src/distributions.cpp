#include "kdhopf/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss.hpp>

#include "kdhopf/errors.hpp"
#include "kdhopf/quadrature.hpp"

namespace kdhopf {

namespace {

constexpr double kPi = std::numbers::pi;

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

// 1/((z-a)^2+1) = (1/2i) [1/(z-a-i) - 1/(z-a+i)], differentiated n times.
cplx lorentz_derivative(cplx z, double a, int n) {
    const cplx I(0.0, 1.0);
    const cplx up = z - a - I;
    const cplx dn = z - a + I;
    if (std::abs(up) < kPoleGuard || std::abs(dn) < kPoleGuard) {
        throw PoleProximity("density evaluated at a pole: z = (" + std::to_string(z.real()) + ", " +
                            std::to_string(z.imag()) + ")");
    }
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const cplx t = std::pow(up, -(n + 1)) - std::pow(dn, -(n + 1));
    return sign * factorial(n) * t / (2.0 * I);
}

}  // namespace

AnalyticDistribution AnalyticDistribution::bimodal_lorentzian(double omega0) {
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw DomainError("bimodal_lorentzian needs omega0 > 0");
    AnalyticDistribution d;
    d.family_ = Family::bimodal_lorentzian;
    d.omega0_ = omega0;
    // Each term obeys |(z-a)^2+1| >= max(1-delta, |x-a|)^2 on the strip, which gives
    // |g(z)|(1+|z|^2) <= (1 + delta^2 + (w0 + 1 - delta)^2) / (pi (1-delta)^2).
    d.delta_ = 0.5;
    const double dl = d.delta_;
    d.decay_ = (1.0 + dl * dl + (omega0 + 1.0 - dl) * (omega0 + 1.0 - dl)) / (kPi * (1.0 - dl) * (1.0 - dl));
    d.even_ = true;
    d.scale_ = std::sqrt(omega0 * omega0 + 1.0);
    return d;
}

AnalyticDistribution AnalyticDistribution::custom(CustomDensity spec) {
    if (!spec.real || !spec.complex) throw DomainError("custom density needs real and complex evaluators");
    if (!(spec.strip_width > 0.0)) throw DomainError("custom density needs strip_width > 0");
    if (!(spec.decay_constant > 0.0)) throw DomainError("custom density needs decay_constant > 0");
    if (!(spec.scale > 0.0)) throw DomainError("custom density needs scale > 0");
    AnalyticDistribution d;
    d.family_ = Family::custom_tabulated_analytic;
    d.delta_ = spec.strip_width;
    d.decay_ = spec.decay_constant;
    d.even_ = spec.is_even;
    d.scale_ = spec.scale;
    d.custom_ = std::make_shared<const CustomDensity>(std::move(spec));
    return d;
}

double AnalyticDistribution::search_radius() const {
    if (family_ == Family::bimodal_lorentzian) return omega0_ + 5.0;
    return 10.0 * scale_;
}

double AnalyticDistribution::density(double w) const {
    if (family_ == Family::bimodal_lorentzian) {
        const double a = w - omega0_;
        const double b = w + omega0_;
        return (1.0 / (a * a + 1.0) + 1.0 / (b * b + 1.0)) / (2.0 * kPi);
    }
    return custom_->real(w);
}

cplx AnalyticDistribution::density(cplx z) const {
    if (family_ == Family::bimodal_lorentzian) return density_derivative(z, 0);
    return custom_->complex(z);
}

cplx AnalyticDistribution::density_derivative(cplx z, int n) const {
    if (n < 0 || n > 4) throw DomainError("density derivative order must be in 0..4");
    if (family_ == Family::bimodal_lorentzian) {
        return (lorentz_derivative(z, omega0_, n) + lorentz_derivative(z, -omega0_, n)) / (2.0 * kPi);
    }
    if (n == 0) return custom_->complex(z);
    // Cauchy integral on a small circle; the trapezoid rule converges geometrically.
    const int pts = 64;
    const double r = 0.1 * delta_;
    cplx acc = 0.0;
    for (int k = 0; k < pts; ++k) {
        const double th = 2.0 * kPi * k / pts;
        const cplx e = std::polar(1.0, th);
        acc += custom_->complex(z + r * e) * std::pow(e, -n);
    }
    return acc * factorial(n) / (pts * std::pow(r, n));
}

double eval_density(const AnalyticDistribution& dist, double w) { return dist.density(w); }

cplx eval_density_complex(const AnalyticDistribution& dist, cplx z) { return dist.density(z); }

double hilbert_transform(const AnalyticDistribution& dist, double y, double abs_tol) {
    // Symmetric form: H(y) = -(1/pi) int_0^inf (g(y+s) - g(y-s)) / s ds, s = c tan u.
    const double c = dist.scale();
    auto f = [&](double u) {
        const double cu = std::cos(u);
        const double s = c * std::tan(u);
        if (s == 0.0) return 0.0;
        return (dist.density(y + s) - dist.density(y - s)) / s * (c / (cu * cu));
    };
    const double v = quad::adaptive(f, 0.0, kPi / 2, abs_tol, "hilbert transform");
    return -v / kPi;
}

std::vector<double> find_hilbert_zeros(const AnalyticDistribution& dist, double lo, double hi, double tol,
                                       const HilbertZeroOptions& opt) {
    if (!(hi > lo) || !(tol > 0.0) || !(opt.step > 0.0)) throw DomainError("find_hilbert_zeros: bad interval or tolerance");
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / opt.step));
    std::vector<double> ys(n + 1), hs(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        ys[i] = (i == n) ? hi : lo + static_cast<double>(i) * opt.step;
        hs[i] = hilbert_transform(dist, ys[i], opt.quad_tol);
    }
    // Grid values below this are treated as exact zeros (e.g. y = 0 for even g).
    const double zero_eps = 10.0 * opt.quad_tol;
    std::vector<double> roots;
    for (std::size_t i = 0; i <= n; ++i) {
        if (std::abs(hs[i]) <= zero_eps) {
            if (std::abs(hs[i]) < tol) roots.push_back(ys[i]);
            continue;
        }
        if (i == n || std::abs(hs[i + 1]) <= zero_eps) continue;
        if ((hs[i] > 0) == (hs[i + 1] > 0)) continue;
        double a = ys[i], b = ys[i + 1], fa = hs[i];
        double m = 0.5 * (a + b), fm = 0.0;
        for (int it = 0; it < 200; ++it) {
            m = 0.5 * (a + b);
            fm = hilbert_transform(dist, m, opt.quad_tol);
            if (std::abs(fm) < 0.01 * tol || (b - a) < 1e-14 * std::max(1.0, std::abs(m))) break;
            if ((fm > 0) == (fa > 0)) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        if (std::abs(fm) < tol) roots.push_back(m);
    }
    std::sort(roots.begin(), roots.end());
    // A zero sitting exactly on the grid can be seen from both neighbours.
    roots.erase(std::unique(roots.begin(), roots.end(), [](double a, double b) { return std::abs(a - b) < 1e-9; }),
                roots.end());
    return roots;
}

double total_mass(const AnalyticDistribution& dist, double abs_tol) {
    return quad::real_line([&](double w) { return dist.density(w); }, 0.0, dist.scale(), abs_tol, "total mass");
}

double strip_bound_ratio(const AnalyticDistribution& dist, int nx, int ny) {
    const double X = 20.0 * dist.scale() + dist.omega0();
    const double d = dist.strip_width();
    double worst = 0.0;
    auto probe = [&](cplx z) {
        const double r = std::abs(dist.density(z)) * (1.0 + std::norm(z)) / dist.decay_constant();
        worst = std::max(worst, r);
    };
    for (int i = 0; i < nx; ++i) {
        const double x = -X + 2.0 * X * i / (nx - 1);
        for (int j = 0; j < ny; ++j) probe({x, -d + 2.0 * d * j / (ny - 1)});
    }
    for (double x : {1e2, 1e3, 1e4, -1e2, -1e3, -1e4}) {
        probe({x, d});
        probe({x, -d});
    }
    return worst;
}

CumulativeTable::CumulativeTable(const AnalyticDistribution& dist, int panels)
    : dist_(dist), scale_(dist.scale()) {
    edges_.resize(panels + 1);
    for (int k = 0; k <= panels; ++k) edges_[k] = -kPi / 2 + kPi * k / panels;
    cum_.assign(panels + 1, 0.0);
    for (int k = 0; k < panels; ++k) cum_[k + 1] = cum_[k] + partial(k, edges_[k + 1]);
    const double total = cum_.back();
    total_ = total;
    for (double& c : cum_) c /= total;
    cum_.back() = 1.0;
}

double CumulativeTable::partial(int panel, double u) const {
    auto f = [&](double v) {
        const double c = std::cos(v);
        return dist_.density(scale_ * std::tan(v)) * scale_ / (c * c);
    };
    return boost::math::quadrature::gauss<double, 10>::integrate(f, edges_[panel], u);
}

double CumulativeTable::cdf(double w) const {
    const double u = std::atan(w / scale_);
    auto it = std::upper_bound(edges_.begin(), edges_.end(), u);
    int k = static_cast<int>(it - edges_.begin()) - 1;
    k = std::clamp(k, 0, static_cast<int>(edges_.size()) - 2);
    return std::clamp(cum_[k] + partial(k, u) / total_, 0.0, 1.0);
}

double CumulativeTable::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile needs p in (0, 1)");
    auto it = std::upper_bound(cum_.begin(), cum_.end(), p);
    int k = static_cast<int>(it - cum_.begin()) - 1;
    k = std::clamp(k, 0, static_cast<int>(edges_.size()) - 2);
    double a = edges_[k], b = edges_[k + 1];
    const double target = (p - cum_[k]) * total_;
    for (int i = 0; i < 60 && b - a > 1e-16; ++i) {
        const double m = 0.5 * (a + b);
        if (partial(k, m) < target) a = m;
        else b = m;
    }
    return scale_ * std::tan(0.5 * (a + b));
}

std::vector<double> sample_frequencies(const AnalyticDistribution& dist, std::size_t n, SampleMode mode,
                                       std::uint64_t seed) {
    if (n == 0) throw DomainError("sample_frequencies needs N >= 1");
    CumulativeTable table(dist);
    std::vector<double> out(n);
    if (mode == SampleMode::quantile) {
        for (std::size_t i = 0; i < n; ++i) out[i] = table.quantile((static_cast<double>(i) + 0.5) / static_cast<double>(n));
        if (dist.is_even()) {
            // Exact mirror symmetry removes the tiny bias of the numerical inverse.
            for (std::size_t i = 0; i < n / 2; ++i) {
                const double m = 0.5 * (out[n - 1 - i] - out[i]);
                out[i] = -m;
                out[n - 1 - i] = m;
            }
            if (n % 2 == 1) out[n / 2] = 0.0;
        }
        return out;
    }
    // 53 random bits mapped into the open unit interval; portable across standard libraries.
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
        out[i] = table.quantile(p);
    }
    return out;
}

}  // namespace kdhopf
