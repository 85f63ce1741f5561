#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace kdhopf {

using cplx = std::complex<double>;

enum class Family { bimodal_lorentzian, custom_tabulated_analytic };

// User-supplied analytic density. Both evaluators are required; the library
// never tries to continue tabulated data numerically.
struct CustomDensity {
    std::function<double(double)> real;
    std::function<cplx(cplx)> complex;
    double strip_width = 0.0;     // delta, g analytic on |Im z| <= delta
    double decay_constant = 0.0;  // C in |g(z)| <= C / (1 + |z|^2)
    bool is_even = false;
    double scale = 1.0;           // characteristic width, used for maps and search ranges
};

class AnalyticDistribution {
public:
    static AnalyticDistribution bimodal_lorentzian(double omega0);
    static AnalyticDistribution custom(CustomDensity spec);

    Family family() const { return family_; }
    double omega0() const { return omega0_; }
    double strip_width() const { return delta_; }
    double decay_constant() const { return decay_; }
    bool is_even() const { return even_; }
    bool has_closed_dispersion() const { return family_ == Family::bimodal_lorentzian; }
    double scale() const { return scale_; }
    // Half-width of the default search window for Hilbert zeros.
    double search_radius() const;

    double density(double w) const;
    cplx density(cplx z) const;
    // n-th complex derivative of g at z, n in 0..4.
    cplx density_derivative(cplx z, int n) const;

private:
    AnalyticDistribution() = default;

    Family family_ = Family::bimodal_lorentzian;
    double omega0_ = 0.0;
    double delta_ = 0.0;
    double decay_ = 0.0;
    bool even_ = true;
    double scale_ = 1.0;
    std::shared_ptr<const CustomDensity> custom_;
};

// Guard distance from a pole of g (or of the closed-form dispersion).
inline constexpr double kPoleGuard = 1e-6;

double eval_density(const AnalyticDistribution& dist, double w);
cplx eval_density_complex(const AnalyticDistribution& dist, cplx z);

double hilbert_transform(const AnalyticDistribution& dist, double y, double abs_tol = 1e-10);

struct HilbertZeroOptions {
    double step = 0.01;
    double quad_tol = 1e-11;
};
std::vector<double> find_hilbert_zeros(const AnalyticDistribution& dist, double lo, double hi, double tol,
                                       const HilbertZeroOptions& opt = {});

// Total mass of g over the real line via the tangent map.
double total_mass(const AnalyticDistribution& dist, double abs_tol = 1e-12);

// Largest value of |g(z)| (1+|z|^2) / C over a grid of the strip |Im z| <= delta.
// The strip bound holds on the grid iff the result is <= 1.
double strip_bound_ratio(const AnalyticDistribution& dist, int nx = 801, int ny = 11);

enum class SampleMode { quantile, random };
std::vector<double> sample_frequencies(const AnalyticDistribution& dist, std::size_t n, SampleMode mode,
                                       std::uint64_t seed = 0);

// Cumulative distribution built by panel quadrature on the tangent map, inverted by bisection.
class CumulativeTable {
public:
    explicit CumulativeTable(const AnalyticDistribution& dist, int panels = 4096);
    double cdf(double w) const;
    double quantile(double p) const;

private:
    double partial(int panel, double u) const;

    AnalyticDistribution dist_;
    double scale_;
    double total_ = 1.0;
    std::vector<double> edges_;
    std::vector<double> cum_;
};

}  // namespace kdhopf
