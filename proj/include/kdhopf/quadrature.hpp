#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <queue>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "kdhopf/errors.hpp"

namespace kdhopf::quad {

inline constexpr double kDefaultAbsTol = 1e-10;
inline constexpr int kMaxPanels = 4000;

// Globally adaptive 15-point Gauss-Kronrod on [a, b]: the panel with the largest error
// estimate is bisected until the summed estimate falls below abs_tol * max(1, L1).
// The budget bounds the cost near poles. QuadratureFailure if it runs out first.
template <class F>
auto adaptive(F&& f, double a, double b, double abs_tol = kDefaultAbsTol, const char* what = "integral") {
    using boost::math::quadrature::gauss_kronrod;
    using V = decltype(f(a));
    struct Panel {
        double lo, hi;
        V value;
        double err, l1;
        bool operator<(const Panel& o) const { return err < o.err; }
    };
    auto rule = [&](double lo, double hi) {
        Panel p{lo, hi, V{}, 0.0, 0.0};
        p.value = gauss_kronrod<double, 15>::integrate(f, lo, hi, 0, 0.0, &p.err, &p.l1);
        // Boost 1.74 returns the leaf error on the reference interval; L1 is already scaled.
        p.err *= 0.5 * (hi - lo);
        return p;
    };
    std::priority_queue<Panel> heap;
    heap.push(rule(a, b));
    double err = heap.top().err, l1 = heap.top().l1;
    int panels = 1;
    while (!(err <= abs_tol * std::max(1.0, l1))) {
        if (panels >= kMaxPanels) {
            throw QuadratureFailure(std::string(what) + ": error estimate " + std::to_string(err) +
                                    " exceeds tolerance after " + std::to_string(panels) + " panels");
        }
        const Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        const Panel left = rule(worst.lo, mid), right = rule(mid, worst.hi);
        err += left.err + right.err - worst.err;
        l1 += left.l1 + right.l1 - worst.l1;
        heap.push(left);
        heap.push(right);
        ++panels;
        if (err < 0.0) err = 0.0;
    }
    V sum{};
    for (; !heap.empty(); heap.pop()) sum += heap.top().value;
    return sum;
}

// Integral over the whole real line through w = center + scale*tan(u).
// Lorentzian-type tails map to a bounded integrand on (-pi/2, pi/2).
template <class F>
auto real_line(F&& f, double center, double scale, double abs_tol = kDefaultAbsTol,
               const char* what = "real-line integral") {
    auto mapped = [&](double u) {
        const double c = std::cos(u);
        const double jac = scale / (c * c);
        return f(center + scale * std::tan(u)) * jac;
    };
    const double h = std::numbers::pi / 2;
    return adaptive(mapped, -h, h, abs_tol, what);
}

}  // namespace kdhopf::quad
