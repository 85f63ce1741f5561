#include <doctest.h>

#include <random>

#include "kdhopf/errors.hpp"
#include "kdhopf/reduced_ode.hpp"

using namespace kdhopf;

namespace {
const auto bimodal = AnalyticDistribution::bimodal_lorentzian(2.0);
}

TEST_CASE("field is equivariant under a common phase rotation") {
    const auto sine = coefficients_sine(bimodal);
    const auto sh = coefficients_second_harmonic(bimodal, -0.5);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-0.2, 0.2), b(0.0, 6.28);
    for (const auto* c : {&sine, &sh}) {
        for (int k = 0; k < 100; ++k) {
            const CenterState s{cplx(u(rng), u(rng)), cplx(u(rng), u(rng))};
            const cplx r = std::polar(1.0, b(rng));
            const auto f = center_manifold_field(*c, 0.1, s);
            const auto g = center_manifold_field(*c, 0.1, {r * s.alpha_plus, r * s.alpha_minus});
            CHECK(std::abs(g.alpha_plus - r * f.alpha_plus) < 1e-14);
            CHECK(std::abs(g.alpha_minus - r * f.alpha_minus) < 1e-14);
        }
    }
}

TEST_CASE("origin is an equilibrium") {
    const auto c = coefficients_sine(bimodal);
    const auto tr = integrate_center_manifold(c, 0.16, {0.0, 0.0}, 10.0, 0.01, 100);
    for (const auto& s : tr.states) CHECK(std::abs(s.alpha_plus) + std::abs(s.alpha_minus) == 0.0);
}

TEST_CASE("sine system settles on the averaged fixed point") {
    const auto c = coefficients_sine(bimodal);
    const double eps = 0.16;
    const auto tr = integrate_center_manifold(c, eps, {cplx(0.01), cplx(0.01)}, default_reduced_t_end(c, eps),
                                              default_reduced_dt(c), 5);
    double mean = 0.0;
    std::size_t n = 0;
    for (std::size_t i = tr.states.size() / 2; i < tr.states.size(); ++i, ++n) mean += std::abs(tr.states[i].alpha_plus);
    CHECK(mean / n == doctest::Approx(0.1).epsilon(0.1));

    // Rotation frequency of alpha_+ from the unwrapped phase.
    const std::size_t a = tr.states.size() / 2, b = tr.states.size() - 1;
    double phase = 0.0;
    for (std::size_t i = a + 1; i <= b; ++i) phase += std::arg(tr.states[i].alpha_plus / tr.states[i - 1].alpha_plus);
    const double freq = phase / (tr.times[b] - tr.times[a]);
    CHECK(freq == doctest::Approx(c.y_c).epsilon(0.05));

    // The unreduced system keeps arg(alpha_+) + arg(alpha_-) fixed from symmetric data.
    const auto& last = tr.states.back();
    CHECK(std::abs(std::arg(last.alpha_plus * last.alpha_minus)) < 1e-8);
}

TEST_CASE("step halving at the default step") {
    const auto c = coefficients_sine(bimodal);
    const double dt = default_reduced_dt(c);
    const auto a = integrate_center_manifold(c, 0.16, {cplx(0.05, 0.01), cplx(0.04)}, 20.0, dt, 1);
    const auto b = integrate_center_manifold(c, 0.16, {cplx(0.05, 0.01), cplx(0.04)}, 20.0, dt / 2, 1);
    CHECK(std::abs(a.states.back().alpha_plus - b.states.back().alpha_plus) < 1e-6);
    CHECK(std::abs(a.states.back().alpha_minus - b.states.back().alpha_minus) < 1e-6);
}

TEST_CASE("averaged radii converge and the subcritical case overflows") {
    const auto c = coefficients_sine(bimodal);
    const auto av = integrate_averaged(c, 0.16, 0.02, 0.03, 800.0, 0.01, 100);
    CHECK(av.states.back().alpha_plus.real() == doctest::Approx(0.1).epsilon(1e-4));
    CHECK(av.states.back().alpha_minus.real() == doctest::Approx(0.1).epsilon(1e-4));

    const auto sub = coefficients_second_harmonic(bimodal, 0.5);
    CHECK_THROWS_AS(integrate_center_manifold(sub, 0.2, {cplx(0.05), cplx(0.05)}, 500.0, 0.01), Overflow);
}

TEST_CASE("polar form") {
    const auto c = coefficients_sine(bimodal);
    const auto tr = integrate_center_manifold(c, 0.16, {std::polar(0.05, 0.3), std::polar(0.05, -0.3)}, 1.0, 0.01, 10);
    const auto p = to_polar(tr);
    CHECK(p.polar.front()[0] == doctest::Approx(0.3));
    CHECK(p.polar.front()[1] == doctest::Approx(0.05));
    CHECK(p.polar.front()[2] == doctest::Approx(0.05));
    for (const auto& q : p.polar) {
        // psi is defined modulo pi; the library reports it in [-pi/2, pi/2].
        CHECK(std::abs(q[0]) <= 1.5707963268);
    }
}
