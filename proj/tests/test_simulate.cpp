#include <doctest.h>

#include <numeric>
#include <random>

#include "kdhopf/analysis.hpp"
#include "kdhopf/errors.hpp"
#include "kdhopf/simulate.hpp"
#include "oracle.hpp"

using namespace kdhopf;

namespace {
const auto bimodal = AnalyticDistribution::bimodal_lorentzian(2.0);
}

TEST_CASE("order parameters and rotational equivariance") {
    std::vector<double> th(8);
    for (int i = 0; i < 8; ++i) th[i] = 2.0 * oracle::pi * i / 8.0;
    auto [e1, e2] = order_parameters(th);
    CHECK(std::abs(e1) < 1e-15);
    CHECK(std::abs(e2) < 1e-15);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 2.0 * oracle::pi);
    std::vector<double> a(500);
    for (auto& x : a) x = u(rng);
    const double beta = 0.77;
    std::vector<double> b = a;
    for (auto& x : b) x += beta;
    const auto [a1, a2] = order_parameters(a);
    const auto [b1, b2] = order_parameters(b);
    CHECK(std::abs(b1 - a1 * std::polar(1.0, beta)) < 1e-12);
    CHECK(std::abs(b2 - a2 * std::polar(1.0, 2.0 * beta)) < 1e-12);
}

TEST_CASE("two identical oscillators synchronize") {
    const auto s = simulate_finite_n({1.0, 0.0}, {0.0, 0.0}, {0.0, oracle::pi - 0.1}, 20.0, 0.01, 10);
    CHECK(std::abs(s.eta1.front()) < 0.1);
    CHECK(std::abs(s.eta1.back()) > 0.999);
    for (std::size_t i = 1; i < s.eta1.size(); ++i) CHECK(std::abs(s.eta1[i]) >= std::abs(s.eta1[i - 1]) - 1e-12);
}

TEST_CASE("finite-N bounds and reproducibility") {
    const auto w = sample_frequencies(bimodal, 2000, SampleMode::quantile);
    const auto th = random_phases(2000, 5);
    const auto a = simulate_finite_n({4.5, -0.5}, w, th, 20.0, 0.05, 4);
    const auto b = simulate_finite_n({4.5, -0.5}, w, th, 20.0, 0.05, 4);
    CHECK(a.eta1 == b.eta1);
    for (std::size_t i = 0; i < a.eta1.size(); ++i) {
        CHECK(std::abs(a.eta1[i]) <= 1.0 + 1e-12);
        CHECK(std::abs(a.eta2[i]) <= 1.0 + 1e-12);
    }
    CHECK_THROWS(simulate_finite_n({1.0, 0.0}, {0.0}, {0.0}, 1.0, 0.1));
}

TEST_CASE("Galerkin quadrature nodes") {
    for (NodeRule r : {NodeRule::real_line, NodeRule::shifted_contour}) {
        const auto n = make_galerkin_nodes(bimodal, 200, r);
        const cplx total = std::accumulate(n.weight.begin(), n.weight.end(), cplx(0.0));
        CHECK(std::abs(total - 1.0) < 1e-12);
        // First moment of the real-line rule and the Cauchy integral on both rules.
        const cplx lam(0.3, 1.0);
        cplx d = 0.0;
        for (int k = 0; k < 200; ++k) d += n.weight[k] / (lam - cplx(0.0, 1.0) * n.omega[k]);
        CHECK(std::abs(d - oracle::D(lam, 2.0)) < (r == NodeRule::shifted_contour ? 1e-10 : 1e-3));
    }
    CHECK_THROWS_AS(make_galerkin_nodes(bimodal, 100, NodeRule::shifted_contour, 0.9), DomainError);
}

TEST_CASE("incoherent state is an equilibrium") {
    const auto s = simulate_galerkin({5.0, -0.3}, bimodal, 50, 4, 0.0, 10.0, 0.05, 10);
    for (const auto& e : s.eta1) CHECK(e == cplx(0.0));
    const auto oa = ott_antonsen_oracle(2.0, 5.0, {cplx(0.0), cplx(0.0)}, 10.0, 0.05, 10);
    for (const auto& e : oa.eta1) CHECK(e == cplx(0.0));
}

TEST_CASE("real data stays conjugate symmetric on the real-line rule") {
    GalerkinOptions opt;
    opt.rule = NodeRule::real_line;
    const auto s = simulate_galerkin({4.5, -0.5}, bimodal, 120, 6, 0.05, 30.0, 0.05, 10, opt);
    for (const auto& e : s.eta1) CHECK(std::abs(e.imag()) < 1e-9);
}

TEST_CASE("contour rule is rejected with the conjugate second harmonic") {
    GalerkinOptions opt;
    opt.rule = NodeRule::shifted_contour;
    CHECK_THROWS_AS(simulate_galerkin({4.2, -0.5}, bimodal, 50, 4, 1e-3, 1.0, 0.05, 1, opt), DomainError);
    CHECK_THROWS_AS(simulate_galerkin({4.2, 0.0}, bimodal, 50, 1, 1e-3, 1.0, 0.05, 1), DomainError);
}

TEST_CASE("linearized growth matches the eigenvalue at K = 5") {
    const auto s = simulate_linearized({5.0, 0.0}, bimodal, 300, 1e-3, 40.0, 0.01, 5);
    const double want = oracle::eigen_pair(5.0, 2.0).first.real();
    const auto fit = fit_decay_rate(s, 20.0, 40.0, false);
    CHECK(fit.rate == doctest::Approx(want).epsilon(0.02));
}

TEST_CASE("free streaming decays at K = 0") {
    const auto s = simulate_linearized({0.0, 0.0}, bimodal, 300, 1.0, 20.0, 0.01, 10);
    // The continuum gives e^{-t} cos(2t); finite quadrature leaves a residue that must stay small.
    for (std::size_t i = 0; i < s.times.size(); ++i) {
        const double t = s.times[i];
        CHECK(std::abs(s.eta1[i] - std::exp(-t) * std::cos(2.0 * t)) < 5e-3);
        if (t >= 10.0) CHECK(std::abs(s.eta1[i]) < 5e-3);
    }
}

TEST_CASE("step halving of the linearized run") {
    // Far-tail nodes (|omega| up to ~1e5) put an unresolvable ripple into eta_1, so the step
    // error only reaches fourth order once dt is small.
    const auto a = simulate_linearized({3.5, 0.0}, bimodal, 400, 1.0, 10.0, 0.00125, 1);
    const auto b = simulate_linearized({3.5, 0.0}, bimodal, 400, 1.0, 10.0, 0.000625, 2);
    for (std::size_t i = 0; i < a.eta1.size(); ++i) CHECK(std::abs(a.eta1[i] - b.eta1[i]) < 1e-6);
}

TEST_CASE("oracle linearization reproduces the eigenvalue") {
    // Small data grows at Re lambda(5) = 0.25.
    const auto s = ott_antonsen_oracle(2.0, 5.0, {cplx(1e-7), cplx(1e-7)}, 30.0, 0.01, 5);
    const auto fit = fit_decay_rate(s, 5.0, 30.0, false);
    CHECK(fit.rate == doctest::Approx(0.25).epsilon(0.02));
    const auto below = ott_antonsen_oracle(2.0, 3.9, {cplx(1e-3), cplx(1e-3)}, 600.0, 0.05, 10);
    CHECK(std::abs(below.eta1.back()) < 1e-6);
}

TEST_CASE("truncation diagnostics") {
    const auto s = simulate_galerkin({4.16, 0.0}, bimodal, 100, 8, 1e-3, 20.0, 0.05, 10);
    CHECK(s.tail_ratio >= 0.0);
    CHECK_FALSE(s.truncation_warning);
}
