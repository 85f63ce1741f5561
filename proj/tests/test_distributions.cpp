#include <doctest.h>

#include <algorithm>
#include <random>

#include "kdhopf/distributions.hpp"
#include "kdhopf/errors.hpp"
#include "oracle.hpp"

using namespace kdhopf;

TEST_CASE("bimodal density matches the two-Lorentzian sum") {
    for (double a : {0.5, 0.9, 2.0, 3.5}) {
        const auto d = AnalyticDistribution::bimodal_lorentzian(a);
        for (double w = -8.0; w <= 8.0; w += 0.37) CHECK(d.density(w) == doctest::Approx(oracle::g(w, a)).epsilon(1e-14));
    }
}

TEST_CASE("density is even and conjugate symmetric off the axis") {
    const auto d = AnalyticDistribution::bimodal_lorentzian(2.0);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> x(-6.0, 6.0), y(-0.45, 0.45);
    for (int k = 0; k < 200; ++k) {
        const cplx z(x(rng), y(rng));
        CHECK(std::abs(d.density(std::conj(z)) - std::conj(d.density(z))) < 1e-15);
        CHECK(std::abs(d.density(-z) - d.density(z)) < 1e-15);
        CHECK(d.density(z.real()) == doctest::Approx(d.density(cplx(z.real(), 0.0)).real()));
    }
}

TEST_CASE("complex density has the Lorentzian poles") {
    const auto d = AnalyticDistribution::bimodal_lorentzian(2.0);
    CHECK_THROWS_AS(d.density(cplx(2.0, 1.0)), PoleProximity);
    CHECK_NOTHROW(d.density(cplx(2.0, 0.99)));
}

TEST_CASE("total mass is one and the strip bound holds") {
    for (double a : {0.5, 2.0, 4.0}) {
        const auto d = AnalyticDistribution::bimodal_lorentzian(a);
        CHECK(total_mass(d) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(strip_bound_ratio(d) <= 1.0);
        CHECK(d.strip_width() == 0.5);
    }
}

TEST_CASE("Hilbert transform agrees with the closed form") {
    const auto d = AnalyticDistribution::bimodal_lorentzian(2.0);
    for (double y = -7.0; y <= 7.0; y += 0.5) CHECK(std::abs(hilbert_transform(d, y) - oracle::hilbert(y, 2.0)) < 1e-10);
}

TEST_CASE("Hilbert zeros") {
    SUBCASE("two peaks give 0 and +-sqrt(omega0^2 - 1)") {
        const auto d = AnalyticDistribution::bimodal_lorentzian(2.0);
        const auto z = find_hilbert_zeros(d, -7.0, 7.0, 1e-12);
        REQUIRE(z.size() == 3);
        CHECK(z[0] == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-10));
        CHECK(std::abs(z[1]) < 1e-10);
        CHECK(z[2] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-10));
    }
    SUBCASE("a merged single peak gives only 0") {
        const auto d = AnalyticDistribution::bimodal_lorentzian(0.9);
        const auto z = find_hilbert_zeros(d, -6.0, 6.0, 1e-12);
        REQUIRE(z.size() == 1);
        CHECK(std::abs(z[0]) < 1e-10);
    }
    CHECK_THROWS_AS(find_hilbert_zeros(AnalyticDistribution::bimodal_lorentzian(2.0), 1.0, 0.0, 1e-12), DomainError);
}

TEST_CASE("complex derivatives of the density") {
    const auto d = AnalyticDistribution::bimodal_lorentzian(2.0);
    const cplx z(0.3, 0.2);
    const double h = 1e-4;
    const cplx fd = (d.density(z + h) - d.density(z - h)) / (2.0 * h);
    CHECK(std::abs(d.density_derivative(z, 1) - fd) < 1e-7);
    const cplx fd2 = (d.density(z + h) - 2.0 * d.density(z) + d.density(z - h)) / (h * h);
    CHECK(std::abs(d.density_derivative(z, 2) - fd2) < 1e-5);
}

TEST_CASE("quantile sample reproduces the cumulative distribution") {
    const auto d = AnalyticDistribution::bimodal_lorentzian(2.0);
    const std::size_t n = 20001;
    auto w = sample_frequencies(d, n, SampleMode::quantile);
    CHECK(std::is_sorted(w.begin(), w.end()));
    for (std::size_t i = 0; i < n; ++i) CHECK(w[i] == -w[n - 1 - i]);
    for (std::size_t i : {100u, 5000u, 10000u, 17777u}) {
        const double p = (i + 0.5) / n;
        CHECK(oracle::cdf(w[i], 2.0) == doctest::Approx(p).epsilon(1e-9));
    }
    CumulativeTable t(d);
    for (double x : {-5.0, -1.0, 0.0, 0.4, 3.0}) CHECK(std::abs(t.cdf(x) - oracle::cdf(x, 2.0)) < 1e-10);
}

TEST_CASE("random sample is fixed by its seed") {
    const auto d = AnalyticDistribution::bimodal_lorentzian(2.0);
    const auto a = sample_frequencies(d, 1000, SampleMode::random, 42);
    const auto b = sample_frequencies(d, 1000, SampleMode::random, 42);
    const auto c = sample_frequencies(d, 1000, SampleMode::random, 43);
    CHECK(a == b);
    CHECK(a != c);
    CHECK_THROWS_AS(sample_frequencies(d, 0, SampleMode::quantile), DomainError);
}

TEST_CASE("custom family built from a single Lorentzian") {
    CustomDensity spec;
    spec.real = [](double w) { return 1.0 / (oracle::pi * (w * w + 1.0)); };
    spec.complex = [](cplx z) { return 1.0 / (oracle::pi * (z * z + 1.0)); };
    spec.strip_width = 0.5;
    spec.decay_constant = 1.0 / (oracle::pi * 0.75) * 2.0;
    spec.is_even = true;
    const auto d = AnalyticDistribution::custom(spec);
    CHECK(!d.has_closed_dispersion());
    CHECK(total_mass(d) == doctest::Approx(1.0).epsilon(1e-10));
    const auto z = find_hilbert_zeros(d, -5.0, 5.0, 1e-12);
    REQUIRE(z.size() == 1);
    CHECK(std::abs(z[0]) < 1e-10);
    // Cauchy-circle derivative against the exact one.
    const cplx p(0.2, 0.1);
    const cplx exact = -2.0 * p / (oracle::pi * std::pow(p * p + 1.0, 2));
    CHECK(std::abs(d.density_derivative(p, 1) - exact) < 1e-10);
}
