#include <doctest.h>

#include <random>

#include "kdhopf/errors.hpp"
#include "kdhopf/spectral.hpp"
#include "oracle.hpp"

using namespace kdhopf;

namespace {
const auto bimodal = AnalyticDistribution::bimodal_lorentzian(2.0);
const double sqrt3 = std::sqrt(3.0);
}  // namespace

TEST_CASE("dispersion on the principal sheet, both routes") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> re(0.02, 4.0), im(-6.0, 6.0);
    for (int k = 0; k < 40; ++k) {
        const SpectralPoint p{cplx(re(rng), im(rng)), Sheet::principal};
        const cplx want = oracle::D(p.lambda, 2.0);
        CHECK(std::abs(dispersion(bimodal, p, DispersionMethod::closed_form) - want) < 1e-13);
        CHECK(std::abs(dispersion(bimodal, p, DispersionMethod::quadrature) - want) < 1e-9);
        for (int n = 1; n <= 3; ++n) {
            const cplx dn = oracle::Dn(p.lambda, 2.0, n);
            CHECK(std::abs(dispersion_derivative(bimodal, p, n, DispersionMethod::quadrature) - dn) < 1e-8);
        }
    }
}

TEST_CASE("axis limit and second sheet agree with the continuation") {
    for (double y : {-3.0, -1.0, 0.0, 0.7, sqrt3, 4.0}) {
        const SpectralPoint p{cplx(0.0, y), Sheet::principal};
        CHECK(std::abs(dispersion(bimodal, p, DispersionMethod::quadrature) - oracle::D(p.lambda, 2.0)) < 1e-9);
    }
    // The continued branch equals the rational continuation for -delta < Re lambda < 0.
    for (cplx l : {cplx(-0.1, 1.0), cplx(-0.3, -2.5), cplx(-0.45, 0.2)}) {
        const SpectralPoint p{l, Sheet::second};
        CHECK(std::abs(dispersion(bimodal, p, DispersionMethod::quadrature) - oracle::D(l, 2.0)) < 1e-9);
        // The raw integral is a different function there.
        CHECK(std::abs(cauchy_integral(bimodal, l) - oracle::D(l, 2.0)) > 1e-3);
    }
    // The real-part switch between routes leaves the value continuous.
    const cplx a = continued_dispersion(bimodal, cplx(0.0201, 0.5), 0, DispersionMethod::quadrature);
    const cplx b = continued_dispersion(bimodal, cplx(0.0199, 0.5), 0, DispersionMethod::quadrature);
    CHECK(std::abs(a - b) < 1e-3);
}

TEST_CASE("sheet invariants are enforced") {
    CHECK_THROWS_AS(check_sheet(bimodal, {cplx(-0.5, 0.0), Sheet::principal}), DomainError);
    CHECK_THROWS_AS(check_sheet(bimodal, {cplx(0.5, 0.0), Sheet::second}), DomainError);
    CHECK_THROWS_AS(check_sheet(bimodal, {cplx(-0.8, 0.0), Sheet::second}, DispersionMethod::quadrature), DomainError);
    CHECK_NOTHROW(check_sheet(bimodal, {cplx(-0.8, 0.0), Sheet::second}, DispersionMethod::closed_form));
}

TEST_CASE("conjugate symmetry for an even density") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> re(0.05, 3.0), im(-4.0, 4.0);
    for (int k = 0; k < 30; ++k) {
        const cplx l(re(rng), im(rng));
        const cplx a = dispersion(bimodal, {l, Sheet::principal}, DispersionMethod::quadrature);
        const cplx b = dispersion(bimodal, {std::conj(l), Sheet::principal}, DispersionMethod::quadrature);
        CHECK(std::abs(a - std::conj(b)) < 1e-10);
    }
}

TEST_CASE("eigenvalues follow the quadratic relation") {
    for (double K = 4.2; K < 13.0; K += 0.7) {
        const auto [r1, r2] = oracle::eigen_pair(K, 2.0);
        const auto s = find_eigenvalues(bimodal, K, 1, 0.0);
        int expected = 0;
        for (cplx r : {r1, r2}) {
            if (r.real() <= kAxisTol) continue;
            if (expected == 1 && std::abs(r1 - r2) < 1e-9) continue;
            ++expected;
            bool found = false;
            for (const auto& e : s.eigenvalues) found = found || std::abs(e.lambda - r) < 1e-8;
            CHECK(found);
        }
        CHECK(static_cast<int>(s.eigenvalues.size()) == expected);
    }
    CHECK(find_eigenvalues(bimodal, 2.0, 1, 0.0).eigenvalues.empty());
}

TEST_CASE("quadrature route finds the same eigenvalues") {
    SearchOptions opt;
    opt.method = DispersionMethod::quadrature;
    opt.seeds_re = 5;
    opt.seeds_im = 8;
    const auto s = find_eigenvalues(bimodal, 5.0, 1, 0.0, opt);
    const auto [r1, r2] = oracle::eigen_pair(5.0, 2.0);
    REQUIRE(s.eigenvalues.size() == 2);
    for (const auto& e : s.eigenvalues) CHECK(std::min(std::abs(e.lambda - r1), std::abs(e.lambda - r2)) < 1e-8);
}

TEST_CASE("second harmonic rescales the first") {
    // D_2(lambda) = D(lambda / 2) / 2, so the h-target at K h = 8 lands on the double root lambda = 2.
    for (cplx l : {cplx(0.5, 1.0), cplx(2.0, -3.0)}) {
        CHECK(std::abs(harmonic_dispersion(bimodal, 2, l) - 0.5 * oracle::D(l / 2.0, 2.0)) < 1e-13);
    }
    const auto s = find_eigenvalues(bimodal, 16.0, 2, 0.5);
    REQUIRE(s.eigenvalues.size() == 1);
    CHECK(std::abs(s.eigenvalues[0].lambda - 2.0) < 1e-6);
    CHECK(s.eigenvalues[0].multiplicity == 2);
    CHECK(find_eigenvalues(bimodal, 4.0, 2, -0.5).eigenvalues.empty());
    CHECK(eigen_target(1, 4.0, 0.0) == 0.5);
    CHECK(eigen_target(2, 4.0, 0.5) == 0.5);
}

TEST_CASE("generalized eigenvalues below onset") {
    const auto roots = find_generalized_eigenvalues(bimodal, 3.5, default_second_sheet_region(bimodal));
    const auto [r1, r2] = oracle::eigen_pair(3.5, 2.0);
    REQUIRE(roots.size() == 2);
    for (const auto& r : roots) {
        CHECK(r.point.sheet == Sheet::second);
        CHECK(std::min(std::abs(r.point.lambda - r1), std::abs(r.point.lambda - r2)) < 1e-8);
    }
}

TEST_CASE("branch tracking") {
    const SpectralPoint seed{cplx(-0.9, 2.0), Sheet::second};
    BranchOptions opt;
    const auto b = track_branch(bimodal, 0.5, 6.0, seed, 40, opt);
    REQUIRE(b.crossings.size() == 1);
    CHECK(b.crossings[0] == doctest::Approx(4.0).epsilon(1e-9));
    for (std::size_t i = 0; i < b.samples.size(); ++i) {
        const auto& s = b.samples[i];
        const auto [r1, r2] = oracle::eigen_pair(s.K, 2.0);
        CHECK(std::abs(s.point.lambda - r1) < 1e-8);
        if (std::abs(s.point.lambda.real()) > kAxisTol) {
            CHECK((s.point.sheet == Sheet::principal) == (s.point.lambda.real() > 0.0));
        }
        if (i > 0) CHECK(std::abs(s.point.lambda - b.samples[i - 1].point.lambda) <= opt.max_jump + 1e-12);
    }
    SUBCASE("no motion for an empty interval") {
        const auto same = track_branch(bimodal, 3.0, 3.0, seed, 10);
        REQUIRE(same.samples.size() == 1);
        CHECK(same.samples[0].point.lambda == seed.lambda);
    }
    SUBCASE("approach to the collision at K = 8") {
        // The pair closes in on the real axis; the tracker must stay on one root.
        const auto [a, b8] = oracle::eigen_pair(7.0, 2.0);
        (void)b8;
        const auto t = track_branch(bimodal, 7.0, 7.9, {a, Sheet::principal}, 20);
        CHECK(std::abs(t.samples.back().point.lambda - oracle::eigen_pair(7.9, 2.0).first) < 1e-8);
    }
}

TEST_CASE("transition point and onset speed") {
    const auto r = transition_point(bimodal);
    CHECK(r.y_c == doctest::Approx(sqrt3).epsilon(1e-10));
    CHECK(r.K_c == doctest::Approx(4.0).epsilon(1e-10));
    // Implicit differentiation of 2u^2 - K u + 8 = 0 at u = 1 + i sqrt3.
    const cplx u(1.0, sqrt3);
    const cplx want = u / (4.0 * u - 4.0);
    CHECK(std::abs(r.dlambda_dK - want) < 1e-8);
    // y = 0 is also a Hilbert zero, with the larger threshold 2 / (pi g(0)) = 10.
    REQUIRE(r.candidates.size() == 3);
    bool centre = false;
    for (auto [y, K] : r.candidates) centre = centre || (std::abs(y) < 1e-9 && std::abs(K - 10.0) < 1e-8);
    CHECK(centre);
}

TEST_CASE("assumption flags") {
    const auto ok = verify_assumptions(bimodal, 0.0);
    CHECK(ok.flags.all());
    const auto merged = verify_assumptions(AnalyticDistribution::bimodal_lorentzian(0.9), 0.0);
    CHECK_FALSE(merged.flags.a3);
    CHECK_FALSE(merged.flags.diagnostics.empty());
    CHECK_FALSE(verify_assumptions(bimodal, 1.2).flags.a1);
    const auto half = verify_assumptions(bimodal, 0.5);
    REQUIRE(half.K_c2.has_value());
    CHECK(*half.K_c2 == doctest::Approx(8.0).epsilon(1e-9));
    CHECK(half.flags.a1);
    CHECK(verify_assumptions(bimodal, 0.8).flags.a1);
}

TEST_CASE("pairings by recursion and by quadrature") {
    const auto r = transition_point(bimodal);
    for (int m = 0; m <= 3; ++m) {
        for (int n = 0; n <= 3 - m; ++n) {
            if (m + n == 0) continue;
            const cplx a = pairing(bimodal, r, m, n).value;
            const cplx b = pairing_quadrature(bimodal, r.y_c, m, n);
            CHECK(std::abs(a - b) < 1e-9 * std::max(1.0, std::abs(a)));
        }
    }
    CHECK(std::abs(pairing(bimodal, r, 1, 0).value - 0.5) < 1e-9);
    CHECK(std::abs(pairing(bimodal, r, 1, 1).value) < 1e-9);
    CHECK(std::abs(pairing(bimodal, r, 2, 0).value + oracle::Dn(cplx(0, sqrt3), 2.0, 1)) < 1e-9);
}
