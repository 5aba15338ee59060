#include <cmath>
#include <map>

#include "dirac/generator.hpp"
#include "dirac/potential.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace dirac;

namespace {

Potential constant_potential(double c, const BoundaryParams& bp) {
    // (c, c) as a pure shift on top of an empty band
    return Potential::from_coefficients({{0, 0.0}}, bp).shifted(c);
}

Potential grid_constant(Complex c1, Complex c2, const BoundaryParams& bp, std::size_t n = 64) {
    return Potential::from_grid(std::vector<Complex>(n + 1, c1), std::vector<Complex>(n + 1, c2),
                                bp);
}

Potential random_bandlimited(gen::Rng& rng, int band_max = 5) {
    gen::SpecOptions opt;
    opt.band_max = band_max;
    return gen::random_spec(rng, opt).potential();
}

}  // namespace

TEST_CASE("chiral split") {
    const BoundaryParams bp(0.3, 0.0);

    SUBCASE("constant (1, 0)") {
        const auto p = grid_constant(1.0, 0.0, bp);
        const auto [vp, vm] = p.chiral_at(1.1);
        CHECK(std::abs(vp - 1.0) < 1e-14);
        CHECK(std::abs(vm - 1.0) < 1e-14);
    }
    SUBCASE("constant (0, 1)") {
        const auto p = grid_constant(0.0, 1.0, bp);
        const auto [vp, vm] = p.chiral_at(0.7);
        CHECK(std::abs(vp - Complex(0.0, 1.0)) < 1e-14);
        CHECK(std::abs(vm - Complex(0.0, -1.0)) < 1e-14);
    }
    SUBCASE("real potential has conjugate components") {
        gen::Rng rng(11);
        gen::SpecOptions opt;
        opt.real_coefficients = true;
        const auto p = gen::random_spec(rng, opt).potential();
        for (double x : {0.1, 1.0, 2.5}) {
            const auto [vp, vm] = p.chiral_at(x);
            CHECK(std::abs(std::conj(vp) - vm) < 1e-12);
        }
    }
}

TEST_CASE("fourier transforms of the chiral components") {
    const BoundaryParams bp(0.4, -0.1);
    const double c = 0.7;
    const auto p = constant_potential(c, bp);

    SUBCASE("constant at lambda = 0") {
        CHECK(std::abs(p.vtilde_plus(0.0) - c * kPi * Complex(1.0, 1.0)) < 1e-13);
        CHECK(std::abs(p.vtilde_minus(0.0) - c * kPi * Complex(1.0, -1.0)) < 1e-13);
    }
    SUBCASE("constant at lambda = 1: antiderivative and quadrature agree") {
        const Complex lam(1.0, 0.0);
        const Complex ikl(0.0, 1.0);
        const Complex expect_p = c * Complex(1.0, 1.0) * (1.0 - std::exp(-ikl * kPi)) / (ikl);
        CHECK(std::abs(p.vtilde_plus(lam) - expect_p) < 1e-12);
        const Complex by_quad =
            oracle::fourier([&](double) { return c * Complex(1.0, 1.0); }, lam);
        CHECK(std::abs(p.vtilde_plus(lam) - by_quad) < 1e-10);
    }
    SUBCASE("star symmetry on the real axis") {
        // f*(z) = conj(f(conj z)) evaluated at real z is the plain conjugate;
        // check through the quadrature oracle of the defining integral
        gen::Rng rng(5);
        const auto q = random_bandlimited(rng);
        for (double lam : {-2.3, 0.6, 4.1}) {
            const Complex star = oracle::fourier(
                [&](double x) { return std::conj(q.chiral_at(x).first); }, Complex(-lam, 0.0));
            CHECK(std::abs(star - std::conj(q.vtilde_plus(Complex(lam, 0.0)))) < 1e-10);
        }
    }
}

TEST_CASE("autocorrelation g") {
    const BoundaryParams bp(0.2, -0.2);

    SUBCASE("v_plus = 1 gives pi - xi") {
        const auto p = grid_constant(1.0, 0.0, bp, 128);
        for (double xi : {0.0, 0.5, 1.5, 3.0}) CHECK(std::abs(p.g_plus(xi) - (kPi - xi)) < 1e-12);
    }
    SUBCASE("vanishes at xi = pi") {
        gen::Rng rng(7);
        const auto p = random_bandlimited(rng);
        CHECK(std::abs(p.g_plus(kPi)) < 1e-12);
        CHECK(std::abs(p.g_minus(kPi)) < 1e-12);
    }
    SUBCASE("g(0) equals the chiral norm") {
        gen::Rng rng(8);
        const auto p = random_bandlimited(rng);
        const Complex direct = oracle::autocorr([&](double x) { return p.chiral_at(x).first; }, 0.0);
        CHECK(std::abs(p.g_plus(0.0) - direct) < 1e-9);
    }
    SUBCASE("single mode at xi = pi/2 matches quadrature") {
        const auto p = Potential::from_coefficients({{0, 1.0}}, bp);
        const Complex direct =
            oracle::autocorr([&](double x) { return p.chiral_at(x).first; }, kPi / 2.0);
        CHECK(std::abs(p.g_plus(kPi / 2.0) - direct) < 1e-10);
        const Complex direct_m =
            oracle::autocorr([&](double x) { return p.chiral_at(x).second; }, kPi / 2.0);
        CHECK(std::abs(p.g_minus(kPi / 2.0) - direct_m) < 1e-10);
    }
}

TEST_CASE("phi transforms") {
    const BoundaryParams bp(0.25, 0.0);

    SUBCASE("phi(0) is the integral of g") {
        gen::Rng rng(9);
        const auto p = random_bandlimited(rng, 3);
        const Complex total = oracle::simpson([&](double xi) { return p.g_plus(xi); }, 0.0, kPi, 2048);
        CHECK(std::abs(p.phi_plus(0.0) - total) < 1e-10);
    }
    SUBCASE("v_plus = 1 gives pi^2/2 at the origin") {
        const auto p = grid_constant(1.0, 0.0, bp, 256);
        CHECK(std::abs(p.phi_plus(0.0) - kPi * kPi / 2.0) < 1e-12);
    }
    SUBCASE("double-integral oracle") {
        const auto p = Potential::from_coefficients({{0, Complex(0.8, 0.3)}, {1, -0.4}}, bp);
        const Complex lam(0.7, 0.0);
        const Complex direct =
            oracle::double_transform([&](double x) { return p.chiral_at(x).first; }, lam);
        CHECK(std::abs(p.phi_plus(lam) - direct) < 1e-8);
    }
    SUBCASE("convolution identity at 100 random pairs") {
        // Relative scale 1 + |vtilde|^2 + |vtilde vtilde*|: on the real axis
        // the two extra terms coincide; off the axis the product magnitude is
        // the size of the identity itself.
        gen::Rng rng(10);
        for (int trial = 0; trial < 100; ++trial) {
            const auto p = random_bandlimited(rng);
            const Complex lam(rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0));
            const Complex vp = p.vtilde_plus(lam);
            const Complex vp_star = std::conj(p.vtilde_plus(std::conj(lam)));
            const Complex lhs = p.phi_plus(lam) + std::conj(p.phi_plus(std::conj(lam)));
            CHECK(std::abs(lhs - vp * vp_star) <=
                  1e-10 * (1.0 + std::norm(vp) + std::abs(vp * vp_star)));

            const Complex vm = p.vtilde_minus(lam);
            const Complex vm_star = std::conj(p.vtilde_minus(std::conj(lam)));
            const Complex lhs_m = p.phi_minus(lam) + std::conj(p.phi_minus(std::conj(lam)));
            CHECK(std::abs(lhs_m - vm * vm_star) <=
                  1e-10 * (1.0 + std::norm(vm) + std::abs(vm * vm_star)));
        }
    }
    SUBCASE("exponential growth bound on the imaginary axis") {
        gen::Rng rng(12);
        const auto p = random_bandlimited(rng, 4);
        const double g_l1 =
            oracle::simpson_real([&](double xi) { return std::abs(p.g_plus(xi)); }, 0.0, kPi, 2048);
        const double v_l1 = oracle::simpson_real(
            [&](double x) { return std::abs(p.chiral_at(x).first); }, 0.0, kPi, 2048);
        for (double y : {-5.0, -2.0, 1.0, 3.5, 5.0}) {
            CHECK(std::abs(p.phi_plus(Complex(0.0, y))) <=
                  std::exp(kPi * std::abs(y)) * g_l1 * (1.0 + 1e-9));
            for (double x : {-3.0, 0.7}) {
                CHECK(std::abs(p.vtilde_plus(Complex(x, y))) <=
                      std::exp(kPi * std::abs(y)) * v_l1 * (1.0 + 1e-9));
            }
        }
    }
}

TEST_CASE("V transform") {
    const BoundaryParams bp(0.6, 0.1);
    const double c = 0.45;
    const auto p = constant_potential(c, bp);

    SUBCASE("constant potential: derived closed form, not the variant reading") {
        for (double lam : {0.31, 1.7, -2.9}) {
            const Complex direct = oracle::v_big_direct([&](double) { return Complex(c); },
                                                        [&](double) { return Complex(c); },
                                                        bp.alpha(), lam);
            const Complex closed = constant_big_v(c, bp, Complex(lam, 0.0));
            CHECK(std::abs(closed - direct) < 1e-10);
            CHECK(std::abs(p.v_big(Complex(lam, 0.0)) - direct) < 1e-10);
            // The variant with a full lambda*pi argument in the second sine
            // does not reproduce the integral; the half-argument form does.
            const double variant = 4.0 * std::sqrt(2.0) * c / lam * std::sin(lam * kPi / 2.0) *
                                   std::sin(lam * kPi - bp.alpha() + kPi / 4.0);
            if (std::abs(variant - direct.real()) < 1e-6) continue;  // coincidental agreement
            CHECK(std::abs(closed.real() - direct.real()) < std::abs(variant - direct.real()));
        }
    }
    SUBCASE("real potential gives real V on the real axis") {
        gen::Rng rng(13);
        gen::SpecOptions opt;
        opt.real_coefficients = true;
        const auto q = gen::random_spec(rng, opt).potential();
        for (double lam : {-3.3, 0.2, 5.1}) {
            CHECK(std::abs(q.v_big(Complex(lam, 0.0)).imag()) < 1e-12);
            // conjugating one chiral transform lands on the other
            CHECK(std::abs(std::conj(q.vtilde_plus(Complex(lam, 0.0))) -
                           q.vtilde_minus(Complex(-lam, 0.0))) < 1e-12);
        }
    }
    SUBCASE("finite limit through lambda = 0") {
        const Complex near = constant_big_v(c, bp, Complex(1e-6, 0.0));
        const double expect = 2.0 * std::sqrt(2.0) * kPi * c * std::sin(kPi / 4.0 - bp.alpha());
        CHECK(std::abs(near.real() - expect) < 1e-4);
        const Complex direct = oracle::v_big_direct([&](double) { return Complex(c); },
                                                    [&](double) { return Complex(c); },
                                                    bp.alpha(), 1e-6);
        CHECK(std::abs(near - direct) < 1e-9);
    }
}

TEST_CASE("eigenbasis coefficients") {
    const BoundaryParams bp(0.5, -0.3);

    SUBCASE("orthonormal lookup") {
        const auto p = Potential::from_coefficients({{0, 1.0}}, bp);
        const auto c = p.coefficients(-3, 3);
        for (const auto& [k, v] : c) {
            if (k == 0)
                CHECK(std::abs(v - 1.0) < 1e-15);
            else
                CHECK(std::abs(v) < 1e-15);
        }
    }
    SUBCASE("constant potential coefficients: product form against quadrature") {
        const double c = 0.8;
        for (int k : {-2, -1, 0, 1, 2, 5}) {
            const double lk = bp.free_eigenvalue(k);
            const Complex direct = oracle::basis_coefficient(
                [&](double) { return Complex(c); }, [&](double) { return Complex(c); },
                bp.alpha(), lk);
            const double closed = constant_coefficient(c, bp, k);
            CHECK(std::abs(closed - direct.real()) < 1e-10);
            // The reading with a difference of the two sine factors does not
            // reproduce the projection.
            const double minus_reading =
                2.0 * std::sqrt(2.0) * c / (std::sqrt(kPi) * lk) *
                (std::sin(kPi * lk / 2.0) - std::sin(kPi * lk / 2.0 - bp.alpha() + kPi / 4.0));
            if (std::abs(minus_reading - direct.real()) > 1e-6)
                CHECK(std::abs(closed - direct.real()) < std::abs(minus_reading - direct.real()));
        }
    }
    SUBCASE("band Parseval") {
        gen::Rng rng(14);
        const auto p = random_bandlimited(rng, 6);
        double sum = 0.0;
        for (const auto& [k, v] : p.coefficients(-8, 8)) sum += std::norm(v);
        CHECK(sum == doctest::Approx(p.norm_sq()).epsilon(1e-10));
    }
}

TEST_CASE("synthesis") {
    const BoundaryParams bp(kPi / 4.0, 0.0);

    SUBCASE("round trip is exact") {
        const std::map<int, Complex> coeffs = {{-1, Complex(0.2, -0.4)}, {0, 0.6}, {2, Complex(0.0, 0.3)}};
        const auto p = synthesize(coeffs, bp);
        const auto back = p.coefficients(-1, 2);
        for (const auto& [k, v] : coeffs) CHECK(std::abs(back.at(k) - v) < 1e-15);
    }
    SUBCASE("degenerate boundary angles are rejected") {
        CHECK_THROWS_AS(BoundaryParams(0.0, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(BoundaryParams(1.0, 1.0 - kPi), std::invalid_argument);
    }
    SUBCASE("empty coefficient map is rejected") {
        CHECK_THROWS_WITH_AS(synthesize({}, bp), "zero potential", std::invalid_argument);
    }
    SUBCASE("single mode renders the shifted cosine") {
        const auto p = synthesize({{0, 1.0}}, bp);
        for (double x : {0.0, 0.9, 2.2, kPi}) {
            CHECK(std::abs(p.v1_at(x) - std::cos(x / 4.0 - kPi / 4.0) / std::sqrt(kPi)) < 1e-14);
            CHECK(std::abs(p.v2_at(x) - std::sin(x / 4.0 - kPi / 4.0) / std::sqrt(kPi)) < 1e-14);
        }
        const double n2 = oracle::simpson_real(
            [&](double x) { return std::norm(p.v1_at(x)) + std::norm(p.v2_at(x)); }, 0.0, kPi, 2048);
        CHECK(n2 == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("grid and coefficient representations agree") {
    gen::Rng rng(15);
    const auto p = random_bandlimited(rng, 3);
    const BoundaryParams bp = p.boundary();
    int band = 0;
    for (const auto& [k, v] : p.band()) band = std::max(band, std::abs(k));
    std::size_t n = static_cast<std::size_t>(
        std::ceil(8.0 * (band + std::abs(bp.offset()) + 1.0)));
    if (n % 2 != 0) ++n;

    const auto [v1, v2] = p.render_grid(n);
    const auto q = Potential::from_grid(v1, v2, bp);
    CHECK(q.band_fit_residual() < 1e-9);

    SUBCASE("round trip through the grid recovers the band") {
        const auto back = q.coefficients(-band, band);
        for (const auto& [k, v] : p.band()) CHECK(std::abs(back.at(k) - v) < 1e-10);
    }
    SUBCASE("all six transform evaluators agree") {
        for (const Complex lam : {Complex(0.37, 0.0), Complex(-2.1, 1.3), Complex(4.0, -0.7)}) {
            CHECK(std::abs(p.vtilde_plus(lam) - q.vtilde_plus(lam)) < 1e-8);
            CHECK(std::abs(p.vtilde_minus(lam) - q.vtilde_minus(lam)) < 1e-8);
            CHECK(std::abs(p.phi_plus(lam) - q.phi_plus(lam)) < 1e-8);
            CHECK(std::abs(p.phi_minus(lam) - q.phi_minus(lam)) < 1e-8);
        }
        for (double xi : {0.1, 1.2, 2.8}) {
            CHECK(std::abs(p.g_plus(xi) - q.g_plus(xi)) < 1e-8);
            CHECK(std::abs(p.g_minus(xi) - q.g_minus(xi)) < 1e-8);
        }
    }
}

TEST_CASE("transform set evaluators") {
    gen::Rng rng(16);
    const auto p = random_bandlimited(rng, 3);
    const auto t = p.transforms();
    const Complex lam(0.8, -0.4);
    CHECK(std::abs(t.vtilde_plus(lam) - p.vtilde_plus(lam)) == 0.0);
    CHECK(std::abs(t.vtilde_minus(lam) - p.vtilde_minus(lam)) == 0.0);
    CHECK(std::abs(t.phi_plus(lam) - p.phi_plus(lam)) == 0.0);
    CHECK(std::abs(t.phi_minus(lam) - p.phi_minus(lam)) == 0.0);
    CHECK(std::abs(t.g_plus(0.9) - p.g_plus(0.9)) == 0.0);
    CHECK(std::abs(t.g_minus(2.1) - p.g_minus(2.1)) == 0.0);
}

TEST_CASE("quadrature fallback for data outside the band") {
    const BoundaryParams bp(0.35, 0.0);
    const std::size_t n = 512;
    std::vector<Complex> v1(n + 1), v2(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double x = kPi * static_cast<double>(i) / static_cast<double>(n);
        v1[i] = x * (kPi - x) / 3.0;  // polynomial, not bandlimited
        v2[i] = 0.2 * x;
    }
    const auto p = Potential::from_grid(v1, v2, bp);
    CHECK(p.band_fit_residual() > 1e-9);

    const Complex lam(1.3, 0.0);
    const Complex direct = oracle::fourier(
        [&](double x) { return x * (kPi - x) / 3.0 + Complex(0.0, 1.0) * (0.2 * x); }, lam);
    CHECK(std::abs(p.vtilde_plus(lam) - direct) < 1e-6);
    const Complex phi_direct = oracle::double_transform(
        [&](double x) { return x * (kPi - x) / 3.0 + Complex(0.0, 1.0) * (0.2 * x); }, lam, 768);
    CHECK(std::abs(p.phi_plus(lam) - phi_direct) < 1e-5);
}
