#include <cmath>

#include "dirac/generator.hpp"
#include "dirac/inverse.hpp"
#include "doctest.h"

using namespace dirac;

namespace {

SpectralDatum free_datum(const BoundaryParams& bp, int k_min, int k_max) {
    return SpectralDatum::from_spectrum(free_spectrum(bp, k_min, k_max), bp, k_min, k_max);
}

OperatorSpec single_mode(const BoundaryParams& bp, double mu) {
    return OperatorSpec::make(mu, Potential::from_coefficients({{0, 1.0}}, bp));
}

}  // namespace

TEST_CASE("spectral datum alignment") {
    const BoundaryParams bp(0.4, -0.2);

    SUBCASE("free spectrum pairs with no shifts") {
        const auto d = free_datum(bp, -3, 3);
        CHECK(d.shifted().empty());
        CHECK(d.mu_sign() == 0);
        for (int k = -3; k <= 3; ++k) CHECK(d.eigenvalue(k) == bp.free_eigenvalue(k));
    }
    SUBCASE("single shifted root lands on its index") {
        const auto spec = single_mode(bp, 0.5);
        const auto d = gen::forward_datum(spec);
        REQUIRE(d.shifted().size() == 1);
        CHECK(d.shifted()[0] == 0);
        CHECK(d.eigenvalue(0) == doctest::Approx(bp.free_eigenvalue(0) + 0.5).epsilon(1e-12));
        CHECK(d.mu_sign() == 1);
    }
    SUBCASE("index range inference") {
        const auto spec = single_mode(bp, -0.8);
        const auto d = gen::forward_datum(spec);
        Spectrum s;
        for (int k = d.k_min(); k <= d.k_max(); ++k)
            s.entries.push_back({d.eigenvalue(k), 1, SpectrumClass::kSigma2Root, k, false});
        const auto inferred = SpectralDatum::infer(s, bp);
        CHECK(inferred.k_min() == d.k_min());
        CHECK(inferred.k_max() == d.k_max());
        CHECK(inferred.mu_sign() == -1);
    }
    SUBCASE("mixed shift directions are rejected") {
        Spectrum s;
        s.entries.push_back({bp.free_eigenvalue(0) - 0.3, 1, SpectrumClass::kSigma2Root, 0, false});
        s.entries.push_back({bp.free_eigenvalue(1) + 0.3, 1, SpectrumClass::kSigma2Root, 1, false});
        CHECK_THROWS_WITH_AS(SpectralDatum::from_spectrum(s, bp, 0, 1),
                             "inconsistent spectral data", std::runtime_error);
    }
    SUBCASE("missing entries are detected") {
        Spectrum s;
        s.entries.push_back({bp.free_eigenvalue(0), 1, SpectrumClass::kSigma0Survivor, 0, false});
        CHECK_THROWS_WITH_AS(SpectralDatum::from_spectrum(s, bp, 0, 1),
                             "spectrum does not fill the index range", std::runtime_error);
    }
}

TEST_CASE("product constant") {
    const BoundaryParams bp(kPi / 4.0, 0.0);

    SUBCASE("free datum gives sin(beta - alpha)") {
        const auto d = free_datum(bp, -4, 4);
        CHECK(constant_A(d) == doctest::Approx(bp.sin_beta_alpha()).epsilon(1e-12));
    }
    SUBCASE("single mode matches the exact ratio product") {
        const auto spec = single_mode(bp, 0.5);
        const auto d = gen::forward_datum(spec);
        double exact = bp.sin_beta_alpha();
        for (int k : d.shifted()) exact *= d.eigenvalue(k) / d.free_point(k);
        CHECK(constant_A(d) == doctest::Approx(exact).epsilon(1e-8));
        // and it is the determinant value at the origin
        CHECK(constant_A(d) ==
              doctest::Approx(CharFunEval(spec).delta(Complex(0.0, 0.0)).real()).epsilon(1e-8));
    }
    SUBCASE("real for real spectra") {
        gen::Rng rng(41);
        gen::SpecOptions opt;
        opt.band_max = 4;
        opt.max_shift = 0.95;
        const auto spec = gen::random_spec(rng, opt);
        const auto d = gen::forward_datum(spec);
        CHECK(std::isfinite(constant_A(d)));
    }
}

TEST_CASE("residue weights") {
    const BoundaryParams bp(kPi / 4.0, 0.0);

    SUBCASE("single mode recovers mu") {
        const auto spec = single_mode(bp, 0.5);
        const auto rw = residue_weights(gen::forward_datum(spec));
        CHECK(rw.weights.at(0) == doctest::Approx(0.5).epsilon(1e-9));
        for (const auto& [k, w] : rw.weights)
            if (k != 0) CHECK(std::abs(w) < 1e-12);
        CHECK(rw.crosscheck_max_rel < 1e-6);
    }
    SUBCASE("weights share the sign of mu") {
        gen::Rng rng(42);
        gen::SpecOptions opt;
        opt.band_max = 5;
        opt.mu_min = 0.1;
        opt.mu_max = 3.0;
        opt.max_shift = 0.95;
        for (int trial = 0; trial < 10; ++trial) {
            const auto spec = gen::random_spec(rng, opt);
            const auto rw = residue_weights(gen::forward_datum(spec));
            for (const auto& [k, w] : rw.weights)
                CHECK(w * (spec.mu() > 0 ? 1.0 : -1.0) >= -1e-12);
        }
    }
    SUBCASE("double points are rejected") {
        const BoundaryParams bp2(0.3, -0.1);
        const auto spec = OperatorSpec::make(
            -2.0, Potential::from_coefficients({{-1, std::sqrt(0.25)}, {1, std::sqrt(0.75)}}, bp2));
        const auto d = gen::forward_datum(spec);
        CHECK(d.has_double());
        CHECK_THROWS_WITH_AS(residue_weights(d),
                             "multiplicity-2 datum unsupported in residue recovery",
                             std::runtime_error);
    }
}

TEST_CASE("single-spectrum recovery") {
    const BoundaryParams bp(kPi / 4.0, 0.0);

    SUBCASE("single mode") {
        const auto rec = recover_single(gen::forward_datum(single_mode(bp, 0.5)));
        CHECK(rec.mu == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(rec.coefficients.at(0) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(rec.phase_ambiguous);
    }
    SUBCASE("negative coupling is recovered from the interlacing direction") {
        const auto rec = recover_single(gen::forward_datum(single_mode(bp, -0.8)));
        CHECK(rec.mu == doctest::Approx(-0.8).epsilon(1e-9));
        CHECK(rec.coefficients.at(0) == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("free datum is rejected") {
        CHECK_THROWS_WITH_AS(recover_single(free_datum(bp, -3, 3)), "zero potential",
                             std::runtime_error);
    }
    SUBCASE("moduli and coupling match the generator across random specs") {
        gen::Rng rng(43);
        gen::SpecOptions opt;
        opt.band_max = 6;
        opt.mu_min = 0.1;
        opt.mu_max = 3.0;
        opt.max_shift = 0.95;
        for (int trial = 0; trial < 15; ++trial) {
            const auto spec = gen::random_spec(rng, opt);
            const auto rec = recover_single(gen::forward_datum(spec));
            CHECK(std::abs(rec.mu - spec.mu()) <= 1e-6 * std::abs(spec.mu()));
            for (const auto& [k, v] : spec.potential().band())
                CHECK(std::abs(rec.coefficients.at(k) - std::abs(v)) <= 1e-6);
        }
    }
    SUBCASE("round trip reproduces the eigenvalues") {
        gen::Rng rng(44);
        gen::SpecOptions opt;
        opt.band_max = 6;
        opt.mu_min = 0.1;
        opt.mu_max = 3.0;
        opt.max_shift = 0.95;
        for (int trial = 0; trial < 10; ++trial) {
            const auto spec = gen::random_spec(rng, opt);
            const auto datum = gen::forward_datum(spec);
            const auto rec = recover_single(datum);
            std::map<int, Complex> coeffs;
            for (const auto& [k, v] : rec.coefficients)
                if (v != 0.0) coeffs[k] = v;
            const auto rebuilt =
                OperatorSpec::make(rec.mu, synthesize(coeffs, spec.boundary()));
            const auto datum2 = gen::forward_datum(rebuilt);
            for (int k = datum.k_min(); k <= datum.k_max(); ++k) {
                if (k < datum2.k_min() || k > datum2.k_max()) continue;
                CHECK(std::abs(datum.eigenvalue(k) - datum2.eigenvalue(k)) <= 1e-8);
            }
        }
    }
}

TEST_CASE("two-spectra recovery") {
    SUBCASE("fourier pipeline recovers signed coefficients") {
        gen::Rng rng(45);
        const auto tc = gen::make_two_spectra_case(rng);
        const auto rec = recover_two_spectra_fourier(tc.datum_a, tc.datum_b, tc.c);
        CHECK(std::abs(rec.mu - tc.mu) <= 1e-6 * std::abs(tc.mu));
        CHECK_FALSE(rec.phase_ambiguous);
        for (const auto& [k, v] : tc.true_v)
            CHECK(std::abs(rec.coefficients.at(k) - v) <= 1e-6);
        // indices outside the true band recover (numerically) zero
        for (const auto& [k, v] : rec.coefficients)
            if (!tc.true_v.count(k)) CHECK(std::abs(v) <= 1e-6);
        CHECK(rec.residuals.at("normalization_drift") < 1e-6);
    }
    SUBCASE("cauchy pipeline agrees with fourier") {
        gen::Rng rng(46);
        const auto tc = gen::make_two_spectra_case(rng);
        const auto rf = recover_two_spectra_fourier(tc.datum_a, tc.datum_b, tc.c);
        const auto rc = recover_two_spectra_cauchy(tc.datum_a, tc.datum_b, tc.c);
        CHECK(std::abs(rf.mu - rc.mu) <= 1e-4 * std::abs(rf.mu));
        for (const auto& [k, v] : rf.coefficients) {
            const auto it = rc.coefficients.find(k);
            if (it != rc.coefficients.end()) CHECK(std::abs(v - it->second) <= 1e-4);
        }
    }
    SUBCASE("an undersampled transform grid is refused") {
        gen::Rng rng(50);
        const auto tc = gen::make_two_spectra_case(rng, 96);
        TwoSpectraOptions opt;
        opt.max_step = 0.9;  // cannot resolve the pi-frequency oscillation
        CHECK_THROWS_WITH_AS(recover_two_spectra_cauchy(tc.datum_a, tc.datum_b, tc.c, opt),
                             "grid refinement required", std::runtime_error);
    }
    SUBCASE("double points in either spectrum are rejected") {
        gen::Rng rng(47);
        const auto tc = gen::make_two_spectra_case(rng);
        const BoundaryParams bp2(0.3, -0.1);
        const auto dbl_spec = OperatorSpec::make(
            -2.0, Potential::from_coefficients({{-1, std::sqrt(0.25)}, {1, std::sqrt(0.75)}}, bp2));
        const auto dbl = gen::forward_datum(dbl_spec);
        CHECK_THROWS_WITH_AS(recover_two_spectra_fourier(dbl, dbl, 1.0),
                             "multiplicity-2 datum unsupported in residue recovery",
                             std::runtime_error);
    }
}

TEST_CASE("principal-value transform") {
    SUBCASE("lorentzian pair") {
        const HilbertTransform ht([](double t) { return 1.0 / (1.0 + t * t); }, 512.0,
                                  (1 << 15) + 1);
        for (double x : {0.5, 2.0, -3.3})
            CHECK(std::abs(ht.at(x) - x / (1.0 + x * x)) < 5e-6);
    }
    SUBCASE("band-limited pair") {
        // (e^{it} - 1)/(it) has companion (1 - cos t)/t
        const HilbertTransform ht([](double t) { return sinc(t); }, 2048.0, (1 << 17) + 1);
        for (double x : {0.5, 2.0, -3.3})
            CHECK(std::abs(ht.at(x) - (1.0 - std::cos(x)) / x) < 1e-6);
    }
}

TEST_CASE("spectral density at the ladder points") {
    // At the free eigenvalues the modulation phase is a multiple of pi, so
    // the demodulated density reduces to the determinant value there:
    // mu |V(lambda_k)|^2 = 4 (-1)^{k+1} delta(lambda_k) = 4 pi mu |v_k|^2.
    // (Off the ladder the density is not determined by one spectrum.)
    const BoundaryParams bp(0.35, -0.05);
    const double mu = 0.7;
    const auto spec = single_mode(bp, mu);
    const auto datum = gen::forward_datum(spec);
    const ProductDelta pd(datum, constant_A(datum));
    auto phi = [&](double t) { return -2.0 * (pd(t) - delta_free(bp, Complex(t, 0.0)).real()); };
    const HilbertTransform ht(phi, 2048.0, (1 << 17) + 1);
    for (int k : {-2, -1, 0, 1, 3}) {
        const double x = bp.free_eigenvalue(k);
        const double theta = x * kPi + bp.beta() - bp.alpha();
        const double s = 2.0 * (std::cos(theta) * phi(x) + std::sin(theta) * ht.at(x));
        const double expect = (k == 0) ? mu * 4.0 * kPi : 0.0;
        CHECK(std::abs(s - expect) <= 1e-6 * (1.0 + std::abs(expect)));
    }
}

TEST_CASE("inverse V transform") {
    // Constant potential: reconstructing (v1, v2) away from the endpoints.
    const BoundaryParams bp(0.5, 0.05);
    const double c = 1.0 / std::sqrt(2.0 * kPi);
    auto v_big = [&](double lam) { return constant_big_v(c, bp, Complex(lam, 0.0)).real(); };
    // truncating the frequency integral leaves O(1/(width * distance to the
    // endpoints)) residue; interior samples only, at a matching tolerance
    const auto [v1, v2] = invert_v_function(v_big, bp, 60.0, 1 << 15, 64);
    for (std::size_t j = 16; j <= 48; ++j) {
        CHECK(std::abs(v1[j] - c) <= 1.5e-2);
        CHECK(std::abs(v2[j] - c) <= 1.5e-2);
    }
}

TEST_CASE("admissibility of characteristic functions") {
    const BoundaryParams bp(kPi / 4.0, 0.0);
    const Interval window{-6.5, 6.5};

    SUBCASE("forward determinants pass every condition") {
        gen::Rng rng(48);
        gen::SpecOptions opt;
        opt.band_max = 3;
        opt.mu_min = 0.2;
        opt.mu_max = 2.0;
        opt.max_shift = 0.95;
        for (int trial = 0; trial < 5; ++trial) {
            const auto spec = gen::random_spec(rng, opt);
            CharFunEval ev(spec);
            ClassJOptions copt;
            copt.f_override = [&ev](Complex z) { return ev.q(z); };
            const auto rep = classJ_validate([&ev](Complex z) { return ev.delta(z); },
                                             spec.boundary(), window, copt);
            CHECK(rep.verdict());
        }
    }
    SUBCASE("free determinant passes with unit limit") {
        const auto rep =
            classJ_validate([&](Complex z) { return delta_free(bp, z); }, bp, window);
        CHECK(rep.verdict());
        CHECK(std::abs(rep.f_limit - 1.0) < 1e-6);
    }
    SUBCASE("an offset sine fails the interlacing condition") {
        const auto rep = classJ_validate(
            [&](Complex z) { return delta_free(bp, z) + 10.0; }, bp, window);
        CHECK_FALSE(rep.verdict());
        CHECK_FALSE(rep.interlaced);
        CHECK(rep.real_symmetric);
        CHECK(rep.type_ok);
        CHECK(rep.limit_one);
        CHECK(rep.rate_bounded);
    }
}

TEST_CASE("operator realization from a characteristic function") {
    const BoundaryParams bp(0.45, -0.15);
    const Interval window{bp.free_eigenvalue(-5) - 0.5, bp.free_eigenvalue(5) + 1.5};

    SUBCASE("round trip recovers coupling and moduli") {
        gen::Rng rng(49);
        gen::SpecOptions opt;
        opt.band_max = 3;
        opt.mu_min = 0.2;
        opt.mu_max = 1.5;
        opt.max_shift = 0.9;
        const auto spec = gen::random_spec(rng, opt);
        CharFunEval ev(spec);
        const auto real = classJ_realize([&ev](Complex z) { return ev.delta(z); },
                                         spec.boundary(), window);
        CHECK(std::abs(real.spec.mu() - spec.mu()) <= 1e-7 * std::abs(spec.mu()));
        for (const auto& [k, v] : spec.potential().band())
            CHECK(std::abs(std::abs(real.spec.potential().band().at(k)) - std::abs(v)) <= 1e-7);
        CHECK(real.root_deviation <= 1e-7);
    }
    SUBCASE("single shifted root matches the single-spectrum recovery") {
        const auto spec = single_mode(bp, 0.6);
        CharFunEval ev(spec);
        const auto real =
            classJ_realize([&ev](Complex z) { return ev.delta(z); }, spec.boundary(), window);
        const auto rec = recover_single(gen::forward_datum(spec));
        CHECK(real.spec.mu() == doctest::Approx(rec.mu).epsilon(1e-8));
        CHECK(std::abs(real.spec.potential().band().at(0)) ==
              doctest::Approx(rec.coefficients.at(0)).epsilon(1e-8));
    }
    SUBCASE("the free determinant realizes no operator") {
        CHECK_THROWS_WITH_AS(
            classJ_realize([&](Complex z) { return delta_free(bp, z); }, bp, window),
            "zero potential", std::runtime_error);
    }
    SUBCASE("mixed residue signs are rejected") {
        // delta0(z) w_k/(lambda_k - z) written pole-free through the sinc form
        auto pole_term = [&](Complex z, int k, double w) {
            const double sgn = (k % 2 == 0) ? -1.0 : 1.0;
            return w * sgn * kPi * sinc((z - bp.free_eigenvalue(k)) * kPi);
        };
        auto delta = [&](Complex z) {
            return delta_free(bp, z) + pole_term(z, 0, 0.3) + pole_term(z, 1, -0.2);
        };
        CHECK_THROWS_WITH_AS(classJ_realize(delta, bp, window),
                             "not realizable: mixed residue signs", std::runtime_error);
    }
}
