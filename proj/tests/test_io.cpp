#include <cmath>

#include "dirac/generator.hpp"
#include "dirac/io.hpp"
#include "doctest.h"

using namespace dirac;

TEST_CASE("operator json round trip") {
    SUBCASE("coefficient form") {
        gen::Rng rng(51);
        const auto spec = gen::random_spec(rng);
        const auto text = io::write_spec_json(spec);
        const auto back = io::read_spec_json(text);
        CHECK(back.mu() == spec.mu());
        CHECK(back.boundary().alpha() == spec.boundary().alpha());
        for (const auto& [k, v] : spec.potential().band())
            CHECK(std::abs(back.potential().band().at(k) - v) == 0.0);
    }
    SUBCASE("grid form") {
        const BoundaryParams bp(0.4, -0.1);
        std::vector<Complex> v1(65), v2(65);
        for (std::size_t i = 0; i <= 64; ++i) {
            const double x = kPi * static_cast<double>(i) / 64.0;
            v1[i] = std::cos(x);
            v2[i] = Complex(0.0, 0.1) * x;
        }
        const auto spec = OperatorSpec::make(1.0, Potential::from_grid(v1, v2, bp));
        const auto back = io::read_spec_json(io::write_spec_json(spec));
        CHECK(back.potential().grid_form());
        CHECK(back.potential().grid_intervals() == 64);
        CHECK(std::abs(back.mu() - spec.mu()) < 1e-15);
    }
    SUBCASE("malformed input") {
        CHECK_THROWS_AS(io::read_spec_json("{"), io::MalformedInput);
        CHECK_THROWS_AS(io::read_spec_json(R"({"mu": 1.0})"), io::MalformedInput);
        CHECK_THROWS_AS(
            io::read_spec_json(
                R"({"mu":1,"alpha":0,"beta":0,"potential":{"type":"fourier","coeffs":[]}})"),
            io::MalformedInput);  // degenerate angles
        CHECK_THROWS_AS(
            io::read_spec_json(
                R"({"mu":1,"alpha":0.5,"beta":0,"potential":{"type":"weird"}})"),
            io::MalformedInput);
    }
}

TEST_CASE("spectrum csv round trip") {
    gen::Rng rng(52);
    gen::SpecOptions opt;
    opt.band_max = 3;
    opt.max_shift = 0.95;
    const auto spec = gen::random_spec(rng, opt);
    const auto datum = gen::forward_datum(spec);
    Spectrum s;
    for (int k = datum.k_min(); k <= datum.k_max(); ++k) {
        const bool shifted = std::find(datum.shifted().begin(), datum.shifted().end(), k) !=
                             datum.shifted().end();
        s.entries.push_back({datum.eigenvalue(k), 1,
                             shifted ? SpectrumClass::kSigma2Root
                                     : SpectrumClass::kSigma0Survivor,
                             k, false});
    }
    const auto text = io::write_spectrum_csv(s, spec.boundary(), spec.mu());
    const auto file = io::read_spectrum_csv(text);
    REQUIRE(file.alpha.has_value());
    CHECK(*file.alpha == spec.boundary().alpha());
    REQUIRE(file.beta.has_value());
    CHECK(*file.beta == spec.boundary().beta());
    REQUIRE(file.spectrum.entries.size() == s.entries.size());
    for (std::size_t i = 0; i < s.entries.size(); ++i) {
        CHECK(file.spectrum.entries[i].lambda == s.entries[i].lambda);  // bit-exact
        CHECK(file.spectrum.entries[i].k_hint == s.entries[i].k_hint);
        CHECK(file.spectrum.entries[i].cls == s.entries[i].cls);
    }

    SUBCASE("malformed rows are reported") {
        CHECK_THROWS_AS(io::read_spectrum_csv("nonsense\n"), io::MalformedInput);
        CHECK_THROWS_AS(io::read_spectrum_csv("k_hint,lambda,multiplicity,class\n0,oops,1,double\n"),
                        io::MalformedInput);
    }
}

TEST_CASE("recovered operator json") {
    RecoveredOperator rec;
    rec.mu = -1.25;
    rec.coefficients = {{-1, 0.6}, {0, -0.8}};
    rec.phase_ambiguous = false;
    rec.residuals["normalization_drift"] = 1e-9;
    rec.warnings.push_back("normalization drift");
    const auto text = io::write_recovered_json(rec);
    CHECK(text.find("\"mu\": -1.25") != std::string::npos);
    CHECK(text.find("phase_ambiguous") != std::string::npos);
    CHECK(text.find("normalization drift") != std::string::npos);
}

TEST_CASE("doubles survive the 17-digit format") {
    gen::Rng rng(53);
    for (int i = 0; i < 200; ++i) {
        const double x = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-8.0, 8.0));
        CHECK(std::strtod(io::format_double(x).c_str(), nullptr) == x);
    }
}
