#pragma once

#include <cstdint>
#include <random>

#include "dirac/inverse.hpp"

namespace dirac::gen {

// Deterministic uniform deviates built directly from mt19937_64 bits, so the
// same seed reproduces the same spec on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    int uniform_int(int a, int b) {
        return a + static_cast<int>(uniform() * static_cast<double>(b - a + 1));
    }
    bool coin(double p) { return uniform() < p; }

private:
    std::mt19937_64 eng_;
};

struct SpecOptions {
    int band_min = 1;
    int band_max = 8;
    double mu_min = 0.1;
    double mu_max = 5.0;
    bool real_coefficients = false;
    bool allow_negative_mu = true;
    double min_coefficient = 0.05;  // modulus floor before normalization
    double zero_fraction = 0.0;     // chance that an in-band index carries v_k = 0
    double max_shift = 0.0;         // resample until every root shift stays below this (0 = off)
};

BoundaryParams random_boundary(Rng& rng);
OperatorSpec random_spec(Rng& rng, const SpecOptions& opt = {});

// Forward data for the two-spectra recovery: a real mixed-sign potential over
// four eigenbasis modes, its constant-shifted companion, and the two spectral
// data sets. The companion's index range extends to +-tail_range because the
// constant shift perturbs every free eigenvalue.
struct TwoSpectraCase {
    OperatorSpec spec_a;
    OperatorSpec spec_b;
    SpectralDatum datum_a;
    SpectralDatum datum_b;
    std::map<int, double> true_v;  // signed coefficients of the unit-norm potential
    double mu;
    double c;
};

TwoSpectraCase make_two_spectra_case(Rng& rng, int tail_range = 512, double c = 1.0);

// Forward spectrum + aligned datum for a spec whose band sits in [-band, band].
SpectralDatum forward_datum(const OperatorSpec& spec, int k_margin = 2);

}  // namespace dirac::gen
