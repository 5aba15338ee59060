#include "dirac/generator.hpp"

#include <cmath>
#include <stdexcept>

#include "dirac/spectrum.hpp"

namespace dirac::gen {

BoundaryParams random_boundary(Rng& rng) {
    const double m = (rng.coin(0.5) ? 1.0 : -1.0) * rng.uniform(0.08, 0.45);
    const double beta = rng.uniform(-0.5, 0.5);
    return BoundaryParams(beta + m * kPi, beta);
}

OperatorSpec random_spec(Rng& rng, const SpecOptions& opt) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        const BoundaryParams bp = random_boundary(rng);
        const int band = rng.uniform_int(opt.band_min, opt.band_max);
        std::map<int, Complex> coeffs;
        double norm2 = 0.0;
        for (int k = -band; k <= band; ++k) {
            if (opt.zero_fraction > 0.0 && rng.coin(opt.zero_fraction)) continue;
            const double mod = rng.uniform(opt.min_coefficient, 1.0);
            Complex v;
            if (opt.real_coefficients) {
                v = (rng.coin(0.5) ? 1.0 : -1.0) * mod;
            } else {
                v = mod * cis(rng.uniform(0.0, 2.0 * kPi));
            }
            coeffs[k] = v;
            norm2 += std::norm(v);
        }
        if (coeffs.empty() || norm2 <= 0.0) continue;
        const double scale = 1.0 / std::sqrt(norm2);
        for (auto& [k, v] : coeffs) v *= scale;

        double mu = rng.uniform(opt.mu_min, opt.mu_max);
        if (opt.allow_negative_mu && rng.coin(0.5)) mu = -mu;

        OperatorSpec spec = OperatorSpec::make(mu, Potential::from_coefficients(coeffs, bp));
        if (opt.max_shift > 0.0) {
            const auto cls = classify(spec, -band - 1, band + 1);
            bool ok = true;
            for (std::size_t j = 0; j < cls.sigma2.size() && ok; ++j) {
                const double a = bp.free_eigenvalue(cls.sigma1[j]);
                if (std::abs(cls.sigma2[j] - a) >= opt.max_shift) ok = false;
            }
            if (!ok) continue;
        }
        return spec;
    }
    throw std::runtime_error("random spec generation failed to satisfy constraints");
}

SpectralDatum forward_datum(const OperatorSpec& spec, int k_margin) {
    int band = 0;
    for (const auto& [k, v] : spec.potential().band())
        if (v != Complex(0.0)) band = std::max(band, std::abs(k));
    const BoundaryParams& bp = spec.boundary();
    // Room for the exterior root on the side mu pushes towards, a snug margin
    // on the other; the index range then covers every ladder point inside.
    const double reach = std::abs(spec.mu()) + 0.6;
    const double lo_margin = spec.mu() < 0.0 ? reach : 0.45;
    const double hi_margin = spec.mu() > 0.0 ? reach : 0.45;
    const Interval window{bp.free_eigenvalue(-band - k_margin) - lo_margin,
                          bp.free_eigenvalue(band + k_margin) + hi_margin};
    const int k_lo = static_cast<int>(std::ceil(window.lo - bp.offset()));
    const int k_hi = static_cast<int>(std::floor(window.hi - bp.offset()));
    const Spectrum s = assemble(spec, window, k_lo, k_hi);
    return SpectralDatum::from_spectrum(s, bp, k_lo, k_hi);
}

TwoSpectraCase make_two_spectra_case(Rng& rng, int tail_range, double c) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        const BoundaryParams bp = random_boundary(rng);
        // reject boundaries where the shift's coefficients get small in-band
        bool ck_ok = true;
        for (int k = -3; k <= 3; ++k)
            if (std::abs(constant_coefficient(c, bp, k)) < 0.02) ck_ok = false;
        if (!ck_ok) continue;

        // four real modes of mixed sign inside [-2, 2]
        std::vector<int> idx = {-2, -1, 0, 1, 2};
        idx.erase(idx.begin() + rng.uniform_int(0, 4));
        std::map<int, Complex> coeffs;
        double norm2 = 0.0;
        bool pos = false, neg = false;
        for (int k : idx) {
            const double v = (rng.coin(0.5) ? 1.0 : -1.0) * rng.uniform(0.15, 1.0);
            (v > 0 ? pos : neg) = true;
            coeffs[k] = v;
            norm2 += v * v;
        }
        if (!pos || !neg) continue;
        std::map<int, double> true_v;
        for (auto& [k, v] : coeffs) {
            v /= std::sqrt(norm2);
            true_v[k] = v.real();
        }
        const double mu = (rng.coin(0.5) ? 1.0 : -1.0) * rng.uniform(0.3, 2.5);

        try {
            OperatorSpec spec_a = OperatorSpec::make(mu, Potential::from_coefficients(coeffs, bp));
            SpectralDatum datum_a = forward_datum(spec_a, 2);

            OperatorSpec spec_b = OperatorSpec::make(mu, spec_a.potential().shifted(c));
            const double reach_b = std::abs(spec_b.mu()) + 0.6;
            const double lo_b = spec_b.mu() < 0.0 ? reach_b : 0.45;
            const double hi_b = spec_b.mu() > 0.0 ? reach_b : 0.45;
            const Interval window_b{bp.free_eigenvalue(-tail_range) - lo_b,
                                    bp.free_eigenvalue(tail_range) + hi_b};
            const int kb_lo = static_cast<int>(std::ceil(window_b.lo - bp.offset()));
            const int kb_hi = static_cast<int>(std::floor(window_b.hi - bp.offset()));
            const Spectrum sb = assemble(spec_b, window_b, kb_lo, kb_hi);
            SpectralDatum datum_b = SpectralDatum::from_spectrum(sb, bp, kb_lo, kb_hi);
            return TwoSpectraCase{std::move(spec_a), std::move(spec_b), std::move(datum_a),
                                  std::move(datum_b), std::move(true_v), mu, c};
        } catch (const std::runtime_error&) {
            continue;
        }
    }
    throw std::runtime_error("two-spectra case generation failed");
}

}  // namespace dirac::gen
