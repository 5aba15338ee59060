#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "dirac/inverse.hpp"
#include "dirac/spectrum.hpp"

namespace dirac::io {

// 17 significant digits: round-trips doubles bit-exactly.
std::string format_double(double v);

struct MalformedInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operator description:
//   {"mu": x, "alpha": a, "beta": b, "potential": {...}}
// with potential either
//   {"type": "fourier", "coeffs": [{"k": int, "re": f, "im": f}, ...]}
// or
//   {"type": "grid", "n": N, "v1": [[re, im], ...], "v2": [[re, im], ...]}
// (n+1 sample pairs per component, angles in radians).
OperatorSpec read_spec_json(const std::string& text);
OperatorSpec read_spec_json_file(const std::string& path);
std::string write_spec_json(const OperatorSpec& spec);

struct SpectrumFile {
    Spectrum spectrum;
    std::optional<double> alpha, beta, mu;
};

// CSV with header `k_hint,lambda,multiplicity,class` and `# key=value`
// metadata comments carrying the boundary angles.
std::string write_spectrum_csv(const Spectrum& s, const BoundaryParams& bp, double mu);
SpectrumFile read_spectrum_csv(const std::string& text);
SpectrumFile read_spectrum_csv_file(const std::string& path);

std::string write_recovered_json(const RecoveredOperator& rec);

}  // namespace dirac::io
