#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dirac/charfun.hpp"

namespace dirac {

enum class SpectrumClass { kSigma0Survivor, kSigma2Root, kDoublePoint };

std::string_view to_string(SpectrumClass c);
std::optional<SpectrumClass> spectrum_class_from(std::string_view s);

struct SpectrumEntry {
    double lambda = 0.0;
    int multiplicity = 1;
    SpectrumClass cls = SpectrumClass::kSigma0Survivor;
    int k_hint = 0;           // nearest free index
    bool near_boundary = false;
};

// Ordered eigenvalue list; strictly increasing lambda, multiplicity 2 only on
// double points (free eigenvalue that is also a zero of the resolvent sum).
struct Spectrum {
    std::vector<SpectrumEntry> entries;
    std::size_t total_multiplicity() const;
};

Spectrum free_spectrum(const BoundaryParams& bp, int k_min, int k_max);

// sigma0: free indices with v_k = 0; sigma1: free indices with v_k != 0;
// sigma2: zeros of the resolvent sum, in increasing order. For mu > 0 the
// j-th zero lies strictly right of the j-th sigma1 point (mirrored for
// mu < 0), one zero per consecutive sigma1 gap plus one exterior zero.
struct Classification {
    std::vector<int> sigma0;
    std::vector<int> sigma1;
    std::vector<double> sigma2;
};

Classification classify(const OperatorSpec& spec, int k_min, int k_max,
                        double zero_tol = 1e-10);

struct Root {
    double lambda = 0.0;
    int multiplicity = 1;
    bool near_boundary = false;
};

struct RootScan {
    std::vector<Root> roots;
    std::vector<std::string> warnings;
};

struct RootFindOptions {
    double tol = 1e-12;
    double scale = 1.0;
    double f_tol = 1e-9;        // double-root |f| threshold, times scale
    double deriv_tol = 1e-6;    // double-root |f'| threshold, times scale
    double curvature_tol = 1e-6;
    int samples_per_bracket = 16;
    bool expect_root_per_bracket = false;
};

// Bracketed scan for the real zeros of a real-analytic function: sign-change
// bisection plus Newton polish; bracketed |f| minima below threshold with
// small derivative and genuine curvature are reported as multiplicity 2.
RootScan find_roots(const std::function<double(double)>& f, Interval window,
                    const std::vector<Interval>& brackets, const RootFindOptions& opt = {});

// Unit cells centered on free eigenvalues, extended one cell beyond the window.
std::vector<Interval> unit_cell_brackets(const BoundaryParams& bp, Interval window);

// Merges the classification into the spectrum (sigma0 survivors, sigma2
// roots polished on the characteristic function, coincidences as double
// points) and cross-checks against a direct root scan of delta.
Spectrum assemble(const OperatorSpec& spec, Interval window, int k_min, int k_max,
                  double tol = 1e-12);

// Independent oracle: eigenvalues of diag(lambda_k(0)) + mu v v^H over the
// band, via per-interval bisection of the secular equation, merged with the
// untouched free eigenvalues. Deliberately shares no code with assemble().
std::vector<double> matrix_oracle(const OperatorSpec& spec, int k_min, int k_max);

}  // namespace dirac
