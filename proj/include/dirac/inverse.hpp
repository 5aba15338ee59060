#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dirac/spectrum.hpp"

namespace dirac {

// Eigenvalue list aligned with the free ladder over [k_min, k_max]: each
// index carries its eigenvalue lambda_k(mu); entries matching a free point
// within match_tol are snapped to it, the remaining roots are assigned in
// ascending order to the remaining indices (interlacing preserves order, so
// this is the unique consistent pairing for either sign of mu).
class SpectralDatum {
public:
    static SpectralDatum from_spectrum(const Spectrum& s, BoundaryParams bp, int k_min,
                                       int k_max, double match_tol = 1e-9);
    // Infers the index range from the entry count and positions.
    static SpectralDatum infer(const Spectrum& s, BoundaryParams bp, double match_tol = 1e-9);

    const BoundaryParams& boundary() const { return bp_; }
    int k_min() const { return k_min_; }
    int k_max() const { return k_max_; }
    double eigenvalue(int k) const;
    double free_point(int k) const { return bp_.free_eigenvalue(k); }
    const std::vector<int>& shifted() const { return shifted_; }
    bool has_double() const { return has_double_; }
    int mu_sign() const { return mu_sign_; }

private:
    SpectralDatum(BoundaryParams bp) : bp_(bp) {}
    BoundaryParams bp_;
    int k_min_ = 0, k_max_ = -1;
    std::map<int, double> eigen_;
    std::vector<int> shifted_;
    bool has_double_ = false;
    int mu_sign_ = 0;
};

// Characteristic function rebuilt from a spectral datum: the free function
// times the finite product of shifted-pair corrections, scaled so the value
// at the origin equals the extrapolated constant.
class ProductDelta {
public:
    ProductDelta(const SpectralDatum& datum, double a_constant);
    double operator()(double x) const;
    Complex at(Complex lambda) const;
    // F(lambda) = delta/delta_free as the bare zero-ratio product; bounded on
    // the imaginary axis (no e^{pi y} growth), poles at the shifted free points.
    Complex zero_ratio(Complex lambda) const;
    double a_constant() const { return a_; }

private:
    struct Pair {
        int k;
        double a, b;
    };
    int nearest_pair(double x) const;

    BoundaryParams bp_;
    double a_;
    double ratio_;  // a_constant / sin(beta - alpha)
    std::vector<Pair> pairs_;
};

// The value Delta(mu, 0) of the product representation, recovered from the
// datum by evaluating the free/perturbed zero-ratio product on the imaginary
// axis at y in {1e2, 1e3, 1e4} and extrapolating in 1/y. Throws
// "product not converged" when the extrapolation stages disagree, and
// "characteristic function vanishes at origin" when the limit is ~0.
double constant_A(const SpectralDatum& datum);

struct ResidueWeights {
    std::map<int, double> weights;  // k -> mu |v_k|^2 (0 at unshifted indices)
    double crosscheck_max_rel = 0.0;
    double a_constant = 0.0;
};

// mu |v_k|^2 by the residue of the zero-ratio product at each free point;
// the closed product is cross-checked against a numeric residue limit and
// disagreement beyond 1e-6 relative is an error. Double points are rejected.
ResidueWeights residue_weights(const SpectralDatum& datum);

struct RecoveredOperator {
    double mu = 0.0;
    std::map<int, double> coefficients;  // |v_k| (phase-ambiguous) or signed v_k
    bool phase_ambiguous = true;
    std::map<std::string, double> residuals;
    std::vector<std::string> warnings;
};

// Single-spectrum recovery: mu = sum of the residue weights (unit-norm
// convention), |v_k| = sqrt(weight/mu); phases are not recoverable and are
// reported as +1.
RecoveredOperator recover_single(const SpectralDatum& datum);

struct TwoSpectraOptions {
    // Tail of the shifted spectrum beyond datum B's range, accounted for in
    // closed form using the known shift; summation cutoff.
    long tail_terms = 200000;
    // Hilbert-transform grid (cauchy route): per datum, the half width is
    // max(min_half_width, 4 * extent of the shifted pairs) and the node count
    // keeps the spacing at or below max_step (the integrand oscillates at
    // frequency ~pi). The refinement gate compares the transform against its
    // stride-2 subgrid; the singular-cell correction residual scales like
    // h^3, so a healthy grid sits far below this bound.
    double min_half_width = 50.0;
    double max_step = 1.0 / 32.0;
    double refine_tol = 5e-3;
};

// Recovery of mu and the signed real coefficients v_k from the spectra of
// the operator and of its constant-shifted companion (shift vector (c, c)).
RecoveredOperator recover_two_spectra_fourier(const SpectralDatum& datum_a,
                                              const SpectralDatum& datum_b, double c,
                                              const TwoSpectraOptions& opt = {});

RecoveredOperator recover_two_spectra_cauchy(const SpectralDatum& datum_a,
                                             const SpectralDatum& datum_b, double c,
                                             const TwoSpectraOptions& opt = {});

// Principal-value Hilbert companion: (1/pi) p.v. integral of phi(t)/(x - t)
// over [-half_width, half_width], evaluated at grid-aligned x (index j of
// x = -half_width + j h). Trapezoid with an analytic singular cell.
class HilbertTransform {
public:
    HilbertTransform(std::function<double(double)> phi, double half_width, std::size_t points);
    double node(std::size_t j) const { return -w_ + h_ * static_cast<double>(j); }
    double step() const { return h_; }
    std::size_t points() const { return n_; }
    double at_node(std::size_t j) const;
    double at_node_coarse(std::size_t j) const;  // stride-2 estimate for refinement checks
    // Quintic interpolation of the transform at arbitrary x inside the grid.
    double at(double x) const;
    double phi_at(double x) const;

private:
    std::function<double(double)> phi_;
    double w_, h_;
    std::size_t n_;
    std::vector<double> vals_;
};

// Inverse of the V-transform: v1(x) = (1/2pi) integral V(l) cos(l x - alpha),
// v2 with sin, truncated to |l| <= lambda_max (trapezoid). Boundary-layer
// truncation error ~ 1/((pi - x) lambda_max) applies near the endpoints.
std::pair<std::vector<Complex>, std::vector<Complex>> invert_v_function(
    const std::function<double(double)>& v_big, const BoundaryParams& bp, double lambda_max,
    std::size_t n_lambda, std::size_t n_x);

struct ClassJOptions {
    double root_match_tol = 1e-9;
    double limit_tol = 1e-3;
    double type_margin = 0.02;
    std::vector<double> probe_y = {25.0, 50.0, 100.0};
    // Optional exact evaluator of F(lambda) = delta/delta_free for the
    // imaginary-axis limits (avoids e^{pi y} overflow when available).
    std::function<Complex(Complex)> f_override;
};

struct ClassJReport {
    bool real_symmetric = false;
    bool origin_nonzero = false;
    bool type_ok = false;
    bool bounded_ok = false;
    bool roots_real_simple = false;
    bool interlaced = false;
    bool limit_one = false;
    bool rate_bounded = false;
    double type_estimate = 0.0;
    double sup_window = 0.0;
    double origin_value = 0.0;
    double f_limit = 0.0;
    double f_rate = 0.0;
    int n_roots = 0;
    int n_doubles = 0;
    int direction = 0;
    std::vector<std::string> notes;
    bool verdict() const {
        return real_symmetric && origin_nonzero && type_ok && bounded_ok &&
               roots_real_simple && interlaced && limit_one && rate_bounded;
    }
};

// Membership check for admissible characteristic functions: symmetry and
// growth, real simple roots (finitely many doubles at free points), partial
// interlacing with the free ladder, and the two imaginary-axis limits of
// delta/delta_free. Diagnostic; never throws on failed conditions.
ClassJReport classJ_validate(const std::function<Complex(Complex)>& delta,
                             const BoundaryParams& bp, Interval window,
                             const ClassJOptions& opt = {});

struct RealizedOperator {
    OperatorSpec spec;
    std::map<int, double> residues;  // A_k at each free point
    double root_deviation = 0.0;     // forward roots vs input roots
};

// Builds the operator whose characteristic function matches delta: residues
// A_k of delta/delta_free at the free points give mu = sum A_k and
// |v_k| = sqrt(A_k/mu); the forward spectrum is verified against the input.
RealizedOperator classJ_realize(const std::function<Complex(Complex)>& delta,
                               const BoundaryParams& bp, Interval window,
                               const ClassJOptions& opt = {});

}  // namespace dirac
