#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "dirac/boundary.hpp"
#include "dirac/numerics.hpp"

namespace dirac {

// One exponential mode of the chiral components: contributes
//   v_plus(x)  += plus  * e^{+i omega x}
//   v_minus(x) += minus * e^{-i omega x}
// Eigenbasis coefficients map to omega = k + m; a constant vector part maps
// to omega = 0. All transforms below are finite closed-form sums over modes.
struct Mode {
    double omega = 0.0;
    Complex plus = 0.0;
    Complex minus = 0.0;
};

// The six scalar transforms consumed by the characteristic function:
// entire functions vtilde_pm and phi_pm, and the convolutions g_pm on [0,pi].
struct TransformSet {
    std::function<Complex(Complex)> vtilde_plus;
    std::function<Complex(Complex)> vtilde_minus;
    std::function<Complex(Complex)> phi_plus;
    std::function<Complex(Complex)> phi_minus;
    std::function<Complex(double)> g_plus;
    std::function<Complex(double)> g_minus;
};

// Vector potential v = (v1, v2) on [0, pi], held either as eigenbasis
// coefficients over a finite band (canonical form; every transform is a
// finite exact sum) or as uniform grid samples for ingested data. Immutable
// after construction.
class Potential {
public:
    static Potential from_coefficients(std::map<int, Complex> coeffs, BoundaryParams bp);
    static Potential from_grid(std::vector<Complex> v1, std::vector<Complex> v2,
                               BoundaryParams bp);

    bool coefficient_form() const { return kind_ == Kind::kCoefficients; }
    bool grid_form() const { return kind_ == Kind::kGrid; }
    // Grid data whose samples fit the eigenbasis band exactly take the same
    // closed-form path as coefficient data.
    bool closed_form() const { return !modes_.empty() || zero(); }
    bool zero() const;

    const BoundaryParams& boundary() const { return bp_; }
    const std::map<int, Complex>& band() const { return coeffs_; }
    double constant_shift() const { return shift_; }
    std::size_t grid_intervals() const { return grid_n_; }

    // Adds the constant vector (c, c) on top of a coefficient-form potential.
    Potential shifted(double c) const;

    double norm_sq() const;
    Potential normalized() const;
    Potential scaled(double factor) const;

    // Pointwise values; chiral split v_pm = v1 -+/+- i*v2.
    Complex v1_at(double x) const;
    Complex v2_at(double x) const;
    std::pair<Complex, Complex> chiral_at(double x) const;

    // Fourier transforms of v_pm over [0, pi] at complex lambda.
    Complex vtilde_plus(Complex lambda) const;
    Complex vtilde_minus(Complex lambda) const;

    // Autocorrelation g_pm(xi) = integral over [xi, pi] of conj(v_pm(x - xi)) v_pm(x).
    Complex g_plus(double xi) const;
    Complex g_minus(double xi) const;

    // phi_pm(lambda) = Fourier transform of g_pm over [0, pi].
    Complex phi_plus(Complex lambda) const;
    Complex phi_minus(Complex lambda) const;

    // V(lambda) = e^{i alpha} vtilde_plus(lambda) + e^{-i alpha} vtilde_minus(-lambda);
    // for real v and real lambda this is the real integral
    // 2 * integral of cos(lambda x - alpha) v1 + sin(lambda x - alpha) v2.
    Complex v_big(Complex lambda) const;

    // Eigenbasis coefficients <v, u_k> for k in [k_min, k_max]. Exact lookup
    // in coefficient form; aliasing-corrected quadrature projection in grid
    // form (exact whenever the samples are in-band).
    std::map<int, Complex> coefficients(int k_min, int k_max) const;

    // Renders n+1 uniform samples of (v1, v2).
    std::pair<std::vector<Complex>, std::vector<Complex>> render_grid(std::size_t n) const;

    TransformSet transforms() const;

    const std::vector<Mode>& modes() const { return modes_; }
    double band_fit_residual() const { return fit_residual_; }

private:
    enum class Kind { kCoefficients, kGrid };

    Potential(Kind kind, BoundaryParams bp) : kind_(kind), bp_(bp) {}

    void build_modes_from_coeffs();
    void build_grid_caches();
    void fit_band();
    std::map<int, Complex> project_band(int k_min, int k_max) const;
    Complex grid_value(const std::vector<Complex>& samples, double x) const;

    Kind kind_;
    BoundaryParams bp_;
    std::map<int, Complex> coeffs_;
    double shift_ = 0.0;
    std::vector<Mode> modes_;

    // Grid state.
    std::size_t grid_n_ = 0;
    double grid_h_ = 0.0;
    std::vector<Complex> v1_, v2_, vp_, vm_;
    std::vector<Complex> gp_nodes_, gm_nodes_;
    double fit_residual_ = 0.0;
};

// Builds a coefficient-form potential; an empty coefficient map is rejected.
Potential synthesize(const std::map<int, Complex>& coeffs, BoundaryParams bp);

// V(lambda) for the constant vector (c, c):
//   (4 sqrt(2) c / lambda) sin(lambda pi/2) sin(lambda pi/2 - alpha + pi/4)
// obtained by direct integration; finite at lambda = 0.
Complex constant_big_v(double c, const BoundaryParams& bp, Complex lambda);

// Eigenbasis coefficient <(c, c), u_k> = constant_big_v(c, bp, lambda_k) / (2 sqrt(pi)).
double constant_coefficient(double c, const BoundaryParams& bp, int k);

}  // namespace dirac
