#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace dirac {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Closed interval [lo, hi] on the real axis.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

inline Complex cis(double t) { return {std::cos(t), std::sin(t)}; }

// moment0(w) = integral of e^{iwx} over [0,pi]; entire in w, series below |w| = 1/4.
Complex moment0(Complex w);

// moment1(w) = integral of x e^{iwx} over [0,pi].
Complex moment1(Complex w);

// moment2(w) = integral of x^2 e^{iwx} over [0,pi].
Complex moment2(Complex w);

// sinc(z) = sin(z)/z with the removable singularity handled.
Complex sinc(Complex z);
double sinc(double z);

// Quadrature weights for n uniformly spaced samples with spacing h covering
// [a, a+(n-1)h]. Composite Simpson when the interval count is even; a 3/8
// tail is blended in otherwise. n == 2 falls back to the trapezoid rule.
std::vector<double> uniform_quad_weights(std::size_t n, double h);

double integrate_samples(std::span<const double> f, double h);
Complex integrate_samples(std::span<const Complex> f, double h);

// Composite Simpson of f over [a,b] with n subintervals (n rounded up to even).
double integrate(const std::function<double(double)>& f, double a, double b, std::size_t n);
Complex integrate(const std::function<Complex(double)>& f, double a, double b, std::size_t n);

// Runs fn(i) for i in [0, n). Thread count is capped by DIRAC_THREADS (>=1);
// results must not share mutable state across indices.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);
std::size_t worker_count();

}  // namespace dirac
