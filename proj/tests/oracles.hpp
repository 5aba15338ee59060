#pragma once

// Brute-force quadrature oracles for the tests. Self-contained on purpose:
// these must stay independent of the closed-form transform paths they check.

#include <complex>
#include <functional>

namespace oracle {

using Complex = std::complex<double>;
inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Composite Simpson with n subintervals (n rounded up to even).
inline Complex simpson(const std::function<Complex(double)>& f, double a, double b,
                       std::size_t n) {
    if (n % 2 != 0) ++n;
    const double h = (b - a) / static_cast<double>(n);
    Complex s = f(a) + f(b);
    for (std::size_t i = 1; i < n; ++i)
        s += f(a + h * static_cast<double>(i)) * ((i % 2 != 0) ? 4.0 : 2.0);
    return s * (h / 3.0);
}

inline double simpson_real(const std::function<double(double)>& f, double a, double b,
                           std::size_t n) {
    return simpson([&](double x) { return Complex(f(x), 0.0); }, a, b, n).real();
}

// Fourier transform of a chiral component over [0, pi].
inline Complex fourier(const std::function<Complex(double)>& v, Complex lambda,
                       std::size_t n = 2048) {
    const Complex mi(0.0, -1.0);
    return simpson([&](double x) { return std::exp(mi * lambda * x) * v(x); }, 0.0, kPi, n);
}

// Autocorrelation integral over [xi, pi] of conj(v(x - xi)) v(x).
inline Complex autocorr(const std::function<Complex(double)>& v, double xi,
                        std::size_t n = 2048) {
    if (xi >= kPi) return 0.0;
    return simpson([&](double x) { return std::conj(v(x - xi)) * v(x); }, xi, kPi, n);
}

// Nested double integral: dx over [0, pi] of v(x) * dt over [0, x] of
// e^{-i lambda (x - t)} conj(v(t)).
inline Complex double_transform(const std::function<Complex(double)>& v, Complex lambda,
                                std::size_t n = 512) {
    const Complex mi(0.0, -1.0);
    return simpson(
        [&](double x) {
            const Complex inner =
                simpson([&](double t) { return std::exp(mi * lambda * (x - t)) * std::conj(v(t)); },
                        0.0, x, n);
            return inner * v(x);
        },
        0.0, kPi, n);
}

// 2 * integral of cos(lambda x - alpha) v1 + sin(lambda x - alpha) v2.
inline Complex v_big_direct(const std::function<Complex(double)>& v1,
                            const std::function<Complex(double)>& v2, double alpha,
                            double lambda, std::size_t n = 4096) {
    return 2.0 * simpson(
                     [&](double x) {
                         return std::cos(lambda * x - alpha) * v1(x) +
                                std::sin(lambda * x - alpha) * v2(x);
                     },
                     0.0, kPi, n);
}

// <v, u_k> against the free basis function with ladder value lk.
inline Complex basis_coefficient(const std::function<Complex(double)>& v1,
                                 const std::function<Complex(double)>& v2, double alpha,
                                 double lk, std::size_t n = 4096) {
    return simpson(
               [&](double x) {
                   return std::cos(lk * x - alpha) * v1(x) + std::sin(lk * x - alpha) * v2(x);
               },
               0.0, kPi, n) /
           std::sqrt(kPi);
}

}  // namespace oracle
