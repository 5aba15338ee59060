#include "dirac/numerics.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace dirac {

namespace {

constexpr double kSeriesRadius = 0.25;

// Power series of integral x^p e^{iwx} dx over [0,pi]:
//   sum_n (iw)^n pi^{n+p+1} / ((n+p+1) * n!)   (p = 0,1,2)
Complex moment_series(Complex w, int p) {
    const Complex iw = Complex(0.0, 1.0) * w;
    Complex term = 1.0;  // (iw)^n / n!
    double pipow = 1.0;
    for (int q = 0; q < p + 1; ++q) pipow *= kPi;
    Complex sum = 0.0;
    for (int n = 0; n < 26; ++n) {
        sum += term * pipow / static_cast<double>(n + p + 1);
        term *= iw / static_cast<double>(n + 1);
        pipow *= kPi;
    }
    return sum;
}

}  // namespace

Complex moment0(Complex w) {
    if (std::abs(w) < kSeriesRadius) return moment_series(w, 0);
    const Complex iw = Complex(0.0, 1.0) * w;
    return (std::exp(iw * kPi) - 1.0) / iw;
}

Complex moment1(Complex w) {
    if (std::abs(w) < kSeriesRadius) return moment_series(w, 1);
    const Complex e = std::exp(Complex(0.0, 1.0) * w * kPi);
    return Complex(0.0, -kPi) * e / w + (e - 1.0) / (w * w);
}

Complex moment2(Complex w) {
    if (std::abs(w) < kSeriesRadius) return moment_series(w, 2);
    const Complex e = std::exp(Complex(0.0, 1.0) * w * kPi);
    const Complex w2 = w * w;
    return e * (Complex(0.0, -kPi * kPi) / w + 2.0 * kPi / w2 + Complex(0.0, 2.0) / (w2 * w)) -
           Complex(0.0, 2.0) / (w2 * w);
}

Complex sinc(Complex z) {
    if (std::abs(z) < 1e-4) {
        const Complex z2 = z * z;
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sin(z) / z;
}

double sinc(double z) {
    if (std::abs(z) < 1e-4) {
        const double z2 = z * z;
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sin(z) / z;
}

std::vector<double> uniform_quad_weights(std::size_t n, double h) {
    if (n < 2) throw std::invalid_argument("quadrature needs at least two samples");
    std::vector<double> w(n, 0.0);
    if (n == 2) {
        w[0] = w[1] = h / 2.0;
        return w;
    }
    const std::size_t intervals = n - 1;
    std::size_t simpson_end = n;  // exclusive index of the last simpson sample
    bool tail38 = false;
    if (intervals % 2 != 0) {
        if (intervals < 3) throw std::invalid_argument("cannot build quadrature rule");
        simpson_end = n - 3;  // leave the last 3 intervals for the 3/8 rule
        tail38 = true;
    }
    if (simpson_end >= 3) {
        for (std::size_t i = 0; i + 1 < simpson_end; i += 2) {
            w[i] += h / 3.0;
            w[i + 1] += 4.0 * h / 3.0;
            w[i + 2] += h / 3.0;
        }
    }
    if (tail38) {
        const std::size_t s = simpson_end - 1;  // shared sample
        w[s] += 3.0 * h / 8.0;
        w[s + 1] += 9.0 * h / 8.0;
        w[s + 2] += 9.0 * h / 8.0;
        w[s + 3] += 3.0 * h / 8.0;
    }
    return w;
}

double integrate_samples(std::span<const double> f, double h) {
    const auto w = uniform_quad_weights(f.size(), h);
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * f[i];
    return s;
}

Complex integrate_samples(std::span<const Complex> f, double h) {
    const auto w = uniform_quad_weights(f.size(), h);
    Complex s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * f[i];
    return s;
}

double integrate(const std::function<double(double)>& f, double a, double b, std::size_t n) {
    if (n % 2 != 0) ++n;
    const double h = (b - a) / static_cast<double>(n);
    std::vector<double> s(n + 1);
    for (std::size_t i = 0; i <= n; ++i) s[i] = f(a + h * static_cast<double>(i));
    return integrate_samples(s, h);
}

Complex integrate(const std::function<Complex(double)>& f, double a, double b, std::size_t n) {
    if (n % 2 != 0) ++n;
    const double h = (b - a) / static_cast<double>(n);
    std::vector<Complex> s(n + 1);
    for (std::size_t i = 0; i <= n; ++i) s[i] = f(a + h * static_cast<double>(i));
    return integrate_samples(s, h);
}

std::size_t worker_count() {
    std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("DIRAC_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) hw = std::min<std::size_t>(hw, static_cast<std::size_t>(v));
    }
    return std::min<std::size_t>(hw, 16);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min(worker_count(), n);
    if (workers <= 1 || n < 32) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t t = 0; t < workers; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] {
            for (std::size_t i = begin; i < end; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace dirac
