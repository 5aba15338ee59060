#include "dirac/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dirac {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kSmallDelta = 1e-5;

// integral over [xi, pi] of e^{i delta x} dx, entire in delta.
Complex tail_factor(double xi, double delta) {
    if (delta == 0.0) return kPi - xi;
    if (std::abs(delta) < kSmallDelta)
        return (kPi - xi) + 0.5 * kI * delta * (kPi * kPi - xi * xi);
    return (cis(delta * kPi) - cis(delta * xi)) / (kI * delta);
}

// integral over [0, pi] of e^{i w xi} * tail_factor(xi, delta) d xi.
Complex kernel_K(Complex w, double delta) {
    const Complex e0 = moment0(w);
    if (delta == 0.0) return kPi * e0 - moment1(w);
    if (std::abs(delta) < kSmallDelta) {
        const Complex base = kPi * e0 - moment1(w);
        return base + 0.5 * kI * delta * (kPi * kPi * e0 - moment2(w));
    }
    return (cis(delta * kPi) * e0 - moment0(w + delta)) / (kI * delta);
}

void cholesky_solve(std::vector<double>& a, std::size_t n, std::vector<Complex>& rhs) {
    // In-place LL^T factorization of the symmetric positive definite matrix a
    // (row-major n x n), then solve for the complex right-hand side.
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
        if (d <= 0.0) throw std::runtime_error("band projection: Gram matrix not positive definite");
        const double ljj = std::sqrt(d);
        a[j * n + j] = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = s / ljj;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        Complex s = rhs[i];
        for (std::size_t k = 0; k < i; ++k) s -= a[i * n + k] * rhs[k];
        rhs[i] = s / a[i * n + i];
    }
    for (std::size_t ii = n; ii-- > 0;) {
        Complex s = rhs[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= a[k * n + ii] * rhs[k];
        rhs[ii] = s / a[ii * n + ii];
    }
}

}  // namespace

Potential Potential::from_coefficients(std::map<int, Complex> coeffs, BoundaryParams bp) {
    for (const auto& [k, v] : coeffs) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("potential coefficient is not finite");
    }
    Potential p(Kind::kCoefficients, bp);
    p.coeffs_ = std::move(coeffs);
    p.build_modes_from_coeffs();
    return p;
}

Potential Potential::from_grid(std::vector<Complex> v1, std::vector<Complex> v2,
                               BoundaryParams bp) {
    if (v1.size() != v2.size()) throw std::invalid_argument("grid components differ in length");
    if (v1.size() < 17) throw std::invalid_argument("grid needs at least N = 16 intervals");
    Potential p(Kind::kGrid, bp);
    p.v1_ = std::move(v1);
    p.v2_ = std::move(v2);
    p.grid_n_ = p.v1_.size() - 1;
    p.grid_h_ = kPi / static_cast<double>(p.grid_n_);
    p.build_grid_caches();
    p.fit_band();
    return p;
}

bool Potential::zero() const {
    if (kind_ == Kind::kCoefficients) {
        if (shift_ != 0.0) return false;
        return std::all_of(coeffs_.begin(), coeffs_.end(),
                           [](const auto& kv) { return kv.second == Complex(0.0); });
    }
    return std::all_of(v1_.begin(), v1_.end(), [](Complex z) { return z == Complex(0.0); }) &&
           std::all_of(v2_.begin(), v2_.end(), [](Complex z) { return z == Complex(0.0); });
}

void Potential::build_modes_from_coeffs() {
    modes_.clear();
    const double m = bp_.offset();
    const Complex ep = cis(-bp_.alpha()) / std::sqrt(kPi);
    const Complex en = cis(bp_.alpha()) / std::sqrt(kPi);
    for (const auto& [k, vk] : coeffs_) {
        if (vk == Complex(0.0)) continue;
        modes_.push_back({static_cast<double>(k) + m, vk * ep, vk * en});
    }
    if (shift_ != 0.0)
        modes_.push_back({0.0, shift_ * Complex(1.0, 1.0), shift_ * Complex(1.0, -1.0)});
}

void Potential::build_grid_caches() {
    const std::size_t n = grid_n_;
    vp_.resize(n + 1);
    vm_.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        vp_[i] = v1_[i] + kI * v2_[i];
        vm_[i] = v1_[i] - kI * v2_[i];
    }
    gp_nodes_.assign(n + 1, 0.0);
    gm_nodes_.assign(n + 1, 0.0);
    std::vector<Complex> buf(n + 1);
    for (std::size_t l = 0; l < n; ++l) {
        const std::size_t cnt = n - l + 1;
        for (std::size_t i = l; i <= n; ++i) buf[i - l] = std::conj(vp_[i - l]) * vp_[i];
        gp_nodes_[l] = integrate_samples(std::span<const Complex>(buf.data(), cnt), grid_h_);
        for (std::size_t i = l; i <= n; ++i) buf[i - l] = std::conj(vm_[i - l]) * vm_[i];
        gm_nodes_[l] = integrate_samples(std::span<const Complex>(buf.data(), cnt), grid_h_);
    }
}

void Potential::fit_band() {
    const double m = bp_.offset();
    const int k_fit = static_cast<int>(std::floor(static_cast<double>(grid_n_) / 8.0 -
                                                  std::abs(m) - 1.0));
    if (k_fit < 0) return;
    const int k_cap = std::min(k_fit, 96);
    auto fit = project_band(-k_cap, k_cap);

    // Residual of the fitted band relative to the samples.
    double res2 = 0.0, norm2 = 0.0;
    const auto w = uniform_quad_weights(grid_n_ + 1, grid_h_);
    for (std::size_t i = 0; i <= grid_n_; ++i) {
        const double x = grid_h_ * static_cast<double>(i);
        Complex f1 = 0.0, f2 = 0.0;
        for (const auto& [k, c] : fit) {
            const double ph = bp_.free_eigenvalue(k) * x - bp_.alpha();
            f1 += c * std::cos(ph);
            f2 += c * std::sin(ph);
        }
        f1 /= std::sqrt(kPi);
        f2 /= std::sqrt(kPi);
        res2 += w[i] * (std::norm(v1_[i] - f1) + std::norm(v2_[i] - f2));
        norm2 += w[i] * (std::norm(v1_[i]) + std::norm(v2_[i]));
    }
    fit_residual_ = std::sqrt(std::max(res2, 0.0) / std::max(norm2, 1e-300));
    if (fit_residual_ <= 1e-9) {
        coeffs_ = std::move(fit);
        build_modes_from_coeffs();
    }
}

std::map<int, Complex> Potential::project_band(int k_min, int k_max) const {
    const std::size_t n_basis = static_cast<std::size_t>(k_max - k_min + 1);
    const auto w = uniform_quad_weights(grid_n_ + 1, grid_h_);

    // Quadrature Gram matrix; it depends only on k - j, and solving with it
    // removes the aliasing error of the raw projection, so in-band samples
    // reproduce their coefficients exactly.
    std::vector<double> toeplitz(n_basis, 0.0);
    for (std::size_t d = 0; d < n_basis; ++d) {
        double s = 0.0;
        for (std::size_t i = 0; i <= grid_n_; ++i)
            s += w[i] * std::cos(static_cast<double>(d) * grid_h_ * static_cast<double>(i));
        toeplitz[d] = s / kPi;
    }
    std::vector<double> gram(n_basis * n_basis);
    for (std::size_t r = 0; r < n_basis; ++r)
        for (std::size_t c = 0; c < n_basis; ++c)
            gram[r * n_basis + c] = toeplitz[static_cast<std::size_t>(
                std::abs(static_cast<long>(r) - static_cast<long>(c)))];

    std::vector<Complex> rhs(n_basis, 0.0);
    for (std::size_t j = 0; j < n_basis; ++j) {
        const double lk = bp_.free_eigenvalue(k_min + static_cast<int>(j));
        Complex s = 0.0;
        for (std::size_t i = 0; i <= grid_n_; ++i) {
            const double ph = lk * grid_h_ * static_cast<double>(i) - bp_.alpha();
            s += w[i] * (v1_[i] * std::cos(ph) + v2_[i] * std::sin(ph));
        }
        rhs[j] = s / std::sqrt(kPi);
    }
    cholesky_solve(gram, n_basis, rhs);

    std::map<int, Complex> out;
    for (std::size_t j = 0; j < n_basis; ++j) out[k_min + static_cast<int>(j)] = rhs[j];
    return out;
}

Potential Potential::shifted(double c) const {
    if (kind_ != Kind::kCoefficients)
        throw std::invalid_argument("constant shift requires coefficient form");
    Potential p(*this);
    p.shift_ += c;
    p.build_modes_from_coeffs();
    return p;
}

double Potential::norm_sq() const {
    if (closed_form()) {
        Complex s = 0.0;
        for (const auto& q : modes_)
            for (const auto& r : modes_) {
                s += std::conj(q.plus) * r.plus * moment0(r.omega - q.omega);
                s += std::conj(q.minus) * r.minus * moment0(q.omega - r.omega);
            }
        return 0.5 * s.real();
    }
    std::vector<double> dens(grid_n_ + 1);
    for (std::size_t i = 0; i <= grid_n_; ++i) dens[i] = std::norm(v1_[i]) + std::norm(v2_[i]);
    return integrate_samples(dens, grid_h_);
}

Potential Potential::scaled(double factor) const {
    if (kind_ == Kind::kCoefficients) {
        Potential p(*this);
        for (auto& [k, v] : p.coeffs_) v *= factor;
        p.shift_ *= factor;
        p.build_modes_from_coeffs();
        return p;
    }
    std::vector<Complex> s1(v1_), s2(v2_);
    for (auto& z : s1) z *= factor;
    for (auto& z : s2) z *= factor;
    return from_grid(std::move(s1), std::move(s2), bp_);
}

Potential Potential::normalized() const {
    const double n2 = norm_sq();
    if (n2 <= 0.0) throw std::invalid_argument("zero potential");
    return scaled(1.0 / std::sqrt(n2));
}

Complex Potential::grid_value(const std::vector<Complex>& samples, double x) const {
    const double t = std::clamp(x, 0.0, kPi) / grid_h_;
    const std::size_t i = std::min(static_cast<std::size_t>(t), grid_n_ - 1);
    const double frac = t - static_cast<double>(i);
    return samples[i] * (1.0 - frac) + samples[i + 1] * frac;
}

Complex Potential::v1_at(double x) const {
    if (closed_form()) {
        Complex vp = 0.0, vm = 0.0;
        for (const auto& q : modes_) {
            vp += q.plus * cis(q.omega * x);
            vm += q.minus * cis(-q.omega * x);
        }
        return 0.5 * (vp + vm);
    }
    return grid_value(v1_, x);
}

Complex Potential::v2_at(double x) const {
    if (closed_form()) {
        Complex vp = 0.0, vm = 0.0;
        for (const auto& q : modes_) {
            vp += q.plus * cis(q.omega * x);
            vm += q.minus * cis(-q.omega * x);
        }
        return (vp - vm) / (2.0 * kI);
    }
    return grid_value(v2_, x);
}

std::pair<Complex, Complex> Potential::chiral_at(double x) const {
    if (closed_form()) {
        Complex vp = 0.0, vm = 0.0;
        for (const auto& q : modes_) {
            vp += q.plus * cis(q.omega * x);
            vm += q.minus * cis(-q.omega * x);
        }
        return {vp, vm};
    }
    return {grid_value(vp_, x), grid_value(vm_, x)};
}

Complex Potential::vtilde_plus(Complex lambda) const {
    if (closed_form()) {
        Complex s = 0.0;
        for (const auto& q : modes_) s += q.plus * moment0(q.omega - lambda);
        return s;
    }
    std::vector<Complex> buf(grid_n_ + 1);
    for (std::size_t i = 0; i <= grid_n_; ++i)
        buf[i] = std::exp(-kI * lambda * (grid_h_ * static_cast<double>(i))) * vp_[i];
    return integrate_samples(buf, grid_h_);
}

Complex Potential::vtilde_minus(Complex lambda) const {
    if (closed_form()) {
        Complex s = 0.0;
        for (const auto& q : modes_) s += q.minus * moment0(-q.omega - lambda);
        return s;
    }
    std::vector<Complex> buf(grid_n_ + 1);
    for (std::size_t i = 0; i <= grid_n_; ++i)
        buf[i] = std::exp(-kI * lambda * (grid_h_ * static_cast<double>(i))) * vm_[i];
    return integrate_samples(buf, grid_h_);
}

Complex Potential::g_plus(double xi) const {
    if (closed_form()) {
        Complex s = 0.0;
        for (const auto& q : modes_)
            for (const auto& r : modes_)
                s += std::conj(q.plus) * r.plus * cis(q.omega * xi) *
                     tail_factor(xi, r.omega - q.omega);
        return s;
    }
    if (xi >= kPi) return 0.0;
    const double t = std::max(xi, 0.0) / grid_h_;
    const std::size_t i = std::min(static_cast<std::size_t>(t), grid_n_ - 1);
    const double frac = t - static_cast<double>(i);
    return gp_nodes_[i] * (1.0 - frac) + gp_nodes_[i + 1] * frac;
}

Complex Potential::g_minus(double xi) const {
    if (closed_form()) {
        Complex s = 0.0;
        for (const auto& q : modes_)
            for (const auto& r : modes_)
                s += std::conj(q.minus) * r.minus * cis(-q.omega * xi) *
                     tail_factor(xi, q.omega - r.omega);
        return s;
    }
    if (xi >= kPi) return 0.0;
    const double t = std::max(xi, 0.0) / grid_h_;
    const std::size_t i = std::min(static_cast<std::size_t>(t), grid_n_ - 1);
    const double frac = t - static_cast<double>(i);
    return gm_nodes_[i] * (1.0 - frac) + gm_nodes_[i + 1] * frac;
}

Complex Potential::phi_plus(Complex lambda) const {
    if (closed_form()) {
        Complex s = 0.0;
        for (const auto& q : modes_)
            for (const auto& r : modes_)
                s += std::conj(q.plus) * r.plus * kernel_K(q.omega - lambda, r.omega - q.omega);
        return s;
    }
    std::vector<Complex> buf(grid_n_ + 1);
    for (std::size_t i = 0; i <= grid_n_; ++i)
        buf[i] = std::exp(-kI * lambda * (grid_h_ * static_cast<double>(i))) * gp_nodes_[i];
    return integrate_samples(buf, grid_h_);
}

Complex Potential::phi_minus(Complex lambda) const {
    if (closed_form()) {
        Complex s = 0.0;
        for (const auto& q : modes_)
            for (const auto& r : modes_)
                s += std::conj(q.minus) * r.minus * kernel_K(-q.omega - lambda, q.omega - r.omega);
        return s;
    }
    std::vector<Complex> buf(grid_n_ + 1);
    for (std::size_t i = 0; i <= grid_n_; ++i)
        buf[i] = std::exp(-kI * lambda * (grid_h_ * static_cast<double>(i))) * gm_nodes_[i];
    return integrate_samples(buf, grid_h_);
}

Complex Potential::v_big(Complex lambda) const {
    return cis(bp_.alpha()) * vtilde_plus(lambda) + cis(-bp_.alpha()) * vtilde_minus(-lambda);
}

std::map<int, Complex> Potential::coefficients(int k_min, int k_max) const {
    if (k_min > k_max) throw std::invalid_argument("empty coefficient range");
    if (kind_ == Kind::kCoefficients || closed_form()) {
        std::map<int, Complex> out;
        for (int k = k_min; k <= k_max; ++k) {
            Complex v = 0.0;
            if (auto it = coeffs_.find(k); it != coeffs_.end()) v = it->second;
            if (shift_ != 0.0) v += constant_coefficient(shift_, bp_, k);
            out[k] = v;
        }
        return out;
    }
    return project_band(k_min, k_max);
}

std::pair<std::vector<Complex>, std::vector<Complex>> Potential::render_grid(std::size_t n) const {
    if (n < 16) throw std::invalid_argument("grid needs at least N = 16 intervals");
    std::vector<Complex> r1(n + 1), r2(n + 1);
    const double h = kPi / static_cast<double>(n);
    for (std::size_t i = 0; i <= n; ++i) {
        const double x = h * static_cast<double>(i);
        r1[i] = v1_at(x);
        r2[i] = v2_at(x);
    }
    return {std::move(r1), std::move(r2)};
}

TransformSet Potential::transforms() const {
    TransformSet t;
    t.vtilde_plus = [p = *this](Complex l) { return p.vtilde_plus(l); };
    t.vtilde_minus = [p = *this](Complex l) { return p.vtilde_minus(l); };
    t.phi_plus = [p = *this](Complex l) { return p.phi_plus(l); };
    t.phi_minus = [p = *this](Complex l) { return p.phi_minus(l); };
    t.g_plus = [p = *this](double xi) { return p.g_plus(xi); };
    t.g_minus = [p = *this](double xi) { return p.g_minus(xi); };
    return t;
}

Potential synthesize(const std::map<int, Complex>& coeffs, BoundaryParams bp) {
    if (coeffs.empty()) throw std::invalid_argument("zero potential");
    return Potential::from_coefficients(coeffs, bp);
}

Complex constant_big_v(double c, const BoundaryParams& bp, Complex lambda) {
    // 2 sqrt(2) pi c sinc(lambda pi/2) sin(lambda pi/2 - alpha + pi/4); the
    // sinc form keeps it entire through lambda = 0.
    const Complex half = lambda * (kPi / 2.0);
    return 2.0 * std::sqrt(2.0) * kPi * c * sinc(half) *
           std::sin(half - bp.alpha() + kPi / 4.0);
}

double constant_coefficient(double c, const BoundaryParams& bp, int k) {
    return constant_big_v(c, bp, bp.free_eigenvalue(k)).real() / (2.0 * std::sqrt(kPi));
}

}  // namespace dirac
