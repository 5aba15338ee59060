#pragma once

#include <map>
#include <vector>

#include "dirac/potential.hpp"

namespace dirac {

// (mu, v, alpha, beta) with v normalized to unit norm; mu is rescaled by the
// squared norm on ingestion so the operator is unchanged. A zero potential is
// tolerated (the operator degenerates to the free one) but flagged.
class OperatorSpec {
public:
    static OperatorSpec make(double mu, Potential v);

    double mu() const { return mu_; }
    const Potential& potential() const { return v_; }
    const BoundaryParams& boundary() const { return v_.boundary(); }
    bool renormalized() const { return renormalized_; }
    bool zero_potential() const { return zero_; }

private:
    OperatorSpec(double mu, Potential v, bool renorm, bool zero)
        : mu_(mu), v_(std::move(v)), renormalized_(renorm), zero_(zero) {}
    double mu_;
    Potential v_;
    bool renormalized_;
    bool zero_;
};

// Characteristic function of the free operator: sin(lambda pi - alpha + beta).
Complex delta_free(const BoundaryParams& bp, Complex lambda);

// Evaluation context for the perturbed characteristic function. Immutable;
// concurrent evaluation at distinct lambda is safe.
class CharFunEval {
public:
    explicit CharFunEval(OperatorSpec spec);

    const OperatorSpec& spec() const { return spec_; }

    Complex delta0(Complex lambda) const { return delta_free(spec_.boundary(), lambda); }

    // R(lambda) = phi_plus(lambda) + phi_minus^*(-lambda)
    //           + e^{2 i alpha} vtilde_plus(lambda) vtilde_minus^*(-lambda),
    // where f^*(z) = conj(f(conj z)). On the real axis 2 Re R = |V|^2.
    Complex r_function(Complex lambda) const;

    // Delta(mu, lambda) = Delta(0, lambda)
    //   - mu/4 { e^{i(lambda pi + beta - alpha)} R(lambda) + e^{-i(...)} R^*(lambda) };
    // entire, real on the real axis.
    Complex delta(Complex lambda) const;
    // Real-axis evaluation through a single-exponential-per-mode fast path;
    // identical to delta(Complex(x,0)).real() to rounding.
    double delta_real(double x) const;

    // Finite resolvent sum 1 + mu sum |v_k|^2 / (lambda_k - lambda); equals
    // delta/delta0 away from the band poles. Only defined for bandlimited
    // potentials; evaluation within 1e-12 of a pole is refused.
    Complex q(Complex lambda) const;

    // |v_k|^2 over the nonzero band entries.
    const std::map<int, double>& weights() const { return weights_; }
    std::vector<int> sigma1_indices() const;

    struct EigenfunctionSample {
        std::vector<Complex> u1, u2;  // n+1 uniform samples on [0, pi]
        double h = 0.0;
    };

    // Samples the eigenfunction attached to a root lambda of delta. Not
    // normalized. Throws if lambda is not a root (within root_tol) or if the
    // construction degenerates to the zero function ("trivial eigenfunction"),
    // in which case the free basis function is the eigenfunction.
    EigenfunctionSample eigenfunction(double lambda, std::size_t n, double root_tol) const;

    // eigenfunction(), falling back to the free basis function u_k at the
    // nearest free index when the generic formula degenerates.
    EigenfunctionSample eigenfunction_or_basis(double lambda, std::size_t n,
                                               double root_tol) const;

private:
    OperatorSpec spec_;
    std::map<int, double> weights_;
    bool q_available_ = false;
};

// Free basis eigenfunction u(lambda_k(0), x) sampled on n+1 uniform points.
CharFunEval::EigenfunctionSample basis_eigenfunction(const BoundaryParams& bp, int k,
                                                     std::size_t n);

}  // namespace dirac
