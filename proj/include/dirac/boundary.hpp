#pragma once

#include "dirac/numerics.hpp"

namespace dirac {

// Boundary angles (radians) of the separated conditions at x = 0 and x = pi.
// The derived offset m = (alpha - beta)/pi shifts the free eigenvalue ladder
// {k + m}. Validity requires sin(beta - alpha) != 0, which also guarantees
// that no free eigenvalue sits at the origin.
class BoundaryParams {
public:
    BoundaryParams(double alpha, double beta);

    // Bypasses the sin(beta - alpha) check. Only meant for sampling the free
    // operator itself (e.g. alpha == beta ladders); operator and inverse
    // pipelines always construct through the validating constructor.
    static BoundaryParams unchecked(double alpha, double beta);

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double offset() const { return (alpha_ - beta_) / kPi; }     // m
    double sin_beta_alpha() const { return std::sin(beta_ - alpha_); }
    double free_eigenvalue(int k) const { return static_cast<double>(k) + offset(); }

    bool operator==(const BoundaryParams&) const = default;

private:
    BoundaryParams() = default;
    double alpha_ = 0.0;
    double beta_ = 0.0;
};

}  // namespace dirac
