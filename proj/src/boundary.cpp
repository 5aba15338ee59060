#include "dirac/boundary.hpp"

#include <cmath>
#include <stdexcept>

namespace dirac {

BoundaryParams::BoundaryParams(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    if (!std::isfinite(alpha) || !std::isfinite(beta))
        throw std::invalid_argument("boundary angles must be finite");
    if (std::abs(std::sin(beta - alpha)) < 1e-12)
        throw std::invalid_argument("sin(beta - alpha) vanishes; boundary angles degenerate");
}

BoundaryParams BoundaryParams::unchecked(double alpha, double beta) {
    BoundaryParams bp;
    bp.alpha_ = alpha;
    bp.beta_ = beta;
    return bp;
}

}  // namespace dirac
