#include "sltc/types.hpp"

#include <cmath>

namespace sltc {

BoundaryAngles::BoundaryAngles(double a, double b) : alpha(a), beta(b) {
    if (!(alpha >= 0.0 && alpha < M_PI)) {
        throw ConfigError("boundary angle alpha must lie in [0, pi)");
    }
    if (!(beta > 0.0 && beta <= M_PI)) {
        throw ConfigError("boundary angle beta must lie in (0, pi]");
    }
}

bool BoundaryAngles::beta_is_pi() const { return std::abs(beta - M_PI) < 1e-12; }

Complex zeta_from_lambda(Complex lambda) {
    Complex z = std::sqrt(lambda);
    if (z.imag() < 0.0 || (z.imag() == 0.0 && z.real() < 0.0)) z = -z;
    return z;
}

SpectralParameter SpectralParameter::from_lambda(Complex lambda) {
    return SpectralParameter{lambda, zeta_from_lambda(lambda)};
}

SpectralParameter SpectralParameter::from_zeta(Complex zeta) {
    return SpectralParameter{zeta * zeta, zeta};
}

}  // namespace sltc
