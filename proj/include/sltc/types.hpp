#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace sltc {

using Complex = std::complex<double>;

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad configuration or input data (CLI maps these to exit code 2).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

// Violated call precondition (non-eigenvalue input, zero eigenvalue present, ...).
class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& what) : Error(what) {}
};

// Numerical failure: overflow, missed roots, non-convergent extrapolation.
class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error(what) {}
};

// Evaluation too close to a pole of a meromorphic quantity.
class PoleError : public Error {
public:
    PoleError(const std::string& what, double nearest_pole)
        : Error(what), nearest(nearest_pole) {}
    double nearest;  // estimated location of the offending pole
};

// Separated boundary angles: y(-S)cos(alpha) - y'(-S)sin(alpha) = 0 and
// y(S)cos(beta) - y'(S)sin(beta) = 0.  alpha = 0 and beta = pi are the
// Dirichlet ends, alpha = beta = pi/2 the Neumann ones.
struct BoundaryAngles {
    double alpha = 0.0;  // in [0, pi)
    double beta = 0.0;   // in (0, pi]

    BoundaryAngles() = default;
    BoundaryAngles(double a, double b);

    bool alpha_is_zero() const { return alpha < 1e-12; }
    bool beta_is_pi() const;
};

// Spectral parameter lambda together with zeta = sqrt(lambda) on the branch
// with Im(zeta) >= 0.
struct SpectralParameter {
    Complex lambda;
    Complex zeta;

    static SpectralParameter from_lambda(Complex lambda);
    static SpectralParameter from_zeta(Complex zeta);
};

// Principal square root pushed onto the Im >= 0 branch.
Complex zeta_from_lambda(Complex lambda);

}  // namespace sltc
