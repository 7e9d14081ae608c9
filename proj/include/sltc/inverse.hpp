#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sltc/types.hpp"

namespace sltc {

// Tail model of a spectrum, fitted on the trailing part of a computed list
// and used to continue products and series past the available data.
// Transfer matrices interleave two eigenvalue families (pairs that may stay
// split forever or coalesce like 1/n), so each parity class gets its own
// affine-plus-curvature model:
//   sqrt(lambda_n) ~ slope[n%2]*n + intercept[n%2] + curv[n%2]/(n+1).
struct SpectrumTailFit {
    double slope[2] = {0.0, 0.0};
    double intercept[2] = {0.0, 0.0};
    double curv[2] = {0.0, 0.0};
    double rms_residual = 0.0;

    double sqrt_lambda(std::size_t n) const;
    double lambda(std::size_t n) const;
    double mean_slope() const { return 0.5 * (slope[0] + slope[1]); }
    double mean_offset() const {
        return 0.5 * (intercept[0] / slope[0] + intercept[1] / slope[1]);
    }
};

SpectrumTailFit fit_spectrum_tail(const std::vector<double>& lambdas);

// Appends model-generated eigenvalues until the list holds target_count
// entries.  Requires at least 8 real entries to fit.
std::vector<double> extend_spectrum(const std::vector<double>& lambdas,
                                    std::size_t target_count);

// Two spectra for the same equation with the boundary angle at -S varied:
// (lambda_n) for alpha and (mu_n) for alpha_prime.
struct TwoSpectraInput {
    std::vector<double> lambdas;
    std::vector<double> mus;
    double alpha = 0.0;
    double alpha_prime = 0.0;
    std::size_t truncation = 2000;

    void validate() const;  // strict monotonicity, angle ranges, alpha != alpha'
    bool has_zero_eigenvalue() const;
};

struct ValueWithError {
    double value = 0.0;
    double error = 0.0;
};

// Truncated Hadamard-quotient prod_{n<N}(1 - lambda/mu_n) / prod_{n<N}(1 -
// lambda/lambda_n), evaluated in log space with sign tracking.  A zero
// eigenvalue contributes the factor lambda itself.  N = min(truncation,
// available data).  Throws PoleError when lambda collides with a lambda_n.
Complex hadamard_ratio(const TwoSpectraInput& input, Complex lambda);

// The Hadamard normalization constant C = C_{alpha',beta} / C_{alpha,beta},
// from the case-dependent limit expression evaluated at lambda = -k^2,
// k in {k0, 2k0, 4k0}, Richardson-extrapolated.  The product tails beyond
// the data are continued with the fitted spectrum model; the reported error
// combines the extrapolation spread with the model residual.
ValueWithError constant_C(const TwoSpectraInput& input, double k0 = 25.0);

struct MEval {
    Complex value;
    double tail_bound = 0.0;  // truncation-error estimate for the reported value
};

// m(lambda) = cot(alpha - alpha') - C * cosec(alpha - alpha') * ratio.
// Computes C once per call; use TwoSpectraReconstruction for grids.
MEval m_from_two_spectra(const TwoSpectraInput& input, Complex lambda);

class TwoSpectraReconstruction {
public:
    explicit TwoSpectraReconstruction(TwoSpectraInput input, double k0 = 25.0);

    MEval m(Complex lambda) const;
    double C() const { return C_.value; }
    double C_error() const { return C_.error; }

private:
    TwoSpectraInput input_;
    ValueWithError C_;
};

// One spectrum plus norming constants: the data of the Mittag-Leffler
// representation of m.  For alpha != 0 the constant term m(0) is derived
// from the cot(alpha) limit when not supplied; for alpha = 0 the caller
// must supply it.
struct MittagLefflerModel {
    std::vector<double> eigenvalues;
    std::vector<double> norming_constants;
    double alpha = 0.0;
    std::optional<double> m_at_zero;
    std::size_t truncation = 2000;

    void validate() const;  // monotone eigenvalues, positive a_n, no zero eigenvalue
};

// Shift the spectral parameter: model for the potential q + c, whose m
// satisfies m_shifted(lambda) = m(lambda - c).  Norming constants are
// unchanged; a supplied constant term is dropped (it refers to lambda = 0
// of the unshifted problem).
MittagLefflerModel shifted_model(const MittagLefflerModel& model, double c);

// Pole expansion of m: for alpha != 0,
//   m(lambda) = m(0) + sum 1/a_n (1/(lambda - lambda_n) + 1/lambda_n),
// for alpha = 0,
//   m(lambda) = m(0) + lambda * sum 1/(a_n lambda_n (lambda - lambda_n)).
// Partial sums are completed with a fitted-model tail; tail_bound reports
// the truncation estimate of the raw partial sum.
MEval m_from_norming(const MittagLefflerModel& model, Complex lambda);

// m'(0) = -sum 1/(a_n lambda_n^2), with an analytic tail correction fitted
// to the O(n^-2) decay of the terms.
ValueWithError m_prime_at_zero(const MittagLefflerModel& model);

// Opt-in recovery of m(0) for alpha = 0 from a user-supplied constant C of
// the high-energy expansion m(lambda) = -i sqrt(lambda) + C + O(1/sqrt(lambda)):
//   m(0) = lim (-i sqrt(lambda) - lambda * sum ...) + C.
ValueWithError m0_from_high_energy_constant(const MittagLefflerModel& model, double C,
                                            double k0 = 25.0);

}  // namespace sltc
