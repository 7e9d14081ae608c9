#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "sltc/problem.hpp"
#include "sltc/propagate.hpp"
#include "sltc/types.hpp"

namespace sltc {

// Characteristic function Delta(lambda) = v'(-S)sin(alpha) - v(-S)cos(alpha).
// Entire in lambda, real for real lambda; its zeros are the eigenvalues.
Complex characteristic(const Problem& problem, const BoundaryAngles& angles, Complex lambda);

// Delta and the companion combination v(-S)sin(alpha) + v'(-S)cos(alpha)
// from a single propagation.  The companion is the characteristic function
// for the angle alpha + pi/2 and the numerator of the m-function; at an
// eigenvalue it equals the proportionality factor k_n with
// v_beta = k_n * w_alpha.
struct CharacteristicPair {
    Complex delta;
    Complex rotated;  // v(-S)sin(alpha) + v'(-S)cos(alpha)
};

CharacteristicPair characteristic_pair(const Problem& problem, const BoundaryAngles& angles,
                                       Complex lambda);

// Titchmarsh-Weyl m-function m(lambda) = rotated / delta.  Refuses
// evaluation within pole_tolerance (relative to the local eigenvalue
// spacing) of a zero of Delta; callers needing residues use weyl_m_residue.
Complex weyl_m(const Problem& problem, const BoundaryAngles& angles, Complex lambda,
               double pole_tolerance = 1e-8);

// Estimated residue of m at the eigenvalue lambda_n: eps * m(lambda_n + eps)
// averaged over eps = {+-1e-5, +-1e-6} * max(1, |lambda_n|).  Equals 1/a_n.
double weyl_m_residue(const Problem& problem, const BoundaryAngles& angles, double lambda_n);

// Asymptotic eigenvalue spacing near lambda, used for scan resolution and
// pole-proximity scales.
double eigenvalue_spacing_estimate(double lambda, double half_width);

// Sorted eigenvalues with optional norming constants for one problem and
// boundary-angle pair.
struct SpectralDataset {
    Problem problem;
    BoundaryAngles angles;
    std::vector<double> eigenvalues;                       // strictly increasing
    std::optional<std::vector<double>> norming_constants;  // a_n > 0, aligned
};

struct SpectrumOptions {
    // Scan points per expected eigenvalue gap (in sqrt(lambda) space).
    int points_per_gap = 8;
    // Newton-polished residual target: |Delta| <= target * |Delta'| * spacing.
    double residual_target = 1e-9;
    bool with_norming = false;
};

// First n_max eigenvalues, found by an asymptotics-guided scan with
// bisection brackets and Newton polish.  Eigenvalues with |lambda| < 1e-8
// are snapped to exactly zero.  Throws NumericError when a magnitude dip
// without a sign change suggests a non-simple eigenvalue, or when the count
// disagrees with the asymptotic zero density after rescans.
SpectralDataset compute_spectrum(const Problem& problem, const BoundaryAngles& angles,
                                 int n_max, const SpectrumOptions& options = {});

// The scan behind compute_spectrum, usable with any characteristic-function
// callable whose zero pattern follows the (M, angles) asymptotics (for
// example one rebuilt from scattering data).  q_max_abs widens the lower
// scan bound the way a potential would.
std::vector<double> scan_characteristic_roots(const std::function<double(double)>& delta,
                                              double half_width, const TransferMatrix& M,
                                              const BoundaryAngles& angles, int n_max,
                                              double q_max_abs,
                                              const SpectrumOptions& options = {});

// Norming constant a_n = integral of w_alpha^2 over [-S, S] at the
// eigenvalue lambda_n (composite Simpson on the integration grid, split at
// x = 0).  Rejects lambda_n that is not an eigenvalue.
double norming_constant(const Problem& problem, const BoundaryAngles& angles, double lambda_n);

// Derivative of Delta at lambda (five-point stencil), used by the residue
// and norming-constant identities.
double characteristic_derivative(const Problem& problem, const BoundaryAngles& angles,
                                 double lambda);

}  // namespace sltc
