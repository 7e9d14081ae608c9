#pragma once

#include <vector>

#include "sltc/problem.hpp"
#include "sltc/types.hpp"

namespace sltc {

// Large-|lambda| regime classification for the closed-form leading terms.
// Note: the source displays for the beta = pi rows (and the whole
// beta-interior v section) carry a global sign error; the forms implemented
// here are re-derived from the terminal conditions and satisfy
// Delta_exact / Delta_leading -> 1 as lambda -> -inf for q = 0.
enum class AlphaClass { Zero, NonZero };
enum class BetaClass { Pi, Interior };
enum class M12Class { Zero, NonZero };

struct AsymptoticRegime {
    AlphaClass alpha_class;
    BetaClass beta_class;
    M12Class m12_class;

    static AsymptoticRegime classify(const TransferMatrix& M, const BoundaryAngles& angles);
};

struct LeadingPair {
    Complex value;
    Complex derivative;
};

// Leading term of the terminal-normalized solution v and v' at x.
// beta = 0 is outside the BoundaryAngles range and is supported here only as
// the extrapolated formula set; beta = pi uses v_pi = -v_{beta=0}.
// Caller contract: |sqrt(lambda)| * 2S >= 10 for the error term to be
// subdominant (not enforced).
LeadingPair v_leading(double S, const TransferMatrix& M, double beta, double x, Complex lambda);

// Magnitude envelope of the error terms dropped from v_leading.
LeadingPair v_error_envelope(double S, const TransferMatrix& M, double beta, double x,
                             Complex lambda);

// Leading term of the characteristic function, one formula per regime branch.
// For q = 0 it reproduces the exact Delta up to the error envelope; its zero
// spacing guides the eigenvalue bracketing.
Complex delta_leading(double S, const TransferMatrix& M, const BoundaryAngles& angles,
                      Complex lambda);

// Magnitude envelope of the error term dropped from delta_leading.
double delta_error_envelope(double S, const TransferMatrix& M, const BoundaryAngles& angles,
                            Complex lambda);

// m(lambda) as lambda -> -inf: -i*sqrt(lambda) for alpha = 0, cot(alpha)
// otherwise.
Complex m_asymptote(const BoundaryAngles& angles, Complex lambda);

// Zeros of the leading form in u = sqrt(lambda) * S, reduced modulo pi.
// multiplicity = 2 marks a double zero of the leading form, where the true
// eigenvalues sit as a close pair needing a refined scan.
struct LeadingZeroPattern {
    struct Center {
        double u_mod_pi;  // in [0, pi)
        int multiplicity;
    };
    std::vector<Center> centers;

    // Leading-form zero count (with multiplicity) for u in (0, u_max].
    int count_below(double u_max) const;
};

LeadingZeroPattern leading_zero_pattern(const TransferMatrix& M, const BoundaryAngles& angles);

}  // namespace sltc
