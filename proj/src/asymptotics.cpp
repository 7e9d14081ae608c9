#include "sltc/asymptotics.hpp"

#include <cmath>

namespace sltc {

namespace {

bool near_pi(double beta) { return std::abs(beta - M_PI) < 1e-12; }
bool near_zero(double a) { return std::abs(a) < 1e-12; }

double envelope_exp(double S, double x, Complex zeta) {
    return std::exp(std::abs(zeta.imag()) * (S - x));
}

}  // namespace

AsymptoticRegime AsymptoticRegime::classify(const TransferMatrix& M,
                                            const BoundaryAngles& angles) {
    return AsymptoticRegime{
        angles.alpha_is_zero() ? AlphaClass::Zero : AlphaClass::NonZero,
        angles.beta_is_pi() ? BetaClass::Pi : BetaClass::Interior,
        M.m12 == 0.0 ? M12Class::Zero : M12Class::NonZero,
    };
}

LeadingPair v_leading(double S, const TransferMatrix& M, double beta, double x, Complex lambda) {
    const Complex zeta = zeta_from_lambda(lambda);
    const Complex u = zeta * S;
    const Complex su = std::sin(u);
    const Complex cu = std::cos(u);

    if (near_zero(beta) || near_pi(beta)) {
        // v_pi = -v_{beta=0}; both share the beta = 0 formula set.
        const double sign = near_pi(beta) ? -1.0 : 1.0;
        LeadingPair p;
        if (x >= 0.0) {
            p.value = -std::sin(zeta * (S - x)) / zeta;
            p.derivative = std::cos(zeta * (S - x));
        } else if (M.m12 != 0.0) {
            p.value = -M.m12 * cu * std::cos(zeta * x);
            p.derivative = M.m12 * zeta * cu * std::sin(zeta * x);
        } else {
            p.value = (-M.m22 * su * std::cos(zeta * x) + M.m11 * std::sin(zeta * x) * cu) / zeta;
            p.derivative = M.m22 * su * std::sin(zeta * x) + M.m11 * cu * std::cos(zeta * x);
        }
        p.value *= sign;
        p.derivative *= sign;
        return p;
    }

    const double sb = std::sin(beta);
    LeadingPair p;
    if (x >= 0.0) {
        p.value = sb * std::cos(zeta * (S - x));
        p.derivative = zeta * sb * std::sin(zeta * (S - x));
    } else if (M.m12 != 0.0) {
        p.value = -zeta * M.m12 * sb * std::cos(zeta * x) * su;
        p.derivative = lambda * M.m12 * sb * std::sin(zeta * x) * su;
    } else {
        p.value = sb * (M.m22 * cu * std::cos(zeta * x) + M.m11 * su * std::sin(zeta * x));
        p.derivative = zeta * sb * (-M.m22 * cu * std::sin(zeta * x) + M.m11 * su * std::cos(zeta * x));
    }
    return p;
}

LeadingPair v_error_envelope(double S, const TransferMatrix& M, double beta, double x,
                             Complex lambda) {
    const Complex zeta = zeta_from_lambda(lambda);
    const double az = std::max(std::abs(zeta), 1e-30);
    const double E = envelope_exp(S, x, zeta);
    LeadingPair env;
    if (near_zero(beta) || near_pi(beta)) {
        if (x >= 0.0) {
            env = {E / (az * az), E / az};
        } else if (M.m12 != 0.0) {
            env = {E / az, E};
        } else {
            env = {E / (az * az), E / az};
        }
    } else {
        if (x >= 0.0) {
            env = {E / az, E};
        } else if (M.m12 != 0.0) {
            env = {E, az * E};
        } else {
            env = {E / az, E};
        }
    }
    return env;
}

Complex delta_leading(double S, const TransferMatrix& M, const BoundaryAngles& angles,
                      Complex lambda) {
    const Complex zeta = zeta_from_lambda(lambda);
    const Complex u = zeta * S;
    const Complex su = std::sin(u);
    const Complex cu = std::cos(u);
    const double sa = std::sin(angles.alpha);
    const double sb = std::sin(angles.beta);
    const auto regime = AsymptoticRegime::classify(M, angles);
    const bool a0 = regime.alpha_class == AlphaClass::Zero;
    const bool bpi = regime.beta_class == BetaClass::Pi;

    if (regime.m12_class == M12Class::NonZero) {
        if (!a0 && !bpi) return -lambda * sa * sb * M.m12 * su * su;
        if (!a0 && bpi) return zeta * sa * M.m12 * su * cu;
        if (a0 && !bpi) return zeta * sb * M.m12 * su * cu;
        return -M.m12 * cu * cu;
    }
    if (!a0 && !bpi) return zeta * sa * sb * M.trace() * su * cu;
    if (!a0 && bpi) return sa * (M.m22 * su * su - M.m11 * cu * cu);
    if (a0 && !bpi) return sb * (M.m11 * su * su - M.m22 * cu * cu);
    return -M.trace() * su * cu / zeta;
}

double delta_error_envelope(double S, const TransferMatrix& M, const BoundaryAngles& angles,
                            Complex lambda) {
    const Complex zeta = zeta_from_lambda(lambda);
    const double az = std::max(std::abs(zeta), 1e-30);
    const double E2 = std::exp(2.0 * S * std::abs(zeta.imag()));
    const auto regime = AsymptoticRegime::classify(M, angles);
    const bool a0 = regime.alpha_class == AlphaClass::Zero;
    const bool bpi = regime.beta_class == BetaClass::Pi;
    if (regime.m12_class == M12Class::NonZero) {
        if (!a0 && !bpi) return az * E2;
        if (!a0 && bpi) return E2;
        if (a0 && !bpi) return E2;
        return E2 / az;
    }
    if (!a0 && !bpi) return E2;
    if (!a0 && bpi) return E2 / az;
    if (a0 && !bpi) return E2 / az;
    return E2 / (az * az);
}

Complex m_asymptote(const BoundaryAngles& angles, Complex lambda) {
    if (angles.alpha_is_zero()) {
        return Complex{0.0, -1.0} * zeta_from_lambda(lambda);
    }
    return Complex{std::cos(angles.alpha) / std::sin(angles.alpha), 0.0};
}

int LeadingZeroPattern::count_below(double u_max) const {
    int count = 0;
    for (const auto& c : centers) {
        double u = c.u_mod_pi == 0.0 ? M_PI : c.u_mod_pi;  // u = 0 is not an interior zero
        while (u <= u_max) {
            count += c.multiplicity;
            u += M_PI;
        }
    }
    return count;
}

LeadingZeroPattern leading_zero_pattern(const TransferMatrix& M, const BoundaryAngles& angles) {
    const bool a0 = angles.alpha_is_zero();
    const bool bpi = angles.beta_is_pi();
    LeadingZeroPattern pat;
    if (M.m12 != 0.0) {
        if (!a0 && !bpi) {
            pat.centers = {{0.0, 2}};  // sin^2
        } else if (a0 && bpi) {
            pat.centers = {{M_PI / 2.0, 2}};  // cos^2
        } else {
            pat.centers = {{0.0, 1}, {M_PI / 2.0, 1}};  // sin * cos
        }
        return pat;
    }
    if ((!a0 && !bpi) || (a0 && bpi)) {
        pat.centers = {{0.0, 1}, {M_PI / 2.0, 1}};  // sin * cos
        return pat;
    }
    // tan^2(u) = m11/m22 (beta = pi) or m22/m11 (alpha = 0); m11*m22 = 1 > 0
    const double ratio = bpi ? (M.m11 / M.m22) : (M.m22 / M.m11);
    const double t = std::atan(std::sqrt(ratio));
    pat.centers = {{t, 1}, {M_PI - t, 1}};
    return pat;
}

}  // namespace sltc
