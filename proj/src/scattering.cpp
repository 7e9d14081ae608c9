#include "sltc/scattering.hpp"

#include <algorithm>
#include <cmath>

#include "sltc/asymptotics.hpp"
#include "sltc/numerics.hpp"

namespace sltc {

namespace {

constexpr Complex kI{0.0, 1.0};

// One RK4 step of the plane-wave-scaled equation u'' = q(x) u + damp * u',
// where damp = -2 i zeta for the right Jost solution and +2 i zeta for the
// left one.  The scaled unknown stays O(1) for |Im zeta| * S large.
void rk4_scaled_step(const Problem& p, Complex damp, double x, double h, Complex& y,
                     Complex& dy) {
    const double q0 = p.q_at(x);
    const double qm = p.q_at(x + 0.5 * h);
    const double q1 = p.q_at(x + h);
    const Complex k1y = dy;
    const Complex k1d = q0 * y + damp * dy;
    const Complex k2y = dy + 0.5 * h * k1d;
    const Complex k2d = qm * (y + 0.5 * h * k1y) + damp * k2y;
    const Complex k3y = dy + 0.5 * h * k2d;
    const Complex k3d = qm * (y + 0.5 * h * k2y) + damp * k3y;
    const Complex k4y = dy + h * k3d;
    const Complex k4d = q1 * (y + h * k3y) + damp * k4y;
    y += (h / 6.0) * (k1y + 2.0 * (k2y + k3y) + k4y);
    dy += (h / 6.0) * (k1d + 2.0 * (k2d + k3d) + k4d);
}

void sweep_scaled(const Problem& p, Complex damp, double xa, double xb, int nsteps, Complex& y,
                  Complex& dy) {
    const double h = (xb - xa) / nsteps;
    for (int i = 0; i < nsteps; ++i) {
        const double x = xa + i * h;
        rk4_scaled_step(p, damp, x, (i == nsteps - 1) ? (xb - x) : h, y, dy);
    }
    if (!std::isfinite(y.real()) || !std::isfinite(y.imag())) {
        throw NumericError("Jost propagation overflowed");
    }
}

// Scaled left Jost solution r(x) = f_minus(x) e^{i zeta x} at x = S (after
// crossing the jump with M).  A and B come straight from r(S) and r'(S).
struct ScaledLeftJost {
    Complex r, dr;  // at x = S
};

ScaledLeftJost scaled_left_jost(const Problem& p, Complex zeta) {
    if (std::abs(zeta) == 0.0) {
        throw PreconditionError("scattering quantities are singular at zeta = 0");
    }
    if (!p.grid_contains_zero()) {
        throw ConfigError(
            "potential grid must contain x = 0 as a node (use an odd sample count)");
    }
    const double S = p.half_width();
    // the scaled equation oscillates at rate 2 zeta; step accordingly
    const int nsteps = effective_steps_per_side(p, 6.25 * zeta * zeta);
    Complex r{1.0, 0.0};
    Complex dr{0.0, 0.0};
    sweep_scaled(p, 2.0 * kI * zeta, -S, 0.0, nsteps, r, dr);
    // unscale at x = 0, apply the jump, rescale
    Complex f = r;
    Complex df = dr - kI * zeta * r;
    p.transfer().apply(f, df);
    r = f;
    dr = df + kI * zeta * f;
    sweep_scaled(p, 2.0 * kI * zeta, 0.0, S, nsteps, r, dr);
    return {r, dr};
}

// Scaled right Jost solution s(x) = f_plus(x) e^{-i zeta x}, swept S -> -S.
struct ScaledRightJost {
    Complex s0p, ds0p;  // at 0+
    Complex s0m, ds0m;  // at 0-
    Complex s, ds;      // at -S
};

ScaledRightJost scaled_right_jost(const Problem& p, Complex zeta) {
    if (std::abs(zeta) == 0.0) {
        throw PreconditionError("scattering quantities are singular at zeta = 0");
    }
    const double S = p.half_width();
    // the scaled equation oscillates at rate 2 zeta; step accordingly
    const int nsteps = effective_steps_per_side(p, 6.25 * zeta * zeta);
    Complex s{1.0, 0.0};
    Complex ds{0.0, 0.0};
    ScaledRightJost out;
    sweep_scaled(p, -2.0 * kI * zeta, S, 0.0, nsteps, s, ds);
    out.s0p = s;
    out.ds0p = ds;
    Complex f = s;
    Complex df = ds + kI * zeta * s;
    p.transfer().apply_inverse(f, df);
    s = f;
    ds = df - kI * zeta * f;
    out.s0m = s;
    out.ds0m = ds;
    sweep_scaled(p, -2.0 * kI * zeta, 0.0, -S, nsteps, s, ds);
    out.s = s;
    out.ds = ds;
    return out;
}

SolutionState unscale_plus(Complex s, Complex ds, Complex zeta, double x) {
    const Complex e = std::exp(kI * zeta * x);
    return {s * e, (ds + kI * zeta * s) * e};
}

SolutionState unscale_minus(Complex r, Complex dr, Complex zeta, double x) {
    const Complex e = std::exp(-kI * zeta * x);
    return {r * e, (dr - kI * zeta * r) * e};
}

ABPair ab_from_scaled(const ScaledLeftJost& lj, Complex zeta, double S) {
    ABPair ab;
    ab.A = lj.r - lj.dr / (2.0 * kI * zeta);
    ab.B = std::exp(-2.0 * kI * zeta * S) * lj.dr / (2.0 * kI * zeta);
    return ab;
}

}  // namespace

JostPair jost(const Problem& problem, Complex zeta) {
    if (std::abs(zeta) == 0.0) {
        throw PreconditionError("Jost solutions are parameterized by zeta != 0");
    }
    const double S = problem.half_width();
    JostPair out;
    out.parameter = SpectralParameter::from_zeta(zeta);

    const ScaledRightJost rj = scaled_right_jost(problem, zeta);
    out.f_plus_at_S = unscale_plus(1.0, 0.0, zeta, S);
    out.f_plus_at_zero_plus = unscale_plus(rj.s0p, rj.ds0p, zeta, 0.0);
    out.f_plus_at_zero_minus = unscale_plus(rj.s0m, rj.ds0m, zeta, 0.0);
    out.f_plus_at_minus_S = unscale_plus(rj.s, rj.ds, zeta, -S);

    const int nsteps = effective_steps_per_side(problem, 6.25 * zeta * zeta);
    Complex r{1.0, 0.0};
    Complex dr{0.0, 0.0};
    out.f_minus_at_minus_S = unscale_minus(r, dr, zeta, -S);
    sweep_scaled(problem, 2.0 * kI * zeta, -S, 0.0, nsteps, r, dr);
    out.f_minus_at_zero_minus = unscale_minus(r, dr, zeta, 0.0);
    Complex f = r;
    Complex df = dr - kI * zeta * r;
    problem.transfer().apply(f, df);
    r = f;
    dr = df + kI * zeta * f;
    out.f_minus_at_zero_plus = unscale_minus(r, dr, zeta, 0.0);
    sweep_scaled(problem, 2.0 * kI * zeta, 0.0, S, nsteps, r, dr);
    out.f_minus_at_S = unscale_minus(r, dr, zeta, S);
    return out;
}

ABPair scattering_coefficients_zeta(const Problem& problem, Complex zeta) {
    const ScaledLeftJost lj = scaled_left_jost(problem, zeta);
    return ab_from_scaled(lj, zeta, problem.half_width());
}

ABPair scattering_coefficients(const Problem& problem, double xi) {
    if (xi == 0.0) {
        throw PreconditionError("scattering coefficients are singular at xi = 0");
    }
    return scattering_coefficients_zeta(problem, Complex{xi, 0.0});
}

ABPair scattering_coefficients_at_left(const Problem& problem, double xi) {
    if (xi == 0.0) {
        throw PreconditionError("scattering coefficients are singular at xi = 0");
    }
    const Complex zeta{xi, 0.0};
    const JostPair jp = jost(problem, zeta);
    // f_minus(-S) = A * conj(f_plus)(-S) + B * f_plus(-S), solved at x = -S
    const Complex fp = jp.f_plus_at_minus_S.y;
    const Complex dfp = jp.f_plus_at_minus_S.dy;
    const Complex fpc = std::conj(fp);
    const Complex dfpc = std::conj(dfp);
    const Complex rhs1 = jp.f_minus_at_minus_S.y;
    const Complex rhs2 = jp.f_minus_at_minus_S.dy;
    const Complex det = fpc * dfp - fp * dfpc;  // = 2 i xi (Wronskian)
    ABPair ab;
    ab.A = (rhs1 * dfp - rhs2 * fp) / det;
    ab.B = (rhs2 * fpc - rhs1 * dfpc) / det;
    return ab;
}

std::vector<double> bound_states(const Problem& problem, double eta_max) {
    auto a_on_axis = [&](double eta) {
        return scattering_coefficients_zeta(problem, Complex{0.0, eta}).A.real();
    };
    std::vector<double> grid;
    for (double eta = 1e-3; eta < 0.25; eta += 0.01) grid.push_back(eta);
    for (double eta = 0.25; eta <= eta_max; eta += 0.02) grid.push_back(eta);
    std::vector<double> etas;
    for (auto [a, b] : scan_sign_changes(a_on_axis, grid)) {
        etas.push_back(a == b ? a : refine_root(a_on_axis, a, b, 1.0));
    }
    return etas;
}

ScatteringData reflection(const Problem& problem, std::vector<double> xi_grid,
                          const ReflectionOptions& options) {
    for (double xi : xi_grid) {
        if (xi == 0.0) throw PreconditionError("the xi grid must exclude 0");
    }
    ScatteringData data;
    data.half_width = problem.half_width();
    data.xi_grid = std::move(xi_grid);
    data.R.resize(data.xi_grid.size());
    std::vector<ABPair> ab(data.xi_grid.size());
    parallel_for_index(data.xi_grid.size(), [&](std::size_t i) {
        ab[i] = scattering_coefficients(problem, data.xi_grid[i]);
    });
    for (std::size_t i = 0; i < ab.size(); ++i) data.R[i] = ab[i].B / ab[i].A;
    if (options.with_AB) data.AB = std::move(ab);
    if (options.with_bound_states) {
        data.bound_states = bound_states(problem, options.bound_state_eta_max);
    }
    return data;
}

ABPair ForwardScatteringModel::coefficients(Complex zeta) const {
    return scattering_coefficients_zeta(problem_, zeta);
}

namespace {

// Least-squares fit of samples to P(z)/Q(z) with Q(0) = 1, linearized as
// P(z_i) - f_i * (Q(z_i) - 1) = f_i.
struct RationalFit {
    std::vector<Complex> num, den;  // den[0] = 1
    double residual = 0.0;

    Complex eval(Complex z) const {
        Complex p{0.0, 0.0};
        for (std::size_t k = num.size(); k-- > 0;) p = p * z + num[k];
        Complex q{0.0, 0.0};
        for (std::size_t k = den.size(); k-- > 0;) q = q * z + den[k];
        return p / q;
    }
};

RationalFit fit_rational(const std::vector<Complex>& zs, const std::vector<Complex>& fs,
                         int num_deg, int den_deg) {
    const std::size_t n = zs.size();
    const std::size_t cols = static_cast<std::size_t>(num_deg + 1 + den_deg);
    if (n < cols) throw ConfigError("not enough samples for the rational fit");

    // Sanathanan-Koerner iteration: solve the linearized problem
    // P(z) - f Q(z) = f with rows reweighted by 1/|Q_prev(z)| so the fixed
    // point minimizes the true (not linearized) residual.
    std::vector<double> weight(n, 1.0);
    RationalFit fit;
    for (int iter = 0; iter < 4; ++iter) {
        std::vector<Complex> G(cols * cols, Complex{0.0, 0.0});
        std::vector<Complex> rhs(cols, Complex{0.0, 0.0});
        std::vector<Complex> row(cols);
        for (std::size_t i = 0; i < n; ++i) {
            Complex zp{1.0, 0.0};
            for (int k = 0; k <= num_deg; ++k) {
                row[static_cast<std::size_t>(k)] = weight[i] * zp;
                zp *= zs[i];
            }
            zp = zs[i];
            for (int k = 0; k < den_deg; ++k) {
                row[static_cast<std::size_t>(num_deg + 1 + k)] = -weight[i] * fs[i] * zp;
                zp *= zs[i];
            }
            const Complex target = weight[i] * fs[i];
            for (std::size_t a = 0; a < cols; ++a) {
                rhs[a] += std::conj(row[a]) * target;
                for (std::size_t b = 0; b < cols; ++b) {
                    G[a * cols + b] += std::conj(row[a]) * row[b];
                }
            }
        }
        // Gauss-Jordan with partial pivoting; afterwards variable k sits on
        // row k's diagonal
        for (std::size_t col = 0; col < cols; ++col) {
            std::size_t piv = col;
            for (std::size_t r = col + 1; r < cols; ++r) {
                if (std::abs(G[r * cols + col]) > std::abs(G[piv * cols + col])) piv = r;
            }
            for (std::size_t j = 0; j < cols; ++j) {
                std::swap(G[col * cols + j], G[piv * cols + j]);
            }
            std::swap(rhs[col], rhs[piv]);
            const Complex d = G[col * cols + col];
            if (std::abs(d) < 1e-280) {
                throw NumericError("rational fit normal equations singular");
            }
            for (std::size_t r = 0; r < cols; ++r) {
                if (r == col) continue;
                const Complex factor = G[r * cols + col] / d;
                for (std::size_t j = col; j < cols; ++j) {
                    G[r * cols + j] -= factor * G[col * cols + j];
                }
                rhs[r] -= factor * rhs[col];
            }
        }
        fit.num.assign(static_cast<std::size_t>(num_deg + 1), Complex{});
        fit.den.assign(static_cast<std::size_t>(den_deg + 1), Complex{});
        fit.den[0] = Complex{1.0, 0.0};
        for (int k = 0; k <= num_deg; ++k) {
            fit.num[static_cast<std::size_t>(k)] =
                rhs[static_cast<std::size_t>(k)] / G[static_cast<std::size_t>(k) * cols + k];
        }
        for (int k = 0; k < den_deg; ++k) {
            const auto idx = static_cast<std::size_t>(num_deg + 1 + k);
            fit.den[static_cast<std::size_t>(k + 1)] = rhs[idx] / G[idx * cols + idx];
        }
        for (std::size_t i = 0; i < n; ++i) {
            Complex q{0.0, 0.0};
            for (std::size_t k = fit.den.size(); k-- > 0;) q = q * zs[i] + fit.den[k];
            weight[i] = 1.0 / std::max(std::abs(q), 1e-8);
        }
    }
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) rss += std::norm(fit.eval(zs[i]) - fs[i]);
    fit.residual = std::sqrt(rss / static_cast<double>(n));
    return fit;
}

}  // namespace

GriddedScatteringModel::GriddedScatteringModel(const ScatteringData& data, int numerator_degree,
                                               int denominator_degree)
    : half_width_(data.half_width) {
    if (!data.AB.has_value()) {
        throw ConfigError("gridded scattering model needs A/B samples "
                          "(run phase retrieval first when only R is available)");
    }
    double xi_max = 0.0;
    for (double xi : data.xi_grid) xi_max = std::max(xi_max, std::abs(xi));
    scale_ = xi_max > 0.0 ? xi_max : 1.0;
    std::vector<Complex> zs, as, bs;
    // A and B both carry a 1/(2 i zeta) pole at the origin and B oscillates
    // like e^{-2 i xi S}; strip both known factors and fit the remaining
    // entire functions 2 i xi A and 2 i xi B e^{2 i xi S}.  Both satisfy
    // F(-xi) = conj(F(xi)), so mirroring onto the negative axis is exact.
    for (std::size_t i = 0; i < data.xi_grid.size(); ++i) {
        const double xi = data.xi_grid[i];
        const Complex z{xi / scale_, 0.0};
        const Complex two_i_xi{0.0, 2.0 * xi};
        const Complex a_tilde = two_i_xi * (*data.AB)[i].A;
        const Complex b_tilde =
            two_i_xi * (*data.AB)[i].B * std::exp(Complex{0.0, 2.0 * xi * half_width_});
        zs.push_back(z);
        as.push_back(a_tilde);
        bs.push_back(b_tilde);
        zs.push_back(-z);
        as.push_back(std::conj(a_tilde));
        bs.push_back(std::conj(b_tilde));
    }
    const RationalFit fa = fit_rational(zs, as, numerator_degree, denominator_degree);
    const RationalFit fb = fit_rational(zs, bs, numerator_degree, denominator_degree);
    a_num_ = fa.num;
    a_den_ = fa.den;
    b_num_ = fb.num;
    b_den_ = fb.den;
    fit_residual_ = std::max(fa.residual, fb.residual);
}

ABPair GriddedScatteringModel::coefficients(Complex zeta) const {
    auto eval = [&](const std::vector<Complex>& num, const std::vector<Complex>& den) {
        const Complex z = zeta / scale_;
        Complex p{0.0, 0.0};
        for (std::size_t k = num.size(); k-- > 0;) p = p * z + num[k];
        Complex q{0.0, 0.0};
        for (std::size_t k = den.size(); k-- > 0;) q = q * z + den[k];
        return p / q;
    };
    const Complex two_i_zeta = Complex{0.0, 2.0} * zeta;
    const Complex b_phase = std::exp(Complex{0.0, -2.0 * half_width_} * zeta);
    return {eval(a_num_, a_den_) / two_i_zeta, eval(b_num_, b_den_) * b_phase / two_i_zeta};
}

namespace {

RecoveredW recover_impl(Complex A, Complex B, Complex Astar, Complex Bstar, double alpha,
                        double S, Complex zeta) {
    const Complex em = std::exp(-kI * zeta * S);
    const Complex ep = std::exp(kI * zeta * S);
    // row * P * Q * H_alpha, with the derivative row for dw
    const Complex row[2] = {em, ep};
    const Complex drow[2] = {-kI * zeta * em, kI * zeta * ep};
    const Complex P[2][2] = {{A, Bstar}, {B, Astar}};
    const Complex Q[2][2] = {{em / 2.0, -em / (2.0 * kI * zeta)},
                             {ep / 2.0, ep / (2.0 * kI * zeta)}};
    const double ca = std::cos(alpha);
    const double sa = std::sin(alpha);
    const Complex H[2][2] = {{ca, sa}, {-sa, ca}};
    Complex PQH[2][2];
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            Complex acc{0.0, 0.0};
            for (int k = 0; k < 2; ++k) {
                for (int l = 0; l < 2; ++l) acc += P[i][k] * Q[k][l] * H[l][j];
            }
            PQH[i][j] = acc;
        }
    }
    RecoveredW out;
    out.w1 = row[0] * PQH[0][0] + row[1] * PQH[1][0];
    out.w2 = row[0] * PQH[0][1] + row[1] * PQH[1][1];
    out.dw1 = drow[0] * PQH[0][0] + drow[1] * PQH[1][0];
    out.dw2 = drow[0] * PQH[0][1] + drow[1] * PQH[1][1];
    return out;
}

}  // namespace

RecoveredW recover_W_at_S(const ABPair& ab, double alpha, double half_width, double xi) {
    if (xi == 0.0) throw PreconditionError("recovery is singular at xi = 0");
    return recover_impl(ab.A, ab.B, std::conj(ab.A), std::conj(ab.B), alpha, half_width,
                        Complex{xi, 0.0});
}

RecoveredW recover_W_at_S(const ScatteringModel& model, double alpha, Complex zeta) {
    if (std::abs(zeta) == 0.0) throw PreconditionError("recovery is singular at zeta = 0");
    const ABPair ab = model.coefficients(zeta);
    const ABPair ab_conj = zeta.imag() == 0.0 ? ab : model.coefficients(std::conj(zeta));
    return recover_impl(ab.A, ab.B, std::conj(ab_conj.A), std::conj(ab_conj.B), alpha,
                        model.half_width(), zeta);
}

std::vector<RecoveredW> recover_W_at_S(const ScatteringData& data, double alpha) {
    if (!data.AB.has_value()) {
        throw ConfigError("insufficient data: A/B samples are required for the recovery "
                          "(opt in to phase retrieval to build them from R)");
    }
    std::vector<RecoveredW> out(data.xi_grid.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = recover_W_at_S((*data.AB)[i], alpha, data.half_width, data.xi_grid[i]);
    }
    return out;
}

PhaseRetrievalResult retrieve_AB_from_reflection(const ScatteringData& data) {
    if (!data.bound_states.empty()) {
        throw PreconditionError(
            "phase retrieval from |A| alone is implemented only without bound states");
    }
    const auto& grid = data.xi_grid;
    const std::size_t n = grid.size();
    if (n < 8) throw ConfigError("phase retrieval needs a denser xi grid");
    for (std::size_t i = 1; i < n; ++i) {
        if (!(grid[i] > grid[i - 1])) throw ConfigError("xi grid must be increasing");
    }
    if (!(grid.front() > 0.0)) throw ConfigError("phase retrieval expects a positive xi grid");

    std::vector<double> g(n);  // log|A|(xi), even in xi
    for (std::size_t i = 0; i < n; ++i) {
        const double r2 = std::norm(data.R[i]);
        if (!(r2 < 1.0)) throw NumericError("|R| must stay below 1 for phase retrieval");
        g[i] = -0.5 * std::log1p(-r2);
    }
    const double Xi = grid.back();
    // A need not approach 1 at infinity (a transfer matrix reflects at all
    // frequencies); the Schwarz integral applies to log|A| minus its limit,
    // estimated from the last grid sample.
    const double g_limit = g.back();
    for (double& v : g) v -= g_limit;

    // phi(xi) = -(2 xi / pi) PV int_0^Xi log|A|(t) / (t^2 - xi^2) dt,
    // regularized by subtracting the value at the singular point.
    auto phase_at = [&](double xi, std::size_t stride) {
        // linear interpolation of g at xi
        auto g_of = [&](double x) {
            auto it = std::upper_bound(grid.begin(), grid.end(), x);
            if (it == grid.begin()) return g.front();
            if (it == grid.end()) return g.back();
            const std::size_t j = static_cast<std::size_t>(it - grid.begin());
            const double t = (x - grid[j - 1]) / (grid[j] - grid[j - 1]);
            return (1.0 - t) * g[j - 1] + t * g[j];
        };
        const double gx = g_of(xi);
        double acc = 0.0;
        for (std::size_t i = 0; i + stride < n; i += stride) {
            const double t0 = grid[i];
            const double t1 = grid[i + stride];
            const double tm = 0.5 * (t0 + t1);
            double integrand;
            if (std::abs(tm - xi) < 0.25 * (t1 - t0)) {
                // de-singularized limit (g(t) - g(xi)) / (t^2 - xi^2) -> g'(xi)/(2 xi)
                const double h = std::max(1e-6, 0.5 * (t1 - t0));
                integrand = (g_of(xi + h) - g_of(xi - h)) / (2.0 * h) / (2.0 * xi);
            } else {
                integrand = (g_of(tm) - gx) / (tm * tm - xi * xi);
            }
            acc += integrand * (t1 - t0);
        }
        // PV int_0^Xi dt/(t^2 - xi^2) = (1/(2 xi)) log((Xi - xi)/(Xi + xi))
        const double pv = xi < Xi ? (1.0 / (2.0 * xi)) * std::log((Xi - xi) / (Xi + xi)) : 0.0;
        return -(2.0 * xi / M_PI) * (acc + gx * pv);
    };

    PhaseRetrievalResult res;
    res.AB.resize(n);
    double max_diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = grid[i];
        const double phi = phase_at(xi, 1);
        const double phi_coarse = phase_at(xi, 2);
        max_diff = std::max(max_diff, std::abs(phi - phi_coarse));
        const double mag = std::exp(g[i] + g_limit);
        const Complex A = mag * std::exp(kI * phi);
        res.AB[i] = {A, data.R[i] * A};
    }
    res.quadrature_error = max_diff + std::abs(g.back());
    return res;
}

NeumannData neumann_data_from_scattering(const ScatteringModel& model, const TransferMatrix& M,
                                         int n_max) {
    const double S = model.half_width();
    const double alpha = M_PI / 2.0;

    auto recovered = [&](double lambda) {
        const double safe = std::abs(lambda) < 1e-12 ? 1e-12 : lambda;
        const Complex zeta = zeta_from_lambda(Complex{safe, 0.0});
        return recover_W_at_S(model, alpha, zeta);
    };
    auto delta_nn = [&](double lambda) { return -recovered(lambda).dw2.real(); };
    auto delta_nd = [&](double lambda) { return -recovered(lambda).w2.real(); };

    NeumannData out;
    out.nn_eigenvalues = scan_characteristic_roots(
        delta_nn, S, M, BoundaryAngles(M_PI / 2.0, M_PI / 2.0), n_max, 0.0);
    out.nd_eigenvalues = scan_characteristic_roots(
        delta_nd, S, M, BoundaryAngles(M_PI / 2.0, M_PI), n_max, 0.0);

    // Neumann-Neumann norming constants a_n = Delta'(lambda_n) / v(-S, lambda_n),
    // with v(-S, lambda) = -u'(S, lambda) read off the recovered matrix.
    out.nn_norming.reserve(out.nn_eigenvalues.size());
    for (double l : out.nn_eigenvalues) {
        const double h = 1e-4 * eigenvalue_spacing_estimate(l, S);
        const double d = (-delta_nn(l + 2.0 * h) + 8.0 * delta_nn(l + h) - 8.0 * delta_nn(l - h) +
                          delta_nn(l - 2.0 * h)) /
                         (12.0 * h);
        const double v_at_left = -recovered(l).dw1.real();
        out.nn_norming.push_back(d / v_at_left);
    }
    return out;
}

}  // namespace sltc
