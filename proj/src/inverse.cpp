#include "sltc/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sltc/numerics.hpp"

namespace sltc {

namespace {

constexpr double kZeroEigenvalueTol = 1e-8;

bool is_zero_eigenvalue(double x) { return std::abs(x) < kZeroEigenvalueTol; }

void require_strictly_increasing(const std::vector<double>& xs, const char* name) {
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i] > xs[i - 1])) {
            throw ConfigError(std::string(name) + " must be strictly increasing");
        }
    }
}

// Asymptotic digamma for large |z|; callers keep Re(z) >= 40.
Complex digamma_asymptotic(Complex z) {
    const Complex inv = 1.0 / z;
    const Complex inv2 = inv * inv;
    return std::log(z) - 0.5 * inv -
           inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 / 252.0));
}

// sum_{n >= N} 1/((n + a)^2 + w^2), via Im psi(N + a + i w) / w.
double sum_shifted_lorentzian(double N, double a, double w) {
    if (w < 1e-8) return trigamma(N + a);
    return digamma_asymptotic(Complex{N + a, w}).imag() / w;
}

// sum_{n >= N} (n + a)^(-4), Euler-Maclaurin.
double sum_inverse_quartic(double N, double a) {
    const double x = N + a;
    return 1.0 / (3.0 * x * x * x) + 1.0 / (2.0 * x * x * x * x) +
           1.0 / (3.0 * x * x * x * x * x);
}

// Log-magnitude and sign of prod over the first N entries of (1 - lambda/x),
// with a zero eigenvalue contributing the factor lambda itself.
struct RealLogProduct {
    double log_mag = 0.0;
    int sign = 1;
};

RealLogProduct log_product_real(const std::vector<double>& xs, std::size_t N, double lambda) {
    RealLogProduct out;
    std::vector<double> logs;
    logs.reserve(N);
    for (std::size_t n = 0; n < N; ++n) {
        const double x = xs[n];
        double f;
        if (is_zero_eigenvalue(x)) {
            f = lambda;
        } else {
            const double t = lambda / x;
            if (std::abs(t) < 0.5) {
                logs.push_back(std::log1p(-t));
                continue;
            }
            f = 1.0 - t;
        }
        if (f == 0.0) throw PoleError("product factor vanished at lambda", lambda);
        if (f < 0.0) out.sign = -out.sign;
        logs.push_back(std::log(std::abs(f)));
    }
    out.log_mag = pairwise_sum(logs);
    return out;
}

Complex log_product_complex(const std::vector<double>& xs, std::size_t N, Complex lambda) {
    std::vector<Complex> logs;
    logs.reserve(N);
    for (std::size_t n = 0; n < N; ++n) {
        const double x = xs[n];
        const Complex f = is_zero_eigenvalue(x) ? lambda : Complex{1.0, 0.0} - lambda / x;
        logs.push_back(std::log(f));
    }
    return pairwise_sum(logs);
}

void check_pole_collision(const std::vector<double>& xs, Complex lambda) {
    if (lambda.imag() != 0.0) return;
    const double l = lambda.real();
    auto it = std::lower_bound(xs.begin(), xs.end(), l);
    for (auto cand : {it, it == xs.begin() ? it : std::prev(it)}) {
        if (cand != xs.end() &&
            std::abs(*cand - l) < 1e-10 * std::max({1.0, std::abs(l), std::abs(*cand)})) {
            throw PoleError("lambda coincides with an input eigenvalue", *cand);
        }
    }
}

struct RichardsonResult {
    double value;
    double spread;
    double step_error;  // |f(2k0) - f(k0)|, |f(4k0) - f(2k0)|
    bool converging;
};

// Eliminates the 1/k and 1/k^2 error terms from samples at k0, 2k0, 4k0.
RichardsonResult richardson_limit(double f1, double f2, double f4) {
    const double r1 = 2.0 * f2 - f1;
    const double r2 = 2.0 * f4 - f2;
    const double value = (4.0 * r2 - r1) / 3.0;
    const double e1 = std::abs(f2 - f1);
    const double e2 = std::abs(f4 - f2);
    RichardsonResult res;
    res.value = value;
    res.spread = std::abs(value - r2) + std::abs(r2 - r1) / 3.0;
    res.step_error = e2;
    // The step differences may be dominated by a residual bias that grows in
    // k; only flag divergence that is material relative to the limit itself.
    res.converging = (e2 <= 0.8 * e1) || (e2 <= 1e-3 * (std::abs(value) + 1e-12));
    return res;
}

}  // namespace

double SpectrumTailFit::sqrt_lambda(std::size_t n) const {
    const std::size_t k = n % 2;
    const double nn = static_cast<double>(n);
    return slope[k] * nn + intercept[k] + curv[k] / (nn + 1.0);
}

double SpectrumTailFit::lambda(std::size_t n) const {
    const double s = sqrt_lambda(n);
    return s * s;
}

SpectrumTailFit fit_spectrum_tail(const std::vector<double>& lambdas) {
    // joint least squares on sqrt(lambda_n): one Weyl slope shared by both
    // parity classes, per-class intercept and 1/(n+1) curvature.  Basis
    // {n, 1_even, 1_odd, 1_even/(n+1), 1_odd/(n+1)}.
    constexpr int kBasis = 5;
    std::size_t first = 0;
    while (first < lambdas.size() && lambdas[first] <= 0.0) ++first;
    const std::size_t usable = lambdas.size() - first;
    if (usable < 16) {
        throw NumericError("spectrum tail fit needs at least 16 positive eigenvalues");
    }
    const std::size_t window = std::max<std::size_t>(16, usable / 2);
    const std::size_t start = std::max(lambdas.size() - window, first);

    double A[kBasis][kBasis] = {};
    double rhs[kBasis] = {};
    for (std::size_t n = start; n < lambdas.size(); ++n) {
        const double nn = static_cast<double>(n);
        const double even = (n % 2 == 0) ? 1.0 : 0.0;
        const double odd = 1.0 - even;
        const double basis[kBasis] = {nn, even, odd, even / (nn + 1.0), odd / (nn + 1.0)};
        const double y = std::sqrt(lambdas[n]);
        for (int i = 0; i < kBasis; ++i) {
            for (int j = 0; j < kBasis; ++j) A[i][j] += basis[i] * basis[j];
            rhs[i] += basis[i] * y;
        }
    }
    double m[kBasis][kBasis + 1];
    for (int i = 0; i < kBasis; ++i) {
        for (int j = 0; j < kBasis; ++j) m[i][j] = A[i][j];
        m[i][kBasis] = rhs[i];
    }
    for (int col = 0; col < kBasis; ++col) {
        int piv = col;
        for (int r = col + 1; r < kBasis; ++r) {
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        }
        for (int j = 0; j <= kBasis; ++j) std::swap(m[piv][j], m[col][j]);
        if (std::abs(m[col][col]) < 1e-300) throw NumericError("spectrum tail fit is singular");
        for (int r = 0; r < kBasis; ++r) {
            if (r == col) continue;
            const double factor = m[r][col] / m[col][col];
            for (int j = col; j <= kBasis; ++j) m[r][j] -= factor * m[col][j];
        }
    }
    SpectrumTailFit fit;
    const double shared_slope = m[0][kBasis] / m[0][0];
    if (!(shared_slope > 0.0)) {
        throw NumericError("spectrum tail fit produced a non-positive slope");
    }
    fit.slope[0] = fit.slope[1] = shared_slope;
    fit.intercept[0] = m[1][kBasis] / m[1][1];
    fit.intercept[1] = m[2][kBasis] / m[2][2];
    fit.curv[0] = m[3][kBasis] / m[3][3];
    fit.curv[1] = m[4][kBasis] / m[4][4];

    double rss = 0.0;
    std::size_t count = 0;
    for (std::size_t n = start; n < lambdas.size(); ++n) {
        const double d = std::sqrt(lambdas[n]) - fit.sqrt_lambda(n);
        rss += d * d;
        ++count;
    }
    fit.rms_residual = std::sqrt(rss / static_cast<double>(count));
    return fit;
}

std::vector<double> extend_spectrum(const std::vector<double>& lambdas,
                                    std::size_t target_count) {
    if (lambdas.size() >= target_count) return lambdas;
    const SpectrumTailFit fit = fit_spectrum_tail(lambdas);
    std::vector<double> out = lambdas;
    out.reserve(target_count);
    for (std::size_t n = lambdas.size(); n < target_count; ++n) {
        const double s_prev = std::sqrt(std::max(out.back(), 0.0));
        double s_next = fit.sqrt_lambda(n);
        if (!(s_next > s_prev)) {
            // Coalescing pairs shrink the class gap below the model's
            // resolution; keep a strict ordering.  A gross inversion means
            // the model does not describe the data.
            if (s_next < s_prev - 0.25 * fit.mean_slope()) {
                throw NumericError("spectrum tail model is not monotone past the data");
            }
            s_next = s_prev * (1.0 + 1e-12) + 1e-12;
        }
        out.push_back(s_next * s_next);
    }
    return out;
}

void TwoSpectraInput::validate() const {
    require_strictly_increasing(lambdas, "lambdas");
    require_strictly_increasing(mus, "mus");
    if (!(alpha >= 0.0 && alpha < M_PI) || !(alpha_prime >= 0.0 && alpha_prime < M_PI)) {
        throw ConfigError("boundary angles must lie in [0, pi)");
    }
    if (std::abs(alpha - alpha_prime) < 1e-12) {
        throw ConfigError("the two spectra must come from distinct boundary angles");
    }
    if (truncation < 1) throw ConfigError("truncation must be positive");
}

bool TwoSpectraInput::has_zero_eigenvalue() const {
    auto any_zero = [](const std::vector<double>& xs) {
        return std::any_of(xs.begin(), xs.end(), [](double x) { return is_zero_eigenvalue(x); });
    };
    return any_zero(lambdas) || any_zero(mus);
}

Complex hadamard_ratio(const TwoSpectraInput& input, Complex lambda) {
    input.validate();
    const std::size_t N = input.truncation;
    if (input.lambdas.size() < N || input.mus.size() < N) {
        throw ConfigError("truncation exceeds the available spectra (extend_spectrum first)");
    }
    check_pole_collision(input.lambdas, lambda);
    if (lambda.imag() == 0.0) {
        const RealLogProduct num = log_product_real(input.mus, N, lambda.real());
        const RealLogProduct den = log_product_real(input.lambdas, N, lambda.real());
        const double mag = num.log_mag - den.log_mag;
        if (mag > 700.0) throw NumericError("hadamard ratio overflowed");
        return Complex{num.sign * den.sign * std::exp(mag), 0.0};
    }
    const Complex log_ratio =
        log_product_complex(input.mus, N, lambda) - log_product_complex(input.lambdas, N, lambda);
    if (log_ratio.real() > 700.0) throw NumericError("hadamard ratio overflowed");
    return std::exp(log_ratio);
}

namespace {

// Ratio prod(1 - lambda/lambda_n) / prod(1 - lambda/mu_n) over deep
// model-extended lists, at real lambda = -k^2.
double forward_ratio_deep(const std::vector<double>& lam_deep, const std::vector<double>& mu_deep,
                          double k) {
    const double lambda = -k * k;
    const std::size_t N = std::min(lam_deep.size(), mu_deep.size());
    const RealLogProduct num = log_product_real(lam_deep, N, lambda);
    const RealLogProduct den = log_product_real(mu_deep, N, lambda);
    return num.sign * den.sign * std::exp(num.log_mag - den.log_mag);
}

}  // namespace

ValueWithError constant_C(const TwoSpectraInput& input, double k0) {
    input.validate();
    if (!(k0 > 0.0)) throw ConfigError("k0 must be positive");

    // Deep lists kill the truncated-product bias at lambda = -(4 k0)^2.
    const std::size_t deep = std::max<std::size_t>(
        {input.truncation, 100000, static_cast<std::size_t>(4000.0 * k0)});
    double model_residual = 0.0;
    std::vector<double> lam_deep;
    std::vector<double> mu_deep;
    try {
        lam_deep = extend_spectrum(input.lambdas, deep);
        mu_deep = extend_spectrum(input.mus, deep);
        model_residual = std::max(fit_spectrum_tail(input.lambdas).rms_residual,
                                  fit_spectrum_tail(input.mus).rms_residual);
    } catch (const NumericError&) {
        lam_deep = input.lambdas;
        mu_deep = input.mus;
        model_residual = 1.0 / std::sqrt(static_cast<double>(std::min(
                                  lam_deep.size(), mu_deep.size())));
    }

    const bool a_zero = std::abs(input.alpha) < 1e-12;
    const bool ap_zero = std::abs(input.alpha_prime) < 1e-12;
    auto f = [&](double k) {
        const double ratio = forward_ratio_deep(lam_deep, mu_deep, k);
        if (a_zero) return k * std::sin(input.alpha_prime) * ratio;
        if (ap_zero) return ratio / (k * std::sin(input.alpha));
        return (std::sin(input.alpha_prime) / std::sin(input.alpha)) * ratio;
    };

    const RichardsonResult res = richardson_limit(f(k0), f(2.0 * k0), f(4.0 * k0));
    if (!res.converging) {
        throw NumericError("constant_C extrapolation is not converging; increase the "
                           "truncation N or supply more eigenvalues");
    }
    const double tail_term = std::abs(res.value) * 4.0 * k0 * model_residual /
                             std::max(1.0, static_cast<double>(deep));
    return {res.value, res.spread + tail_term};
}

TwoSpectraReconstruction::TwoSpectraReconstruction(TwoSpectraInput input, double k0)
    : input_(std::move(input)) {
    input_.validate();
    C_ = constant_C(input_, k0);
    if (input_.lambdas.size() < input_.truncation) {
        input_.lambdas = extend_spectrum(input_.lambdas, input_.truncation);
    }
    if (input_.mus.size() < input_.truncation) {
        input_.mus = extend_spectrum(input_.mus, input_.truncation);
    }
}

MEval TwoSpectraReconstruction::m(Complex lambda) const {
    const double d = input_.alpha - input_.alpha_prime;
    const double cot_d = std::cos(d) / std::sin(d);
    const double cosec_d = 1.0 / std::sin(d);
    const Complex ratio = hadamard_ratio(input_, lambda);
    const Complex pole_part = C_.value * cosec_d * ratio;
    MEval out;
    out.value = cot_d - pole_part;

    // truncation estimate: model tail of the log-ratio plus the C error
    double tail_log = 0.0;
    try {
        const SpectrumTailFit fl = fit_spectrum_tail(input_.lambdas);
        const SpectrumTailFit fm = fit_spectrum_tail(input_.mus);
        const std::size_t N = input_.truncation;
        for (std::size_t n = N; n < N + 50000; ++n) {
            const double dl = std::abs(lambda / fl.lambda(n) - lambda / fm.lambda(n));
            tail_log += dl;
            if (dl < 1e-17) break;
        }
    } catch (const NumericError&) {
        tail_log = std::abs(lambda) / static_cast<double>(input_.truncation);
    }
    out.tail_bound = std::abs(pole_part) * (tail_log + C_.error / std::max(std::abs(C_.value), 1e-300));
    return out;
}

MEval m_from_two_spectra(const TwoSpectraInput& input, Complex lambda) {
    return TwoSpectraReconstruction(input).m(lambda);
}

void MittagLefflerModel::validate() const {
    if (eigenvalues.size() != norming_constants.size()) {
        throw ConfigError("eigenvalues and norming constants must align");
    }
    require_strictly_increasing(eigenvalues, "eigenvalues");
    for (double a : norming_constants) {
        if (!(a > 0.0)) throw PreconditionError("norming constants must be positive");
    }
    for (double l : eigenvalues) {
        if (is_zero_eigenvalue(l)) {
            throw PreconditionError("zero eigenvalue present; shift the spectral data first");
        }
    }
    if (!(alpha >= 0.0 && alpha < M_PI)) throw ConfigError("alpha must lie in [0, pi)");
    if (truncation < 1) throw ConfigError("truncation must be positive");
}

MittagLefflerModel shifted_model(const MittagLefflerModel& model, double c) {
    MittagLefflerModel out = model;
    for (double& l : out.eigenvalues) l += c;
    out.m_at_zero.reset();
    return out;
}

namespace {

struct SeriesModel {
    bool valid = false;
    SpectrumTailFit spectrum;
    double coeff = 0.0;  // t_n ~ coeff / (n + offset)^p
    int p = 0;           // 2 for alpha != 0, 0 for alpha = 0
};

// t_n = 1/(a_n lambda_n); decays like n^-2 for alpha != 0 and approaches a
// constant for alpha = 0.
SeriesModel fit_series_model(const MittagLefflerModel& model) {
    SeriesModel sm;
    sm.p = model.alpha < 1e-12 ? 0 : 2;
    try {
        sm.spectrum = fit_spectrum_tail(model.eigenvalues);
    } catch (const NumericError&) {
        return sm;
    }
    const std::size_t L = model.eigenvalues.size();
    const std::size_t window = std::max<std::size_t>(8, L / 5);
    if (L < window) return sm;
    double acc = 0.0;
    for (std::size_t n = L - window; n < L; ++n) {
        const double t = 1.0 / (model.norming_constants[n] * model.eigenvalues[n]);
        acc += t * std::pow(static_cast<double>(n) + sm.spectrum.mean_offset(), sm.p);
    }
    sm.coeff = acc / static_cast<double>(window);
    sm.valid = true;
    return sm;
}

// sum_{n >= N} t_hat_n * lambda / (lambda - lambda_hat_n) for real lambda <= 0,
// and a numeric fallback otherwise.
Complex series_tail(const SeriesModel& sm, std::size_t N, Complex lambda) {
    if (!sm.valid) return {0.0, 0.0};
    const double a = sm.spectrum.mean_offset();
    const double g = sm.spectrum.mean_slope();
    if (lambda.imag() == 0.0 && lambda.real() <= 0.0 && sm.p == 0) {
        // term_n = c |lambda| / (|lambda| + g^2 (n+a)^2)
        const double abs_lambda = -lambda.real();
        const double w = std::sqrt(abs_lambda) / g;
        const double s = sum_shifted_lorentzian(static_cast<double>(N), a, w);
        return {abs_lambda * sm.coeff / (g * g) * s, 0.0};
    }
    // numeric model sum; terms decay at least like n^-(2+p) for bounded lambda
    Complex acc{0.0, 0.0};
    for (std::size_t n = N; n < N + 400000; ++n) {
        const double nn = static_cast<double>(n);
        const double lam_n = sm.spectrum.lambda(n);
        const double t_n = sm.coeff / std::pow(nn + a, sm.p);
        const Complex term = t_n * lambda / (lambda - lam_n);
        acc += term;
        if (std::abs(term) < 1e-17 * (1.0 + std::abs(acc))) break;
    }
    return acc;
}

double spec_tail_bound(const SeriesModel& sm, std::size_t N, Complex lambda,
                       double dist_to_tail) {
    // sum_{n >= N} 1/(a_n lambda_n^2) * |lambda| * (1 + |lambda|/dist)
    if (!sm.valid) return std::abs(lambda) / static_cast<double>(N);
    const double a = sm.spectrum.mean_offset();
    const double g2 = sm.spectrum.mean_slope() * sm.spectrum.mean_slope();
    const double base = sm.p == 0 ? trigamma(static_cast<double>(N) + a)
                                  : sum_inverse_quartic(static_cast<double>(N), a);
    const double factor = 1.0 + std::abs(lambda) / std::max(dist_to_tail, 1e-300);
    return (sm.coeff / g2) * base * std::abs(lambda) * factor;
}

}  // namespace

MEval m_from_norming(const MittagLefflerModel& model, Complex lambda) {
    model.validate();
    check_pole_collision(model.eigenvalues, lambda);
    const std::size_t N = std::min<std::size_t>(model.truncation, model.eigenvalues.size());
    const bool alpha_zero = model.alpha < 1e-12;
    if (alpha_zero && !model.m_at_zero.has_value()) {
        throw PreconditionError("alpha = 0 reconstruction needs the constant term m(0)");
    }

    const SeriesModel sm = fit_series_model(model);

    std::vector<Complex> terms;
    terms.reserve(N);
    for (std::size_t n = 0; n < N; ++n) {
        const double t_n = 1.0 / (model.norming_constants[n] * model.eigenvalues[n]);
        terms.push_back(t_n * lambda / (lambda - model.eigenvalues[n]));
    }
    Complex series = pairwise_sum(std::span<const Complex>(terms));
    series += series_tail(sm, N, lambda);

    double m0;
    if (model.m_at_zero.has_value()) {
        m0 = *model.m_at_zero;
    } else {
        // cot(alpha) limit: m0 = cot(alpha) - sum t_n
        std::vector<double> ts;
        ts.reserve(N);
        for (std::size_t n = 0; n < N; ++n) {
            ts.push_back(1.0 / (model.norming_constants[n] * model.eigenvalues[n]));
        }
        double s1 = pairwise_sum(std::span<const double>(ts));
        if (sm.valid && sm.p == 2) {
            s1 += sm.coeff * trigamma(static_cast<double>(N) + sm.spectrum.mean_offset());
        }
        m0 = std::cos(model.alpha) / std::sin(model.alpha) - s1;
    }

    MEval out;
    out.value = m0 + series;
    const double dist = std::abs(lambda - model.eigenvalues[N - 1]);
    out.tail_bound = spec_tail_bound(sm, N, lambda, dist);
    return out;
}

ValueWithError m_prime_at_zero(const MittagLefflerModel& model) {
    model.validate();
    const std::size_t N = std::min<std::size_t>(model.truncation, model.eigenvalues.size());
    std::vector<double> terms;
    terms.reserve(N);
    for (std::size_t n = 0; n < N; ++n) {
        const double l = model.eigenvalues[n];
        terms.push_back(1.0 / (model.norming_constants[n] * l * l));
    }
    double sum = pairwise_sum(std::span<const double>(terms));

    // analytic tail from the fitted O(n^-2) (alpha = 0) or O(n^-4) decay
    double tail = 0.0;
    double err;
    const SeriesModel sm = fit_series_model(model);
    if (sm.valid) {
        const double a = sm.spectrum.mean_offset();
        const double g2 = sm.spectrum.mean_slope() * sm.spectrum.mean_slope();
        const double c2 = sm.coeff / g2;  // u_n ~ c2 / (n+a)^(p+2)
        tail = sm.p == 0 ? c2 * trigamma(static_cast<double>(N) + a)
                         : c2 * sum_inverse_quartic(static_cast<double>(N), a);
        err = tail * (sm.spectrum.rms_residual + 2.0 / static_cast<double>(N));
    } else {
        err = terms.empty() ? 0.0 : terms.back() * static_cast<double>(N);
    }
    return {-(sum + tail), err};
}

ValueWithError m0_from_high_energy_constant(const MittagLefflerModel& model, double C,
                                            double k0) {
    model.validate();
    if (model.alpha >= 1e-12) {
        throw PreconditionError("high-energy constant recovery applies to alpha = 0 models");
    }
    MittagLefflerModel probe = model;
    probe.m_at_zero = 0.0;  // evaluate the bare series
    auto g = [&](double k) {
        const Complex lam{-k * k, 0.0};
        const MEval series = m_from_norming(probe, lam);
        return k - series.value.real();
    };
    const RichardsonResult res = richardson_limit(g(k0), g(2.0 * k0), g(4.0 * k0));
    if (!res.converging) {
        throw NumericError("m(0) extrapolation is not converging; increase the truncation N");
    }
    return {res.value + C, res.spread};
}

}  // namespace sltc
