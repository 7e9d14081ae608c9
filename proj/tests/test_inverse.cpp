#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "sltc/inverse.hpp"
#include "sltc/spectrum.hpp"

using namespace sltc;

namespace {

const double kPi = M_PI;
const double kS = kPi / 2.0;

// free fixture spectra: Dirichlet-Dirichlet n^2 and Neumann-Dirichlet (n+1/2)^2
TwoSpectraInput free_input(std::size_t count, std::size_t truncation) {
    TwoSpectraInput in;
    for (std::size_t n = 1; n <= count; ++n) in.lambdas.push_back(double(n) * double(n));
    for (std::size_t n = 0; n < count; ++n) in.mus.push_back((n + 0.5) * (n + 0.5));
    in.alpha = 0.0;
    in.alpha_prime = kPi / 2.0;
    in.truncation = truncation;
    return in;
}

MittagLefflerModel free_dirichlet_model(std::size_t count) {
    MittagLefflerModel m;
    for (std::size_t n = 1; n <= count; ++n) {
        m.eigenvalues.push_back(double(n) * double(n));
        m.norming_constants.push_back(kPi / (2.0 * double(n) * double(n)));
    }
    m.alpha = 0.0;
    m.truncation = count;
    return m;
}

double coth(double x) { return 1.0 / std::tanh(x); }

}  // namespace

TEST_CASE("two-spectra input validation") {
    TwoSpectraInput bad = free_input(16, 16);
    bad.alpha_prime = bad.alpha;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    TwoSpectraInput nonmono = free_input(16, 16);
    std::swap(nonmono.lambdas[3], nonmono.lambdas[4]);
    CHECK_THROWS_AS(nonmono.validate(), ConfigError);
    TwoSpectraInput zero = free_input(16, 16);
    zero.mus.insert(zero.mus.begin(), 0.0);
    CHECK(zero.has_zero_eigenvalue());
}

TEST_CASE("hadamard ratio closed forms") {
    auto in = free_input(2100, 2000);
    // at lambda = 0 every factor is 1
    CHECK(hadamard_ratio(in, Complex{0.0, 0.0}).real() == doctest::Approx(1.0));
    // prod(1-l/mu)/prod(1-l/lam) = pi sqrt(l) cot(pi sqrt(l)); at -1: pi coth(pi)
    const double r1 = hadamard_ratio(in, Complex{-1.0, 0.0}).real();
    CHECK(r1 == doctest::Approx(kPi * coth(kPi)).epsilon(1e-5));
    // truncation error shrinks under N-doubling
    auto in_half = free_input(2100, 1000);
    const double r_half = hadamard_ratio(in_half, Complex{-1.0, 0.0}).real();
    CHECK(std::abs(r1 - kPi * coth(kPi)) < std::abs(r_half - kPi * coth(kPi)));
    CHECK(std::abs(r_half - kPi * coth(kPi)) < 1e-3);
    // large |lambda|: ratio ~ 100 pi coth(100 pi)
    const double r2 = hadamard_ratio(in, Complex{-1e4, 0.0}).real();
    CHECK(r2 == doctest::Approx(100.0 * kPi).epsilon(5e-3));

    CHECK_THROWS_AS(hadamard_ratio(in, Complex{4.0, 0.0}), PoleError);
    TwoSpectraInput short_in = free_input(10, 2000);
    CHECK_THROWS_AS(hadamard_ratio(short_in, Complex{-1.0, 0.0}), ConfigError);
}

TEST_CASE("hadamard ratio replaces a zero eigenvalue by the factor lambda") {
    // denominator spectrum {0, 1, 4, ...}: lambda * prod_{n>=1}(1 - l/n^2)
    //   = lambda * sin(pi sqrt(l)) / (pi sqrt(l))
    TwoSpectraInput in;
    for (std::size_t n = 0; n < 1500; ++n) in.lambdas.push_back(double(n) * double(n));
    for (std::size_t n = 0; n < 1500; ++n) in.mus.push_back((n + 0.5) * (n + 0.5));
    in.alpha = kPi / 2.0;
    in.alpha_prime = kPi / 4.0;
    in.truncation = 1500;
    const double l = -2.0;
    const double k = std::sqrt(-l);
    const double denom = l * std::sinh(kPi * k) / (kPi * k);
    const double numer = std::cosh(kPi * k);
    CHECK(hadamard_ratio(in, Complex{l, 0.0}).real() ==
          doctest::Approx(numer / denom).epsilon(1e-4));
}

TEST_CASE("constant C: free fixture hits 1/pi") {
    const auto C = constant_C(free_input(2100, 2000));
    CHECK(C.value == doctest::Approx(1.0 / kPi).epsilon(1e-4));
    CHECK(std::abs(C.value - 1.0 / kPi) < 1e-4);
    CHECK(C.error < 1e-4);
}

TEST_CASE("constant C against direct Delta(0) evaluation (q = 0 oracle)") {
    // C = C_{alpha',beta} / C_{alpha,beta} = Delta_{alpha'}(0) / Delta_{alpha}(0)
    // when both spectra avoid zero
    const TransferMatrix I;
    const double alpha = kPi / 4.0;
    const double alpha_prime = kPi / 2.0;
    const double beta = kPi;
    TwoSpectraInput in;
    const auto lam = oracle::eigenvalues_exact(kS, I, alpha, beta, 80);
    const auto mu = oracle::eigenvalues_exact(kS, I, alpha_prime, beta, 80);
    in.lambdas = lam;
    in.mus = mu;
    in.alpha = alpha;
    in.alpha_prime = alpha_prime;
    in.truncation = 2000;
    in.lambdas = extend_spectrum(in.lambdas, 2000);
    in.mus = extend_spectrum(in.mus, 2000);
    const auto C = constant_C(in);
    const double expected = oracle::delta_exact(kS, I, alpha_prime, beta, 0.0) /
                            oracle::delta_exact(kS, I, alpha, beta, 0.0);
    CHECK(C.value == doctest::Approx(expected).epsilon(1e-3));

    // swapped roles (alpha' = 0 case)
    TwoSpectraInput swapped;
    swapped.lambdas = extend_spectrum(mu, 2000);  // spectrum for alpha = pi/2
    swapped.mus = extend_spectrum(oracle::eigenvalues_exact(kS, I, 0.0, beta, 80), 2000);
    swapped.alpha = kPi / 2.0;
    swapped.alpha_prime = 0.0;
    swapped.truncation = 2000;
    const auto C2 = constant_C(swapped);
    const double expected2 = oracle::delta_exact(kS, I, 0.0, beta, 0.0) /
                             oracle::delta_exact(kS, I, kPi / 2.0, beta, 0.0);
    CHECK(C2.value == doctest::Approx(expected2).epsilon(1e-3));
}

TEST_CASE("m from two spectra: free fixture closed forms") {
    const TwoSpectraReconstruction rec(free_input(2100, 2000));
    // m_{0,pi}(-1) = coth(pi)
    CHECK(rec.m(Complex{-1.0, 0.0}).value.real() == doctest::Approx(coth(kPi)).epsilon(1e-3));
    // m_{0,pi}(-4) = 2 coth(2 pi)
    CHECK(rec.m(Complex{-4.0, 0.0}).value.real() ==
          doctest::Approx(2.0 * coth(2.0 * kPi)).epsilon(1e-3));
    // alpha = 0 regime: m / (-i sqrt(lambda)) -> 1
    for (double k : {20.0, 50.0, 100.0}) {
        const double m = rec.m(Complex{-k * k, 0.0}).value.real();
        CHECK(std::abs(m / k - 1.0) < 0.02);
    }
    // reported tail bound covers the actual deviation at the probe points
    const auto ev = rec.m(Complex{-1.0, 0.0});
    CHECK(std::abs(ev.value.real() - coth(kPi)) < 10.0 * (ev.tail_bound + 1e-6));
}

TEST_CASE("pole structure of the norming-constant reconstruction") {
    auto model = free_dirichlet_model(2000);
    model.m_at_zero = 1.0 / kPi;
    // residue at lambda_n from epsilon-averaged probes equals 1/a_n
    for (double l : {1.0, 9.0}) {
        const double a_n = kPi / (2.0 * l);
        double acc = 0.0;
        for (double eps : {1e-5, -1e-5, 1e-6, -1e-6}) {
            acc += (m_from_norming(model, Complex{l + eps, 0.0}).value * eps).real();
        }
        CHECK((acc / 4.0) * a_n == doctest::Approx(1.0).epsilon(1e-4));
    }
    CHECK_THROWS_AS(m_from_norming(model, Complex{4.0, 0.0}), PoleError);
}

TEST_CASE("alpha = 0 reconstruction needs m(0) and matches the closed form") {
    auto model = free_dirichlet_model(2000);
    CHECK_THROWS_AS(m_from_norming(model, Complex{-1.0, 0.0}), PreconditionError);
    model.m_at_zero = 1.0 / kPi;
    CHECK(m_from_norming(model, Complex{-1.0, 0.0}).value.real() ==
          doctest::Approx(coth(kPi)).epsilon(1e-3));
    // asymptotic regime: reconstruction / (-i sqrt(lambda)) -> 1 on k in [20, 100]
    for (double k : {20.0, 60.0, 100.0}) {
        const double m = m_from_norming(model, Complex{-k * k, 0.0}).value.real();
        CHECK(std::abs(m / k - 1.0) < 0.02);
    }
}

TEST_CASE("alpha != 0 reconstruction derives m(0) and matches the forward solver") {
    // Neumann-Dirichlet free fixture: eigenvalues (n+1/2)^2, a_n = pi/2
    MittagLefflerModel model;
    for (std::size_t n = 0; n < 2000; ++n) {
        model.eigenvalues.push_back((n + 0.5) * (n + 0.5));
        model.norming_constants.push_back(kPi / 2.0);
    }
    model.alpha = kPi / 2.0;
    model.truncation = 2000;
    Problem p = Problem::free_problem(kS);
    BoundaryAngles nd(kPi / 2.0, kPi);
    for (double l : {-1.0, -5.0, -20.0}) {
        const double direct = weyl_m(p, nd, Complex{l, 0.0}).real();
        const auto rec = m_from_norming(model, Complex{l, 0.0});
        CHECK(rec.value.real() == doctest::Approx(direct).epsilon(1e-3));
    }
}

TEST_CASE("tail bounds shrink at least linearly in 1/N") {
    MittagLefflerModel base;
    for (std::size_t n = 0; n < 2000; ++n) {
        base.eigenvalues.push_back((n + 0.5) * (n + 0.5));
        base.norming_constants.push_back(kPi / 2.0);
    }
    base.alpha = kPi / 2.0;
    double prev = 1e300;
    for (std::size_t N : {250u, 500u, 1000u, 2000u}) {
        base.truncation = N;
        const double tb = m_from_norming(base, Complex{-5.0, 0.0}).tail_bound;
        CHECK(tb <= prev / 1.9);
        prev = tb;
    }
}

TEST_CASE("m'(0) sum and its invariances") {
    auto model = free_dirichlet_model(100000);
    model.truncation = 100000;
    const auto mp = m_prime_at_zero(model);
    CHECK(std::abs(mp.value - (-kPi / 3.0)) < 1e-6);

    // N-doubling moves the raw partial sum by less than 2/(pi N)
    auto m1 = free_dirichlet_model(1000);
    auto m2 = free_dirichlet_model(2000);
    const double v1 = m_prime_at_zero(m1).value;
    const double v2 = m_prime_at_zero(m2).value;
    CHECK(std::abs(v2 - v1) < 2.0 / (kPi * 1000.0));

    // scaling all a_n by 2 halves the magnitude
    auto scaled = free_dirichlet_model(2000);
    for (double& a : scaled.norming_constants) a *= 2.0;
    CHECK(m_prime_at_zero(scaled).value ==
          doctest::Approx(0.5 * m_prime_at_zero(free_dirichlet_model(2000)).value));

    // zero eigenvalue rejected
    MittagLefflerModel zero = free_dirichlet_model(50);
    zero.eigenvalues.insert(zero.eigenvalues.begin(), 0.0);
    zero.norming_constants.insert(zero.norming_constants.begin(), 1.0);
    CHECK_THROWS_AS(m_prime_at_zero(zero), PreconditionError);
}

TEST_CASE("non-positive norming constants are rejected") {
    auto model = free_dirichlet_model(50);
    model.norming_constants[3] = -1.0;
    CHECK_THROWS_AS(m_from_norming(model, Complex{-1.0, 0.0}), PreconditionError);
}

TEST_CASE("shifted model evaluates the same function") {
    MittagLefflerModel model;
    for (std::size_t n = 0; n < 1500; ++n) {
        model.eigenvalues.push_back((n + 0.5) * (n + 0.5));
        model.norming_constants.push_back(kPi / 2.0);
    }
    model.alpha = kPi / 2.0;
    model.truncation = 1500;
    const auto shifted = shifted_model(model, 3.0);
    const double direct = m_from_norming(model, Complex{-2.0, 0.0}).value.real();
    const double via_shift = m_from_norming(shifted, Complex{1.0, 0.0}).value.real();
    CHECK(via_shift == doctest::Approx(direct).epsilon(1e-6));
}

TEST_CASE("m(0) from the high-energy constant (opt-in path)") {
    // free Dirichlet fixture: m = k coth(pi k) = -i sqrt(lambda) + 0 + o(1),
    // so C = 0 and m(0) must come out as 1/pi
    auto model = free_dirichlet_model(4000);
    model.truncation = 4000;
    const auto m0 = m0_from_high_energy_constant(model, 0.0);
    CHECK(m0.value == doctest::Approx(1.0 / kPi).epsilon(1e-3));
}

TEST_CASE("spectrum extension reproduces the free tail exactly") {
    std::vector<double> head;
    for (std::size_t n = 1; n <= 48; ++n) head.push_back(double(n) * double(n));
    const auto full = extend_spectrum(head, 400);
    CHECK(full.size() == 400);
    CHECK(full[399] == doctest::Approx(400.0 * 400.0).epsilon(1e-8));
}
