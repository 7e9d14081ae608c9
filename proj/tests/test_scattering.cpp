#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "sltc/scattering.hpp"
#include "sltc/spectrum.hpp"

using namespace sltc;

namespace {

const double kPi = M_PI;
const double kS = kPi / 2.0;
const Complex kI{0.0, 1.0};

Problem free_p() { return Problem::free_problem(kS); }
Problem diag_p() { return Problem(kS, {0.0, 0.0, 0.0}, TransferMatrix(2, 0, 0, 0.5)); }
Problem shear_p() { return Problem(kS, {0.0, 0.0, 0.0}, TransferMatrix(1, 1, 0, 1)); }

Problem bump_p(double amplitude) {
    std::vector<double> q(401);
    for (int i = 0; i < 401; ++i) {
        const double x = -kS + kPi * i / 400.0;
        q[static_cast<std::size_t>(i)] = amplitude * std::exp(-4.0 * x * x);
    }
    return Problem(kS, q, TransferMatrix());
}

}  // namespace

TEST_CASE("free problem: Jost solutions are plane waves everywhere") {
    Problem p = free_p();
    for (Complex zeta : {Complex{1.3, 0.0}, Complex{0.4, 0.8}}) {
        const JostPair jp = jost(p, zeta);
        auto plane = [&](double x) { return std::exp(kI * zeta * x); };
        CHECK(std::abs(jp.f_plus_at_S.y - plane(kS)) < 1e-10);
        CHECK(std::abs(jp.f_plus_at_minus_S.y - plane(-kS)) < 1e-10);
        CHECK(std::abs(jp.f_plus_at_zero_minus.y - plane(0.0)) < 1e-10);
        CHECK(std::abs(jp.f_plus_at_zero_minus.dy - kI * zeta) < 1e-10);
        CHECK(std::abs(jp.f_minus_at_S.y - std::exp(-kI * zeta * kS)) < 1e-10);
    }
    CHECK_THROWS_AS(jost(p, Complex{0.0, 0.0}), PreconditionError);
}

TEST_CASE("large Im(zeta) stays finite through the scaled representation") {
    Problem p = bump_p(1.5);
    // |Im zeta| * S up to 50 must not overflow
    for (double eta : {10.0, 31.0, 31.8}) {
        const JostPair jp = jost(p, Complex{0.0, eta});
        CHECK(std::isfinite(jp.f_plus_at_minus_S.y.real()));
        CHECK(std::isfinite(jp.f_minus_at_S.y.real()));
        const ABPair ab = scattering_coefficients_zeta(p, Complex{0.0, eta});
        CHECK(std::isfinite(ab.A.real()));
        // A(i eta) -> 1 as eta grows for a bounded potential
        if (eta > 30.0) CHECK(std::abs(ab.A - 1.0) < 0.1);
    }
}

TEST_CASE("compact support makes the boundary values exact plane waves") {
    Problem p = bump_p(1.5);
    const Complex zeta{2.0, 0.0};
    const JostPair jp = jost(p, zeta);
    CHECK(std::abs(jp.f_plus_at_S.y - std::exp(kI * zeta * kS)) == 0.0);
    CHECK(std::abs(jp.f_plus_at_S.dy - kI * zeta * std::exp(kI * zeta * kS)) == 0.0);
    CHECK(std::abs(jp.f_minus_at_minus_S.y - std::exp(kI * zeta * kS)) == 0.0);
}

TEST_CASE("diagonal jump: closed-form Jost pieces") {
    Problem p = diag_p();
    const double xi = 1.3;
    const Complex zeta{xi, 0.0};
    const JostPair jp = jost(p, zeta);
    // h1(x) = (5/4) e^{i xi x} - (3/4) e^{-i xi x} for x < 0
    const Complex expected_h1 =
        1.25 * std::exp(-kI * zeta * kS) - 0.75 * std::exp(kI * zeta * kS);
    CHECK(std::abs(jp.f_plus_at_minus_S.y - expected_h1) < 1e-10);
    // h2(0+) = M (1, -i xi) = (2, -i xi / 2)
    CHECK(std::abs(jp.f_minus_at_zero_plus.y - 2.0) < 1e-10);
    CHECK(std::abs(jp.f_minus_at_zero_plus.dy - Complex{0.0, -xi / 2.0}) < 1e-10);
}

TEST_CASE("scattering coefficients: constants for the diagonal jump") {
    Problem p = diag_p();
    for (double xi : {0.4, 1.0, 2.7, 8.0, -1.5}) {
        const ABPair ab = scattering_coefficients(p, xi);
        CHECK(std::abs(ab.A - 1.25) < 1e-8);
        CHECK(std::abs(ab.B - 0.75) < 1e-8);
        CHECK(std::norm(ab.A) - std::norm(ab.B) == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK_THROWS_AS(scattering_coefficients(p, 0.0), PreconditionError);

    Problem f = free_p();
    const ABPair ab = scattering_coefficients(f, 1.7);
    CHECK(std::abs(ab.A - 1.0) < 1e-10);
    CHECK(std::abs(ab.B) < 1e-10);
}

TEST_CASE("matching-point independence of A and B") {
    for (Problem p : {diag_p(), shear_p(), bump_p(1.5)}) {
        for (double xi : {1.0, 3.3}) {
            const ABPair at_S = scattering_coefficients(p, xi);
            const ABPair at_mS = scattering_coefficients_at_left(p, xi);
            CHECK(std::abs(at_S.A - at_mS.A) < 1e-8);
            CHECK(std::abs(at_S.B - at_mS.B) < 1e-8);
        }
    }
}

TEST_CASE("shear jump: closed-form A and B") {
    // A = 1 - i xi / 2, B = -i xi / 2
    Problem p = shear_p();
    const double xi = 2.0;
    const ABPair ab = scattering_coefficients(p, xi);
    CHECK(std::abs(ab.A - Complex{1.0, -1.0}) < 1e-9);
    CHECK(std::abs(ab.B - Complex{0.0, -1.0}) < 1e-9);
    CHECK(std::norm(ab.A) - std::norm(ab.B) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("reflection data: unitarity, symmetry, trivial cases") {
    Problem f = free_p();
    std::vector<double> grid;
    for (int i = 1; i <= 40; ++i) grid.push_back(0.2 * i);
    const ScatteringData free_data = reflection(f, grid);
    for (const auto& r : free_data.R) CHECK(std::abs(r) < 1e-10);
    CHECK(free_data.bound_states.empty());

    Problem d = diag_p();
    const ScatteringData diag_data = reflection(d, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(std::abs(diag_data.R[i] - 0.6) < 1e-8);
        const auto& ab = (*diag_data.AB)[i];
        CHECK(std::norm(ab.A) - std::norm(ab.B) == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(std::abs(diag_data.R[i]) < 1.0);
    }

    // R(-xi) = conj(R(xi)) for a real potential
    Problem b = bump_p(1.5);
    for (double xi : {0.7, 2.1}) {
        const ABPair plus = scattering_coefficients(b, xi);
        const ABPair minus = scattering_coefficients(b, -xi);
        CHECK(std::abs(minus.B / minus.A - std::conj(plus.B / plus.A)) < 1e-8);
    }

    std::vector<double> bad_grid{1.0, 0.0};
    CHECK_THROWS_AS(reflection(f, bad_grid), PreconditionError);
}

TEST_CASE("bound states: negative well holds exactly one") {
    Problem well = bump_p(-1.2);
    const auto etas = bound_states(well);
    REQUIRE(etas.size() == 1);
    CHECK(etas[0] > 0.0);
    // A(i eta) vanishes there
    const ABPair ab = scattering_coefficients_zeta(well, Complex{0.0, etas[0]});
    CHECK(std::abs(ab.A) < 1e-8);
    // and the line eigenvalue -eta^2 matches the full-line ground state的
    CHECK(bound_states(free_p()).empty());
    CHECK(bound_states(diag_p()).empty());
}

TEST_CASE("recovery of W(S, xi) from forward coefficients") {
    // free problem, alpha = pi/2: w2(S) = cos(2 xi S) = cos(pi) = -1 at xi = 1
    Problem f = free_p();
    const ABPair free_ab = scattering_coefficients(f, 1.0);
    const RecoveredW rw = recover_W_at_S(free_ab, kPi / 2.0, kS, 1.0);
    CHECK(rw.w2.real() == doctest::Approx(-1.0).epsilon(1e-10));

    for (Problem p : {diag_p(), shear_p(), bump_p(1.5)}) {
        for (double xi : {1.0, 2.0, 3.7}) {
            const ABPair ab = scattering_coefficients(p, xi);
            const RecoveredW rec = recover_W_at_S(ab, kPi / 2.0, kS, xi);
            auto direct = propagate(p, StateMatrix::boundary_matrix(kPi / 2.0, -kS),
                                    Complex{xi * xi, 0.0}, Direction::LeftToRight);
            const auto& fin = direct.final();
            const double scale = std::abs(fin.col[0].y) + std::abs(fin.col[1].y) + 1.0;
            CHECK(std::abs(rec.w1 - fin.col[0].y) / scale < 1e-8);
            CHECK(std::abs(rec.w2 - fin.col[1].y) / scale < 1e-8);
            CHECK(std::abs(rec.dw1 - fin.col[0].dy) / scale < 1e-8);
            CHECK(std::abs(rec.dw2 - fin.col[1].dy) / scale < 1e-8);
        }
    }
}

TEST_CASE("recovery extends to negative lambda through subcritical zeta") {
    Problem d = diag_p();
    const ForwardScatteringModel model(d);
    const Complex lambda{-1.0, 0.0};
    const RecoveredW rec = recover_W_at_S(model, kPi / 2.0, zeta_from_lambda(lambda));
    auto direct = propagate(d, StateMatrix::boundary_matrix(kPi / 2.0, -kS), lambda,
                            Direction::LeftToRight);
    const auto& fin = direct.final();
    CHECK(std::abs(rec.w2 - fin.col[1].y) / std::abs(fin.col[1].y) < 1e-6);
    CHECK(std::abs(rec.dw1 - fin.col[0].dy) / (std::abs(fin.col[0].dy) + 1.0) < 1e-6);
}

TEST_CASE("grid recovery requires A/B data") {
    ScatteringData data;
    data.half_width = kS;
    data.xi_grid = {1.0, 2.0};
    data.R = {Complex{0.1, 0.0}, Complex{0.1, 0.0}};
    CHECK_THROWS_AS(recover_W_at_S(data, kPi / 2.0), ConfigError);
}

TEST_CASE("neumann data from scattering matches the direct solver") {
    Problem d = diag_p();
    const ForwardScatteringModel model(d);
    const NeumannData rec = neumann_data_from_scattering(model, d.transfer(), 5);
    SpectrumOptions with_norming;
    with_norming.with_norming = true;
    const auto nn = compute_spectrum(d, BoundaryAngles(kPi / 2.0, kPi / 2.0), 5, with_norming);
    const auto nd = compute_spectrum(d, BoundaryAngles(kPi / 2.0, kPi), 5);
    for (int i = 0; i < 5; ++i) {
        CHECK(std::abs(rec.nn_eigenvalues[i] - nn.eigenvalues[i]) < 1e-6);
        CHECK(std::abs(rec.nd_eigenvalues[i] - nd.eigenvalues[i]) < 1e-6);
        CHECK(std::abs(rec.nn_norming[i] - (*nn.norming_constants)[i]) < 1e-6);
    }
    // free problem sanity: NN {0, 1, 4, 9}, a_0 = pi, a_n = pi/2; ND (n+1/2)^2
    Problem f = free_p();
    const ForwardScatteringModel fmodel(f);
    const NeumannData frec = neumann_data_from_scattering(fmodel, f.transfer(), 4);
    const double nn_expect[4] = {0.0, 1.0, 4.0, 9.0};
    for (int i = 0; i < 4; ++i) {
        CHECK(frec.nn_eigenvalues[i] == doctest::Approx(nn_expect[i]).epsilon(1e-8));
        CHECK(frec.nd_eigenvalues[i] ==
              doctest::Approx((i + 0.5) * (i + 0.5)).epsilon(1e-8));
        CHECK(frec.nn_norming[i] == doctest::Approx(i == 0 ? kPi : kPi / 2.0).epsilon(1e-8));
    }
}

TEST_CASE("gridded model continues A and B off the sample grid") {
    Problem b = bump_p(1.5);
    std::vector<double> grid;
    for (int i = 0; i < 160; ++i) grid.push_back(0.3 + 7.7 * i / 159.0);
    ReflectionOptions opts;
    opts.with_bound_states = false;
    const ScatteringData data = reflection(b, grid, opts);
    const GriddedScatteringModel model(data);
    CHECK(model.fit_residual() < 5e-3);
    // interior real point off the grid
    const ABPair fit = model.coefficients(Complex{2.345, 0.0});
    const ABPair exact = scattering_coefficients(b, 2.345);
    CHECK(std::abs(fit.A - exact.A) < 5e-3);
    CHECK(std::abs(fit.B - exact.B) < 5e-3);
}

TEST_CASE("phase retrieval from |R| alone (experimental, no bound states)") {
    // constant reflection: log|A| is flat, so the phase vanishes and
    // A = 1/sqrt(1 - |R|^2) = 5/4 exactly
    ScatteringData data;
    data.half_width = kS;
    for (int i = 1; i <= 200; ++i) {
        data.xi_grid.push_back(0.05 * i);
        data.R.push_back(Complex{0.6, 0.0});
    }
    const PhaseRetrievalResult pr = retrieve_AB_from_reflection(data);
    for (const auto& ab : pr.AB) {
        CHECK(std::abs(ab.A - 1.25) < 1e-6);
        CHECK(std::abs(ab.B - 0.75) < 1e-6);
    }

    ScatteringData with_bound = data;
    with_bound.bound_states = {0.5};
    CHECK_THROWS_AS(retrieve_AB_from_reflection(with_bound), PreconditionError);
}

TEST_CASE("trivial scattering data implies the free propagator") {
    // R identically 0 and no bound states: recovered W matches q = 0, M = I
    Problem f = free_p();
    std::vector<double> grid{0.8, 1.6, 2.4};
    const ScatteringData data = reflection(f, grid);
    for (const auto& r : data.R) CHECK(std::abs(r) < 1e-10);
    const auto recs = recover_W_at_S(data, kPi / 4.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double xi = grid[i];
        const auto w = oracle::w_alpha_exact(kS, TransferMatrix(), kPi / 4.0, kS, xi * xi);
        CHECK(std::abs(recs[i].w2 - w.y) < 1e-8);
    }
}
