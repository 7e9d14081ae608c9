#pragma once

// Test-side oracles, independent of the library's propagation path:
//  - exact trigonometric mode matching for q = 0 problems (any transfer
//    matrix), giving the characteristic function in closed form;
//  - dense sign-scan + bisection root finding on the closed form;
//  - norming constants by adaptive-resolution Simpson on the closed-form
//    eigensolution;
//  - a small fixed-step reference integrator (independent code) at a much
//    finer step for potentials without a closed form.

#include <complex>
#include <functional>
#include <vector>

#include "sltc/problem.hpp"

namespace oracle {

using Complex = std::complex<double>;

struct State {
    Complex y, dy;
};

// q = 0: value/derivative of the solution with terminal data
// v(S) = sin(beta), v'(S) = cos(beta) at x = -S (transfer jump included).
State v_at_left_exact(double S, const sltc::TransferMatrix& M, double beta, Complex lambda);

// q = 0 characteristic function Delta(lambda) in closed form.
double delta_exact(double S, const sltc::TransferMatrix& M, double alpha, double beta,
                   double lambda);

// w_alpha(x) in closed form for q = 0 (left/right trig pieces + jump).
State w_alpha_exact(double S, const sltc::TransferMatrix& M, double alpha, double x,
                    double lambda);

// First n eigenvalues of the q = 0 problem by brute-force sign scan plus
// bisection on the closed-form Delta (tolerance ~1e-13 relative).
std::vector<double> eigenvalues_exact(double S, const sltc::TransferMatrix& M, double alpha,
                                      double beta, int n);

// Norming constant by Simpson refinement on the closed-form w_alpha^2.
double norming_exact(double S, const sltc::TransferMatrix& M, double alpha, double lambda_n);

// Independent fixed-step reference integration (Runge-Kutta, step h), for
// potentials given as a callable; used at h/16 of the library default.
State integrate_reference(const std::function<double(double)>& q, double S,
                          const sltc::TransferMatrix& M, State init_at_S_or_minus_S,
                          bool left_to_right, Complex lambda, int steps_per_side);

// Generic scalar bisection to ~1e-13 on a bracketed sign change.
double bisect(const std::function<double(double)>& f, double a, double b);

}  // namespace oracle
