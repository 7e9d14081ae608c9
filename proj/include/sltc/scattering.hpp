#pragma once

#include <optional>
#include <vector>

#include "sltc/problem.hpp"
#include "sltc/propagate.hpp"
#include "sltc/spectrum.hpp"
#include "sltc/types.hpp"

namespace sltc {

// Jost solutions of the full-line problem with ess supp(q) in [-S, S]:
// f_plus = e^{i zeta x} exactly for x >= S, continued left through the jump
// with M^-1; f_minus = e^{-i zeta x} for x <= -S, continued right with M.
// States are stored unscaled; internally the propagation runs on
// f * e^{-/+ i zeta x} so large Im(zeta) does not overflow.
struct JostPair {
    SpectralParameter parameter;
    // f_plus at S, 0+, 0-, -S and f_minus at -S, 0-, 0+, S
    SolutionState f_plus_at_S, f_plus_at_zero_plus, f_plus_at_zero_minus, f_plus_at_minus_S;
    SolutionState f_minus_at_minus_S, f_minus_at_zero_minus, f_minus_at_zero_plus,
        f_minus_at_S;
};

JostPair jost(const Problem& problem, Complex zeta);

// Coefficients of f_minus = A * conj-jost + B * jost at real xi != 0,
// extracted from the 2x2 plane-wave system at x = S.  |A|^2 - |B|^2 = 1.
struct ABPair {
    Complex A;
    Complex B;
};

ABPair scattering_coefficients(const Problem& problem, double xi);

// Same extraction re-solved at x = -S; agreement with the x = S values is a
// consistency check of the forward solver.
ABPair scattering_coefficients_at_left(const Problem& problem, double xi);

// A and B continued to complex zeta (the entire-function evaluation used for
// bound states and for characteristic functions at lambda < 0).
ABPair scattering_coefficients_zeta(const Problem& problem, Complex zeta);

// Reflection coefficient samples plus optional A/B and bound-state data.
struct ScatteringData {
    double half_width = 0.0;
    std::vector<double> xi_grid;
    std::vector<Complex> R;
    std::optional<std::vector<ABPair>> AB;
    std::vector<double> bound_states;  // eta_j > 0, lambda_j = -eta_j^2
};

struct ReflectionOptions {
    bool with_AB = true;
    bool with_bound_states = true;
    double bound_state_eta_max = 12.0;
};

ScatteringData reflection(const Problem& problem, std::vector<double> xi_grid,
                          const ReflectionOptions& options = {});

// Bound states: zeros of A(i eta) on eta > 0.
std::vector<double> bound_states(const Problem& problem, double eta_max = 12.0);

// Abstract source of scattering coefficients, evaluable at any zeta != 0.
// The forward solver provides the exact model; gridded data provide a
// rational-fit model with a reported residual.
class ScatteringModel {
public:
    virtual ~ScatteringModel() = default;
    virtual ABPair coefficients(Complex zeta) const = 0;
    virtual double half_width() const = 0;
};

class ForwardScatteringModel final : public ScatteringModel {
public:
    explicit ForwardScatteringModel(Problem problem) : problem_(std::move(problem)) {}
    ABPair coefficients(Complex zeta) const override;
    double half_width() const override { return problem_.half_width(); }

private:
    Problem problem_;
};

// Least-squares rational (Pade-style) fit of gridded A, B samples, giving an
// evaluable continuation with a reported fit residual.  Used when only CSV
// samples are available.
class GriddedScatteringModel final : public ScatteringModel {
public:
    GriddedScatteringModel(const ScatteringData& data, int numerator_degree = 8,
                           int denominator_degree = 8);
    ABPair coefficients(Complex zeta) const override;
    double half_width() const override { return half_width_; }
    double fit_residual() const { return fit_residual_; }

private:
    double half_width_;
    double scale_;
    std::vector<Complex> a_num_, a_den_, b_num_, b_den_;
    double fit_residual_ = 0.0;
};

// Values of the fundamental system W_alpha at x = S recovered from the
// scattering coefficients (and their x-derivatives).  On forward data this
// matches direct propagation of W_alpha from -S.
struct RecoveredW {
    Complex w1, w2;    // u_alpha(S), w_alpha(S)
    Complex dw1, dw2;  // derivatives at S
};

// Recovery at real xi: the conjugate coefficients are conj(A), conj(B).
RecoveredW recover_W_at_S(const ABPair& ab, double alpha, double half_width, double xi);

// Recovery at complex zeta: the conjugate branch is evaluated from the model
// as conj(coefficients(conj(zeta))), which is the entire continuation of the
// real-axis identity.
RecoveredW recover_W_at_S(const ScatteringModel& model, double alpha, Complex zeta);

// Grid version over real xi; requires AB samples (throws ConfigError when
// only R is present and no phase retrieval was requested).
std::vector<RecoveredW> recover_W_at_S(const ScatteringData& data, double alpha);

// Experimental: reconstructs A's phase from |A| = 1/sqrt(1 - |R|^2) via a
// discrete Schwarz (Hilbert-transform) integral on the truncated grid.
// Valid only without bound states; the quadrature error estimate is
// returned alongside.
struct PhaseRetrievalResult {
    std::vector<ABPair> AB;
    double quadrature_error = 0.0;
};

PhaseRetrievalResult retrieve_AB_from_reflection(const ScatteringData& data);

// Neumann-Neumann (alpha = beta = pi/2) and Neumann-Dirichlet (beta = pi)
// spectra, plus NN norming constants, extracted from scattering data.  The
// transfer matrix enters only through the asymptotic zero pattern guiding
// the root scan.
struct NeumannData {
    std::vector<double> nn_eigenvalues;
    std::vector<double> nn_norming;
    std::vector<double> nd_eigenvalues;
};

NeumannData neumann_data_from_scattering(const ScatteringModel& model, const TransferMatrix& M,
                                         int n_max);

}  // namespace sltc
