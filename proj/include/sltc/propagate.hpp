#pragma once

#include <span>
#include <vector>

#include "sltc/problem.hpp"
#include "sltc/types.hpp"

namespace sltc {

// One solution column: value and derivative at a point.
struct SolutionState {
    Complex y{0.0, 0.0};
    Complex dy{0.0, 0.0};
};

// Fundamental-system state at a point x: two (value, derivative) columns.
// The determinant is the Wronskian of the columns; it is constant along a
// propagation, including across the transfer jump (det M = 1).
struct StateMatrix {
    double x = 0.0;
    // side = -1 tags the state at 0- and +1 the state at 0+; 0 elsewhere.
    int side = 0;
    SolutionState col[2];

    Complex det() const;

    // Initial matrix at x = -S with columns ( cos a, sin a; -sin a, cos a ).
    static StateMatrix boundary_matrix(double alpha, double x);
};

enum class Direction { LeftToRight, RightToLeft };

struct Trajectory {
    std::vector<StateMatrix> states;  // in propagation order; x = 0 appears twice
    double wronskian_drift = 0.0;     // max |det(x) - det_0| / |det_0| observed

    const StateMatrix& initial() const { return states.front(); }
    const StateMatrix& final() const { return states.back(); }
    const StateMatrix& at_zero_minus() const;
    const StateMatrix& at_zero_plus() const;
};

// Process-wide maximum relative Wronskian drift over all fundamental-system
// propagations since the last reset.  Used by the conservation checks.
double wronskian_drift_high_water();
void reset_wronskian_drift_high_water();

// Integrates the fundamental system from init.x (= -S or S) across the
// interval, applying the transfer jump exactly at x = 0 (M left-to-right,
// M^-1 right-to-left).  The trajectory holds states at both endpoints, at
// 0- and 0+, and at all requested sample points.  Fourth-order fixed-step
// integration; the step count per side is problem.steps_per_side, raised
// automatically for large |lambda|.
Trajectory propagate(const Problem& problem, const StateMatrix& init, Complex lambda,
                     Direction direction, std::span<const double> sample_points = {});

// Solution with terminal data v(S) = sin(beta), v'(S) = cos(beta),
// propagated right-to-left.  Column 0 is v; column 1 is a companion
// solution that makes the Wronskian check possible.
Trajectory v_solution(const Problem& problem, double beta, Complex lambda,
                      std::span<const double> sample_points = {});

// Single-column fast paths (no fundamental matrix, no determinant).
struct EndpointValues {
    SolutionState terminal;                  // at the far end of the sweep
    SolutionState zero_minus, zero_plus;     // either side of the jump
};

EndpointValues propagate_single(const Problem& problem, SolutionState init,
                                Complex lambda, Direction direction);

// v and v' at x = -S (plus jump states) for terminal angle beta.
EndpointValues v_endpoint(const Problem& problem, double beta, Complex lambda);

// w_alpha as a single column (value/derivative samples on the integration
// grid, left to right), for quadrature of the norming integral.
struct SampledSolution {
    std::vector<double> xs;      // integration nodes, ascending, 0 duplicated
    std::vector<Complex> values;
    std::vector<Complex> derivatives;
};

SampledSolution w_alpha_sampled(const Problem& problem, double alpha, Complex lambda);

// Number of integration steps per half-interval used at this lambda.
int effective_steps_per_side(const Problem& problem, Complex lambda);

}  // namespace sltc
