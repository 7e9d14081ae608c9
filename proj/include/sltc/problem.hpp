#pragma once

#include <array>
#include <vector>

#include "sltc/types.hpp"

namespace sltc {

// Real 2x2 transfer matrix for the jump [y; y'](0+) = M [y; y'](0-).
// Normalized to det M = 1 at construction; det <= 0 is rejected.
struct TransferMatrix {
    double m11 = 1.0, m12 = 0.0, m21 = 0.0, m22 = 1.0;

    TransferMatrix() = default;
    TransferMatrix(double a11, double a12, double a21, double a22);

    double det() const { return m11 * m22 - m12 * m21; }
    double trace() const { return m11 + m22; }
    bool is_identity() const;

    // Applies M (or M^-1) to a (value, derivative) pair.
    void apply(Complex& y, Complex& dy) const;
    void apply_inverse(Complex& y, Complex& dy) const;
};

// The problem data: interval [-S, S], potential samples on a uniform grid
// over [-S, S] (piecewise-cubic interpolation), and the transfer matrix.
class Problem {
public:
    Problem(double half_width, std::vector<double> q_samples, TransferMatrix transfer);

    // Potential identically zero.
    static Problem free_problem(double half_width, TransferMatrix transfer = {});

    double half_width() const { return S_; }
    const TransferMatrix& transfer() const { return M_; }
    const std::vector<double>& q_samples() const { return q_; }
    double q_max_abs() const { return q_max_abs_; }
    bool q_is_zero() const { return q_max_abs_ == 0.0; }

    // Potential value at x (clamped to [-S, S]); Catmull-Rom cubic through
    // the samples, one-sided slopes at the ends.
    double q_at(double x) const;

    // True when x = 0 is a grid node (odd sample count).  Propagation
    // requires this so the transfer jump lands on an exact node.
    bool grid_contains_zero() const { return q_.size() % 2 == 1; }

    // Baseline integration resolution per half-interval.  The integrator
    // increases the count automatically for large |lambda| so that phase
    // accuracy and Wronskian conservation hold uniformly.
    int steps_per_side = 2000;

private:
    double S_;
    std::vector<double> q_;
    TransferMatrix M_;
    double dx_ = 0.0;
    double q_max_abs_ = 0.0;
};

}  // namespace sltc
