#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "sltc/types.hpp"

namespace sltc {

// Pairwise (fixed-tree) summation; deterministic regardless of threading.
double pairwise_sum(std::span<const double> terms);
Complex pairwise_sum(std::span<const Complex> terms);

// Compensated 2x2 determinant a*d - b*c for complex entries.  Accurate to a
// few ulp of the true determinant even when a*d and b*c nearly cancel.
Complex compensated_det2(Complex a, Complex b, Complex c, Complex d);

// trigamma(x) = sum_{j>=0} 1/(x+j)^2, for x > 0.
double trigamma(double x);

// FNV-1a 64-bit hash, printed as 16 hex digits.  Stable across runs and
// platforms; used to fingerprint resolved configurations in output files.
std::uint64_t fnv1a64(std::string_view data);
std::string fnv1a64_hex(std::string_view data);

// Evaluates fn(i) for i in [0, n) on a small thread pool.  Each index owns
// its output slot, so results are bit-identical to the serial order.
void parallel_for_index(std::size_t n, const std::function<void(std::size_t)>& fn);

struct RootOptions {
    int bisect_iterations = 80;
    int newton_polish = 2;
    double derivative_step = 1e-6;  // relative to the local root spacing
};

// Bisection on a bracketing interval [a, b] with f(a)*f(b) <= 0, followed by
// a few Newton corrections using a central-difference derivative.  `scale`
// sets the absolute convergence target.
double refine_root(const std::function<double(double)>& f, double a, double b,
                   double scale, const RootOptions& opts = {});

// All sign-change brackets of f sampled on the strictly increasing grid.
std::vector<std::pair<double, double>> scan_sign_changes(
    const std::function<double(double)>& f, std::span<const double> grid);

}  // namespace sltc
