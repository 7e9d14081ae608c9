#include "sltc/problem.hpp"

#include <algorithm>
#include <cmath>

namespace sltc {

TransferMatrix::TransferMatrix(double a11, double a12, double a21, double a22)
    : m11(a11), m12(a12), m21(a21), m22(a22) {
    const double d = det();
    if (!(d > 0.0) || !std::isfinite(d)) {
        throw ConfigError("transfer matrix must have positive determinant");
    }
    const double scale = 1.0 / std::sqrt(d);
    m11 *= scale;
    m12 *= scale;
    m21 *= scale;
    m22 *= scale;
    if (m12 == 0.0 && std::abs(m11 + m22) < 1e-14) {
        throw ConfigError("transfer matrix degenerate: m12 = 0 and m11 + m22 = 0");
    }
}

bool TransferMatrix::is_identity() const {
    return m11 == 1.0 && m12 == 0.0 && m21 == 0.0 && m22 == 1.0;
}

void TransferMatrix::apply(Complex& y, Complex& dy) const {
    const Complex ny = m11 * y + m12 * dy;
    const Complex ndy = m21 * y + m22 * dy;
    y = ny;
    dy = ndy;
}

void TransferMatrix::apply_inverse(Complex& y, Complex& dy) const {
    // det M = 1, so M^-1 = [m22, -m12; -m21, m11]
    const Complex ny = m22 * y - m12 * dy;
    const Complex ndy = -m21 * y + m11 * dy;
    y = ny;
    dy = ndy;
}

Problem::Problem(double half_width, std::vector<double> q_samples, TransferMatrix transfer)
    : S_(half_width), q_(std::move(q_samples)), M_(transfer) {
    if (!(S_ > 0.0) || !std::isfinite(S_)) throw ConfigError("half width S must be positive");
    if (q_.size() < 2) throw ConfigError("potential needs at least 2 samples");
    for (double v : q_) {
        if (!std::isfinite(v)) throw ConfigError("potential samples must be finite");
        q_max_abs_ = std::max(q_max_abs_, std::abs(v));
    }
    dx_ = 2.0 * S_ / static_cast<double>(q_.size() - 1);
}

Problem Problem::free_problem(double half_width, TransferMatrix transfer) {
    return Problem(half_width, {0.0, 0.0, 0.0}, transfer);
}

double Problem::q_at(double x) const {
    if (q_max_abs_ == 0.0) return 0.0;
    const double clamped = std::clamp(x, -S_, S_);
    const auto n = q_.size();
    double pos = (clamped + S_) / dx_;
    auto i = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, double(n - 2)));
    const double t = pos - static_cast<double>(i);
    const double q0 = q_[i];
    const double q1 = q_[i + 1];
    // Catmull-Rom slopes, one-sided at the ends
    const double s0 = (i == 0) ? (q_[1] - q_[0]) : 0.5 * (q_[i + 1] - q_[i - 1]);
    const double s1 = (i + 2 >= n) ? (q_[n - 1] - q_[n - 2]) : 0.5 * (q_[i + 2] - q_[i]);
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * q0 + (t3 - 2 * t2 + t) * s0 + (-2 * t3 + 3 * t2) * q1 +
           (t3 - t2) * s1;
}

}  // namespace sltc
