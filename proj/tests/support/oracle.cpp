#include "oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace oracle {

namespace {

// Exact free propagator over a distance d: [y; dy] evolves with
// y(x+d) = y cos(z d) + dy sin(z d)/z.
State free_step(const State& s, Complex z, double d) {
    const Complex zd = z * d;
    Complex c = std::cos(zd);
    Complex snc;  // sin(z d)/z, stable at z -> 0
    if (std::abs(zd) < 1e-8) {
        snc = d * (1.0 - zd * zd / 6.0);
    } else {
        snc = std::sin(zd) / z;
    }
    return {s.y * c + s.dy * snc, -s.y * z * std::sin(zd) + s.dy * c};
}

State apply(const sltc::TransferMatrix& M, const State& s) {
    return {M.m11 * s.y + M.m12 * s.dy, M.m21 * s.y + M.m22 * s.dy};
}

State apply_inverse(const sltc::TransferMatrix& M, const State& s) {
    return {M.m22 * s.y - M.m12 * s.dy, -M.m21 * s.y + M.m11 * s.dy};
}

Complex sqrt_of(double lambda) {
    Complex z = std::sqrt(Complex{lambda, 0.0});
    if (z.imag() < 0.0) z = -z;
    return z;
}

}  // namespace

State v_at_left_exact(double S, const sltc::TransferMatrix& M, double beta, Complex lambda) {
    Complex z = std::sqrt(lambda);
    if (z.imag() < 0.0) z = -z;
    State s{std::sin(beta), std::cos(beta)};
    s = free_step(s, z, -S);  // S -> 0+
    s = apply_inverse(M, s);
    s = free_step(s, z, -S);  // 0- -> -S
    return s;
}

double delta_exact(double S, const sltc::TransferMatrix& M, double alpha, double beta,
                   double lambda) {
    const State s = v_at_left_exact(S, M, beta, Complex{lambda, 0.0});
    return (s.dy * std::sin(alpha) - s.y * std::cos(alpha)).real();
}

State w_alpha_exact(double S, const sltc::TransferMatrix& M, double alpha, double x,
                    double lambda) {
    const Complex z = sqrt_of(lambda);
    State s{std::sin(alpha), std::cos(alpha)};
    if (x <= 0.0) {
        return free_step(s, z, x + S);
    }
    s = free_step(s, z, S);  // -S -> 0-
    s = apply(M, s);
    return free_step(s, z, x);
}

double bisect(const std::function<double(double)>& f, double a, double b) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw std::runtime_error("oracle bisect: no bracket");
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (fa * fm < 0.0) {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
        if (b - a < 1e-14 * std::max(1.0, std::abs(a))) break;
    }
    return 0.5 * (a + b);
}

std::vector<double> eigenvalues_exact(double S, const sltc::TransferMatrix& M, double alpha,
                                      double beta, int n) {
    auto f = [&](double l) { return delta_exact(S, M, alpha, beta, l); };
    std::vector<double> roots;
    // dense scan, fine enough for close pairs at desk scale
    const double lo = -40.0;
    double prev_x = lo;
    double prev_f = f(lo);
    const double base = M_PI / (2.0 * S);
    double x = lo;
    while (static_cast<int>(roots.size()) < n) {
        const double s = std::sqrt(std::max(x, 1.0));
        const double step = std::min(0.02 * s * base, 0.45);
        x += step;
        const double fx = f(x);
        if (prev_f == 0.0) {
            roots.push_back(prev_x);
        } else if (prev_f * fx < 0.0) {
            roots.push_back(bisect(f, prev_x, x));
        }
        prev_x = x;
        prev_f = fx;
        if (x > 1e7) throw std::runtime_error("oracle eigenvalue scan ran away");
    }
    roots.resize(static_cast<std::size_t>(n));
    for (double& r : roots) {
        if (std::abs(r) < 1e-10) r = 0.0;
    }
    return roots;
}

double norming_exact(double S, const sltc::TransferMatrix& M, double alpha, double lambda_n) {
    auto integrate = [&](int n_per_side) {
        auto simpson = [&](double a, double b) {
            const double h = (b - a) / n_per_side;
            double acc = 0.0;
            for (int i = 0; i < n_per_side; i += 2) {
                auto w2 = [&](double x) {
                    const State s = w_alpha_exact(S, M, alpha, x, lambda_n);
                    return (s.y * s.y).real();
                };
                acc += (h / 3.0) * (w2(a + i * h) + 4.0 * w2(a + (i + 1) * h) +
                                    w2(a + (i + 2) * h));
            }
            return acc;
        };
        return simpson(-S, 0.0) + simpson(0.0, S);
    };
    const double coarse = integrate(512);
    const double fine = integrate(1024);
    // Richardson on the h^4 Simpson error
    return fine + (fine - coarse) / 15.0;
}

State integrate_reference(const std::function<double(double)>& q, double S,
                          const sltc::TransferMatrix& M, State s, bool left_to_right,
                          Complex lambda, int steps_per_side) {
    auto sweep = [&](State st, double xa, double xb) {
        const int n = steps_per_side;
        const double h = (xb - xa) / n;
        for (int i = 0; i < n; ++i) {
            const double x = xa + i * h;
            const Complex w0 = q(x) - lambda;
            const Complex wm = q(x + 0.5 * h) - lambda;
            const Complex w1 = q(x + h) - lambda;
            const Complex k1y = st.dy, k1d = w0 * st.y;
            const Complex k2y = st.dy + 0.5 * h * k1d, k2d = wm * (st.y + 0.5 * h * k1y);
            const Complex k3y = st.dy + 0.5 * h * k2d, k3d = wm * (st.y + 0.5 * h * k2y);
            const Complex k4y = st.dy + h * k3d, k4d = w1 * (st.y + h * k3y);
            st.y += (h / 6.0) * (k1y + 2.0 * (k2y + k3y) + k4y);
            st.dy += (h / 6.0) * (k1d + 2.0 * (k2d + k3d) + k4d);
        }
        return st;
    };
    if (left_to_right) {
        s = sweep(s, -S, 0.0);
        s = apply(M, s);
        return sweep(s, 0.0, S);
    }
    s = sweep(s, S, 0.0);
    s = apply_inverse(M, s);
    return sweep(s, 0.0, -S);
}

}  // namespace oracle
