#include "sltc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <thread>

namespace sltc {

namespace {

template <typename T>
T pairwise_sum_impl(std::span<const T> terms) {
    const std::size_t n = terms.size();
    if (n == 0) return T{};
    if (n <= 8) {
        T acc = terms[0];
        for (std::size_t i = 1; i < n; ++i) acc += terms[i];
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum_impl(terms.first(half)) + pairwise_sum_impl(terms.subspan(half));
}

// TwoProduct via fma: p + e == a * b exactly.
inline void two_product(double a, double b, double& p, double& e) {
    p = a * b;
    e = std::fma(a, b, -p);
}

// Neumaier compensated accumulation.
struct Accum {
    double s = 0.0, c = 0.0;
    void add(double v) {
        double t = s + v;
        if (std::abs(s) >= std::abs(v)) {
            c += (s - t) + v;
        } else {
            c += (v - t) + s;
        }
        s = t;
    }
    double value() const { return s + c; }
};

double det2_real4(double a, double b, double c, double d, double e, double f, double g,
                  double h) {
    // a*b + c*d - e*f - g*h, compensated
    double p, err;
    Accum acc;
    two_product(a, b, p, err);
    acc.add(p);
    acc.add(err);
    two_product(c, d, p, err);
    acc.add(p);
    acc.add(err);
    two_product(e, f, p, err);
    acc.add(-p);
    acc.add(-err);
    two_product(g, h, p, err);
    acc.add(-p);
    acc.add(-err);
    return acc.value();
}

}  // namespace

double pairwise_sum(std::span<const double> terms) { return pairwise_sum_impl(terms); }
Complex pairwise_sum(std::span<const Complex> terms) { return pairwise_sum_impl(terms); }

Complex compensated_det2(Complex a, Complex b, Complex c, Complex d) {
    // Re = ar*dr - ai*di - (br*cr - bi*ci); Im = ar*di + ai*dr - (br*ci + bi*cr)
    const double re = det2_real4(a.real(), d.real(), b.imag(), c.imag(), a.imag(), d.imag(),
                                 b.real(), c.real());
    const double im = det2_real4(a.real(), d.imag(), a.imag(), d.real(), b.real(), c.imag(),
                                 b.imag(), c.real());
    return {re, im};
}

double trigamma(double x) {
    double acc = 0.0;
    while (x < 40.0) {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // asymptotic series 1/x + 1/(2x^2) + 1/(6x^3) - 1/(30x^5) + 1/(42x^7)
    return acc + inv * (1.0 + inv * (0.5 + inv * (1.0 / 6.0 + inv2 * (-1.0 / 30.0 + inv2 / 42.0))));
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string fnv1a64_hex(std::string_view data) {
    static const char* digits = "0123456789abcdef";
    std::uint64_t h = fnv1a64(data);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

void parallel_for_index(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (n < 2 || hw < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(hw, n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::mutex error_mutex;
    std::exception_ptr first_error;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) fn(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

double refine_root(const std::function<double(double)>& f, double a, double b, double scale,
                   const RootOptions& opts) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw NumericError("refine_root: interval does not bracket a sign change");
    for (int it = 0; it < opts.bisect_iterations; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if (fm == 0.0) {
            a = b = mid;
            break;
        }
        if (fa * fm < 0.0) {
            b = mid;
            fb = fm;
        } else {
            a = mid;
            fa = fm;
        }
        if (b - a < 1e-15 * scale) break;
    }
    double root = 0.5 * (a + b);
    const double h = opts.derivative_step * scale;
    for (int it = 0; it < opts.newton_polish; ++it) {
        const double d = (f(root + h) - f(root - h)) / (2.0 * h);
        if (d == 0.0) break;
        const double next = root - f(root) / d;
        if (next < a - (b - a) || next > b + (b - a)) break;  // keep near the bracket
        root = next;
    }
    return root;
}

std::vector<std::pair<double, double>> scan_sign_changes(const std::function<double(double)>& f,
                                                         std::span<const double> grid) {
    std::vector<std::pair<double, double>> brackets;
    if (grid.size() < 2) return brackets;
    double prev = f(grid[0]);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double cur = f(grid[i]);
        if (prev == 0.0) {
            brackets.emplace_back(grid[i - 1], grid[i - 1]);
        } else if (prev * cur < 0.0) {
            brackets.emplace_back(grid[i - 1], grid[i]);
        }
        prev = cur;
    }
    if (prev == 0.0) brackets.emplace_back(grid.back(), grid.back());
    return brackets;
}

}  // namespace sltc
