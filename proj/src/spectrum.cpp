#include "sltc/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sltc/asymptotics.hpp"
#include "sltc/numerics.hpp"

namespace sltc {

namespace {

std::string fmt_lambda(Complex lambda) {
    std::ostringstream os;
    if (lambda.imag() == 0.0) {
        os << lambda.real();
    } else {
        os << "(" << lambda.real() << ", " << lambda.imag() << ")";
    }
    return os.str();
}

}  // namespace

CharacteristicPair characteristic_pair(const Problem& problem, const BoundaryAngles& angles,
                                       Complex lambda) {
    const EndpointValues ep = v_endpoint(problem, angles.beta, lambda);
    const double sa = std::sin(angles.alpha);
    const double ca = std::cos(angles.alpha);
    CharacteristicPair pair;
    pair.delta = ep.terminal.dy * sa - ep.terminal.y * ca;
    pair.rotated = ep.terminal.y * sa + ep.terminal.dy * ca;
    return pair;
}

Complex characteristic(const Problem& problem, const BoundaryAngles& angles, Complex lambda) {
    return characteristic_pair(problem, angles, lambda).delta;
}

double eigenvalue_spacing_estimate(double lambda, double half_width) {
    const double base = M_PI / (2.0 * half_width);
    return std::max(2.0 * std::sqrt(std::max(lambda, 0.0)) * base, base * base);
}

double characteristic_derivative(const Problem& problem, const BoundaryAngles& angles,
                                 double lambda) {
    const double h = 1e-4 * eigenvalue_spacing_estimate(lambda, problem.half_width());
    const double f2p = characteristic(problem, angles, lambda + 2.0 * h).real();
    const double f1p = characteristic(problem, angles, lambda + h).real();
    const double f1m = characteristic(problem, angles, lambda - h).real();
    const double f2m = characteristic(problem, angles, lambda - 2.0 * h).real();
    return (-f2p + 8.0 * f1p - 8.0 * f1m + f2m) / (12.0 * h);
}

Complex weyl_m(const Problem& problem, const BoundaryAngles& angles, Complex lambda,
               double pole_tolerance) {
    const CharacteristicPair pair = characteristic_pair(problem, angles, lambda);
    const double S = problem.half_width();
    if (std::abs(lambda.imag()) <=
        pole_tolerance * eigenvalue_spacing_estimate(lambda.real(), S)) {
        const double spacing = eigenvalue_spacing_estimate(lambda.real(), S);
        // Cheap screen first: |Delta'| is of order |rotated| * a_n near a pole.
        if (std::abs(pair.delta) < 1e-4 * (std::abs(pair.rotated) + 1.0) * std::max(S, 1.0) *
                                       std::max(spacing, 1.0)) {
            const double dd = characteristic_derivative(problem, angles, lambda.real());
            if (dd != 0.0) {
                const double ratio = std::abs(pair.delta) / (std::abs(dd) * spacing);
                if (ratio < pole_tolerance) {
                    const double nearest = lambda.real() - pair.delta.real() / dd;
                    throw PoleError("m-function evaluated within pole tolerance of the "
                                    "eigenvalue near lambda = " +
                                        fmt_lambda(nearest),
                                    nearest);
                }
            }
        }
    }
    return pair.rotated / pair.delta;
}

double weyl_m_residue(const Problem& problem, const BoundaryAngles& angles, double lambda_n) {
    const double scale = std::max(1.0, std::abs(lambda_n));
    const double offsets[4] = {1e-5 * scale, -1e-5 * scale, 1e-6 * scale, -1e-6 * scale};
    double acc = 0.0;
    for (double eps : offsets) {
        acc += (weyl_m(problem, angles, lambda_n + eps) * eps).real();
    }
    return acc / 4.0;
}

namespace {

void add_root(std::vector<double>& roots, double r) {
    const double tol = 1e-7 * std::max(1.0, std::abs(r));
    for (double existing : roots) {
        if (std::abs(existing - r) < tol) return;
    }
    roots.push_back(r);
}

// Lower spectral bound: descend until the characteristic function agrees
// with its asymptotic leading form (sign and ratio), which rules out
// further sign changes below.
double validated_floor(const std::function<double(double)>& delta, double half_width,
                       const TransferMatrix& M, const BoundaryAngles& angles, double q_max_abs) {
    double floor_lambda = -4.0 * (1.0 + q_max_abs);
    const double min_mag = std::pow(10.0 / (2.0 * half_width), 2.0);
    floor_lambda = std::min(floor_lambda, -min_mag);
    for (int attempt = 0; attempt < 6; ++attempt) {
        const double check = 9.0 * floor_lambda;
        const double exact = delta(check);
        const Complex lead = delta_leading(half_width, M, angles, Complex{check, 0.0});
        const double ratio = exact / lead.real();
        if (ratio > 0.4 && ratio < 2.5) return floor_lambda;
        floor_lambda *= 4.0;
    }
    throw NumericError("could not validate a lower spectral bound against the asymptotic form");
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
    return g;
}

double callable_derivative(const std::function<double(double)>& f, double lambda,
                           double half_width) {
    const double h = 1e-4 * eigenvalue_spacing_estimate(lambda, half_width);
    return (-f(lambda + 2.0 * h) + 8.0 * f(lambda + h) - 8.0 * f(lambda - h) +
            f(lambda - 2.0 * h)) /
           (12.0 * h);
}

}  // namespace

double norming_constant(const Problem& problem, const BoundaryAngles& angles, double lambda_n) {
    // eigenvalue check
    const Complex delta = characteristic(problem, angles, Complex{lambda_n, 0.0});
    const double dd = characteristic_derivative(problem, angles, lambda_n);
    const double spacing = eigenvalue_spacing_estimate(lambda_n, problem.half_width());
    if (!(std::abs(delta) <= 1e-6 * std::abs(dd) * spacing)) {
        throw PreconditionError("norming_constant: lambda is not an eigenvalue (|Delta| too "
                                "large at lambda = " +
                                fmt_lambda(Complex{lambda_n, 0.0}) + ")");
    }

    const SampledSolution w = w_alpha_sampled(problem, angles.alpha, Complex{lambda_n, 0.0});
    // Composite Simpson per side; each side has an even interval count and
    // the grid is split exactly at x = 0.
    const std::size_t n_side = w.xs.size() / 2 - 1;  // intervals per side
    auto simpson_side = [&](std::size_t offset) {
        const double h = problem.half_width() / static_cast<double>(n_side);
        double acc = 0.0;
        for (std::size_t i = 0; i + 2 <= n_side; i += 2) {
            const Complex f0 = w.values[offset + i] * w.values[offset + i];
            const Complex f1 = w.values[offset + i + 1] * w.values[offset + i + 1];
            const Complex f2 = w.values[offset + i + 2] * w.values[offset + i + 2];
            acc += (h / 3.0) * (f0 + 4.0 * f1 + f2).real();
        }
        return acc;
    };
    const double a_n = simpson_side(0) + simpson_side(w.xs.size() / 2);
    if (!(a_n > 0.0)) throw NumericError("norming constant came out non-positive");
    return a_n;
}

std::vector<double> scan_characteristic_roots(const std::function<double(double)>& delta,
                                              double half_width, const TransferMatrix& M,
                                              const BoundaryAngles& angles, int n_max,
                                              double q_max_abs, const SpectrumOptions& options) {
    if (n_max < 1) throw ConfigError("n_max must be at least 1");
    const double S = half_width;
    const auto pattern = leading_zero_pattern(M, angles);
    auto lambda_of_u = [S](double u) {
        const double s = u / S;
        return s * s;
    };
    auto polish = [&](double a, double b) {
        const double scale = std::max(1.0, std::max(std::abs(a), std::abs(b)));
        return refine_root(delta, a, b, scale);
    };

    const double u_step = (M_PI / 2.0) / options.points_per_gap;
    double u_max = (n_max + 6) * (M_PI / 2.0);

    std::vector<double> roots;
    const double floor_lambda = validated_floor(delta, S, M, angles, q_max_abs);

    bool count_validated = false;
    for (int round = 0; round < 3; ++round) {
        roots.clear();
        const int density = 1 << round;  // rescan denser if eigenvalues are missing

        // negative lambda and the region around zero
        {
            const double top = lambda_of_u(2.0 * u_step);
            const int npts =
                std::max(96, static_cast<int>((top - floor_lambda) / 0.05)) * density;
            const auto grid = linspace(floor_lambda, top, npts);
            for (auto [a, b] : scan_sign_changes(delta, grid)) {
                add_root(roots, a == b ? a : polish(a, b));
            }
        }

        // positive lambda, scanned uniformly in u = sqrt(lambda) * S
        {
            const int npts = static_cast<int>(u_max / u_step) * density + 2;
            std::vector<double> grid(static_cast<std::size_t>(npts));
            for (int i = 0; i < npts; ++i) {
                grid[static_cast<std::size_t>(i)] = lambda_of_u(u_step / density * (i + 1));
            }
            for (auto [a, b] : scan_sign_changes(delta, grid)) {
                add_root(roots, a == b ? a : polish(a, b));
            }
        }

        // refined windows around double zeros of the leading form, where the
        // true eigenvalues sit as close pairs
        for (const auto& center : pattern.centers) {
            if (center.multiplicity < 2) continue;
            for (double uc = center.u_mod_pi == 0.0 ? M_PI : center.u_mod_pi; uc < u_max + M_PI;
                 uc += M_PI) {
                const double lo =
                    std::max(lambda_of_u(std::max(uc - 2.5 * u_step, 0.0)), floor_lambda);
                const double hi = lambda_of_u(uc + 2.5 * u_step);
                int found_here = 0;
                for (double r : roots) {
                    if (r >= lo && r <= hi) ++found_here;
                }
                if (found_here >= 2) continue;
                const auto grid = linspace(lo, hi, 64 * density);
                for (auto [a, b] : scan_sign_changes(delta, grid)) {
                    add_root(roots, a == b ? a : polish(a, b));
                }
                // magnitude-dip diagnostic where the leading form predicts a
                // double zero but no sign change shows up
                if (found_here == 0) {
                    double best = 0.0;
                    double best_mag = 1e300;
                    for (double l : grid) {
                        const double mag = std::abs(delta(l));
                        if (mag < best_mag) {
                            best_mag = mag;
                            best = l;
                        }
                    }
                    int found_now = 0;
                    for (double r : roots) {
                        if (r >= lo && r <= hi) ++found_now;
                    }
                    const double dd = std::abs(callable_derivative(delta, best, S));
                    const double spacing = eigenvalue_spacing_estimate(best, S);
                    if (found_now == 0 && best_mag < 1e-10 * dd * spacing) {
                        throw NumericError("eigenvalue simplicity violated near lambda = " +
                                           fmt_lambda(Complex{best, 0.0}));
                    }
                }
            }
        }

        std::sort(roots.begin(), roots.end());

        if (static_cast<int>(roots.size()) < n_max) {
            u_max *= 1.5;
            continue;
        }

        // count validation against the asymptotic zero density
        const double lambda_top = roots[static_cast<std::size_t>(n_max - 1)];
        if (lambda_top > 0.0) {
            const int expected = pattern.count_below(std::sqrt(lambda_top) * S + 1e-9);
            int found_positive = 0;
            for (double r : roots) {
                if (r > 1e-12 && r <= lambda_top * (1.0 + 1e-12)) ++found_positive;
            }
            if (std::abs(found_positive - expected) > 2) continue;  // rescan denser
        }
        count_validated = true;
        break;
    }

    if (static_cast<int>(roots.size()) < n_max || !count_validated) {
        throw NumericError("eigenvalue search disagrees with the asymptotic zero count; "
                           "roots are likely missing");
    }

    roots.resize(static_cast<std::size_t>(n_max));
    for (double& r : roots) {
        if (std::abs(r) < 1e-8) r = 0.0;  // snap numerical zero eigenvalue
    }
    return roots;
}

SpectralDataset compute_spectrum(const Problem& problem, const BoundaryAngles& angles, int n_max,
                                 const SpectrumOptions& options) {
    auto delta = [&](double lambda) {
        return characteristic(problem, angles, Complex{lambda, 0.0}).real();
    };
    std::vector<double> roots = scan_characteristic_roots(
        delta, problem.half_width(), problem.transfer(), angles, n_max, problem.q_max_abs(),
        options);

    SpectralDataset out{problem, angles, std::move(roots), std::nullopt};
    if (options.with_norming) {
        std::vector<double> a;
        a.reserve(out.eigenvalues.size());
        for (double l : out.eigenvalues) a.push_back(norming_constant(problem, angles, l));
        out.norming_constants = std::move(a);
    }
    return out;
}

}  // namespace sltc
