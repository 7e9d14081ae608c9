#include "sltc/propagate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>

#include "sltc/numerics.hpp"

namespace sltc {

namespace {

std::atomic<double> g_drift_high_water{0.0};

void bump_high_water(double drift) {
    double cur = g_drift_high_water.load(std::memory_order_relaxed);
    while (drift > cur &&
           !g_drift_high_water.compare_exchange_weak(cur, drift, std::memory_order_relaxed)) {
    }
}

template <int NC>
struct ColumnSet {
    SolutionState c[NC];
};

// One classical fourth-order step for y'' = (q(x) - lambda) y, sharing the
// midpoint potential evaluation between the two interior stages.
template <int NC>
inline void rk4_step(const Problem& p, Complex lambda, double x, double h, ColumnSet<NC>& s) {
    const Complex w0 = p.q_at(x) - lambda;
    const Complex wm = p.q_at(x + 0.5 * h) - lambda;
    const Complex w1 = p.q_at(x + h) - lambda;
    for (int j = 0; j < NC; ++j) {
        const Complex y = s.c[j].y;
        const Complex dy = s.c[j].dy;
        const Complex k1y = dy;
        const Complex k1d = w0 * y;
        const Complex k2y = dy + 0.5 * h * k1d;
        const Complex k2d = wm * (y + 0.5 * h * k1y);
        const Complex k3y = dy + 0.5 * h * k2d;
        const Complex k3d = wm * (y + 0.5 * h * k2y);
        const Complex k4y = dy + h * k3d;
        const Complex k4d = w1 * (y + h * k3y);
        s.c[j].y = y + (h / 6.0) * (k1y + 2.0 * (k2y + k3y) + k4y);
        s.c[j].dy = dy + (h / 6.0) * (k1d + 2.0 * (k2d + k3d) + k4d);
    }
}

template <int NC>
bool finite(const ColumnSet<NC>& s) {
    for (int j = 0; j < NC; ++j) {
        if (!std::isfinite(s.c[j].y.real()) || !std::isfinite(s.c[j].y.imag()) ||
            !std::isfinite(s.c[j].dy.real()) || !std::isfinite(s.c[j].dy.imag())) {
            return false;
        }
    }
    return true;
}

[[noreturn]] void throw_overflow(Complex lambda) {
    std::ostringstream os;
    os << "propagation overflow at lambda = (" << lambda.real() << ", " << lambda.imag() << ")";
    throw NumericError(os.str());
}

struct SideNode {
    double x;
    bool record;
};

// Integration nodes for one half-interval, travelling from xa to xb:
// nsteps uniform steps plus any requested record points merged in.
std::vector<SideNode> side_nodes(double xa, double xb, int nsteps,
                                 std::span<const double> record_pts, double merge_tol) {
    std::vector<SideNode> nodes;
    nodes.reserve(static_cast<std::size_t>(nsteps) + record_pts.size() + 1);
    const double h = (xb - xa) / nsteps;
    for (int i = 0; i <= nsteps; ++i) {
        nodes.push_back({i == nsteps ? xb : xa + i * h, false});
    }
    const bool forward = xb > xa;
    for (double r : record_pts) {
        const double lo = std::min(xa, xb);
        const double hi = std::max(xa, xb);
        if (r < lo - merge_tol || r > hi + merge_tol) continue;
        // locate the nearest uniform node
        double pos = (r - xa) / h;
        auto idx = static_cast<std::size_t>(std::clamp(std::round(pos), 0.0, double(nsteps)));
        if (std::abs(nodes[idx].x - r) <= merge_tol) {
            nodes[idx].record = true;
        } else {
            nodes.push_back({r, true});
        }
    }
    std::sort(nodes.begin(), nodes.end(), [forward](const SideNode& a, const SideNode& b) {
        return forward ? a.x < b.x : a.x > b.x;
    });
    return nodes;
}

template <int NC>
void sweep_side(const Problem& p, Complex lambda, std::span<const SideNode> nodes,
                ColumnSet<NC>& s, const std::function<void(double, const ColumnSet<NC>&)>& on_record) {
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const double x = nodes[i].x;
        const double h = nodes[i + 1].x - x;
        if (h != 0.0) rk4_step(p, lambda, x, h, s);
        if (nodes[i + 1].record) {
            if (!finite(s)) throw_overflow(lambda);
            on_record(nodes[i + 1].x, s);
        }
        if ((i & 255u) == 255u && !finite(s)) throw_overflow(lambda);
    }
    if (!finite(s)) throw_overflow(lambda);
}

void require_zero_node(const Problem& p) {
    if (!p.grid_contains_zero()) {
        throw ConfigError(
            "potential grid must contain x = 0 as a node (use an odd sample count)");
    }
}

}  // namespace

Complex StateMatrix::det() const {
    return compensated_det2(col[0].y, col[1].y, col[0].dy, col[1].dy);
}

StateMatrix StateMatrix::boundary_matrix(double alpha, double x) {
    StateMatrix m;
    m.x = x;
    m.col[0] = {std::cos(alpha), -std::sin(alpha)};
    m.col[1] = {std::sin(alpha), std::cos(alpha)};
    return m;
}

const StateMatrix& Trajectory::at_zero_minus() const {
    for (const auto& s : states) {
        if (s.side == -1) return s;
    }
    throw Error("trajectory holds no state at 0-");
}

const StateMatrix& Trajectory::at_zero_plus() const {
    for (const auto& s : states) {
        if (s.side == +1) return s;
    }
    throw Error("trajectory holds no state at 0+");
}

double wronskian_drift_high_water() { return g_drift_high_water.load(); }
void reset_wronskian_drift_high_water() { g_drift_high_water.store(0.0); }

int effective_steps_per_side(const Problem& problem, Complex lambda) {
    const double zs = std::abs(zeta_from_lambda(lambda)) * problem.half_width();
    int n = std::max(2, problem.steps_per_side);
    if (zs > 1.0) {
        const double need = 60.0 * std::pow(zs, 1.2);
        if (need > n) n = static_cast<int>(std::min(need, 1.0e6)) + 1;
    }
    if (n % 2) ++n;
    return n;
}

Trajectory propagate(const Problem& problem, const StateMatrix& init, Complex lambda,
                     Direction direction, std::span<const double> sample_points) {
    require_zero_node(problem);
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag())) {
        throw ConfigError("lambda must be finite");
    }
    const double S = problem.half_width();
    const double tol = 1e-9 * S;
    const bool forward = direction == Direction::LeftToRight;
    const double x_start = forward ? -S : S;
    if (std::abs(init.x - x_start) > tol) {
        throw ConfigError("initial state must sit at the sweep's starting endpoint");
    }

    ColumnSet<2> s{{init.col[0], init.col[1]}};
    const Complex det0 = compensated_det2(s.c[0].y, s.c[1].y, s.c[0].dy, s.c[1].dy);
    if (std::abs(det0) < 1e-300) throw ConfigError("initial state matrix is singular");

    std::vector<double> rec(sample_points.begin(), sample_points.end());
    // the origin (0-/0+ pair) and both endpoints are always recorded
    std::erase_if(rec, [tol, S](double r) {
        return std::abs(r) <= tol || std::abs(std::abs(r) - S) <= tol;
    });
    std::sort(rec.begin(), rec.end());
    if (!forward) std::reverse(rec.begin(), rec.end());

    const int nsteps = effective_steps_per_side(problem, lambda);
    Trajectory out;
    out.states.reserve(rec.size() + 4);

    double drift = 0.0;
    auto record = [&](double x, const ColumnSet<2>& cs, int side) {
        StateMatrix m;
        m.x = x;
        m.side = side;
        m.col[0] = cs.c[0];
        m.col[1] = cs.c[1];
        drift = std::max(drift, std::abs(m.det() - det0) / std::abs(det0));
        out.states.push_back(m);
    };

    record(x_start, s, 0);
    auto on_record = [&](double x, const ColumnSet<2>& cs) { record(x, cs, 0); };

    const double first_end = 0.0;
    const auto nodes1 = side_nodes(x_start, first_end, nsteps, rec, tol);
    sweep_side<2>(problem, lambda, nodes1, s, on_record);
    // transfer jump at the origin
    if (forward) {
        record(0.0, s, -1);
        problem.transfer().apply(s.c[0].y, s.c[0].dy);
        problem.transfer().apply(s.c[1].y, s.c[1].dy);
        record(0.0, s, +1);
    } else {
        record(0.0, s, +1);
        problem.transfer().apply_inverse(s.c[0].y, s.c[0].dy);
        problem.transfer().apply_inverse(s.c[1].y, s.c[1].dy);
        record(0.0, s, -1);
    }
    const double x_end = forward ? S : -S;
    const auto nodes2 = side_nodes(0.0, x_end, nsteps, rec, tol);
    sweep_side<2>(problem, lambda, nodes2, s, on_record);
    record(x_end, s, 0);

    out.wronskian_drift = drift;
    bump_high_water(drift);
    return out;
}

Trajectory v_solution(const Problem& problem, double beta, Complex lambda,
                      std::span<const double> sample_points) {
    if (!(beta > 0.0 && beta <= M_PI)) throw ConfigError("beta must lie in (0, pi]");
    StateMatrix init;
    init.x = problem.half_width();
    init.col[0] = {std::sin(beta), std::cos(beta)};
    init.col[1] = {-std::cos(beta), std::sin(beta)};  // companion, det = 1
    return propagate(problem, init, lambda, Direction::RightToLeft, sample_points);
}

EndpointValues propagate_single(const Problem& problem, SolutionState init,
                                Complex lambda, Direction direction) {
    require_zero_node(problem);
    const double S = problem.half_width();
    const bool forward = direction == Direction::LeftToRight;
    const int nsteps = effective_steps_per_side(problem, lambda);
    ColumnSet<1> s{{init}};
    EndpointValues out;
    const double x_start = forward ? -S : S;
    auto no_record = [](double, const ColumnSet<1>&) {};
    const auto nodes1 = side_nodes(x_start, 0.0, nsteps, {}, 1e-9 * S);
    sweep_side<1>(problem, lambda, nodes1, s, no_record);
    if (forward) {
        out.zero_minus = s.c[0];
        problem.transfer().apply(s.c[0].y, s.c[0].dy);
        out.zero_plus = s.c[0];
    } else {
        out.zero_plus = s.c[0];
        problem.transfer().apply_inverse(s.c[0].y, s.c[0].dy);
        out.zero_minus = s.c[0];
    }
    const auto nodes2 = side_nodes(0.0, forward ? S : -S, nsteps, {}, 1e-9 * S);
    sweep_side<1>(problem, lambda, nodes2, s, no_record);
    out.terminal = s.c[0];
    return out;
}

EndpointValues v_endpoint(const Problem& problem, double beta, Complex lambda) {
    return propagate_single(problem, {std::sin(beta), std::cos(beta)}, lambda,
                            Direction::RightToLeft);
}

SampledSolution w_alpha_sampled(const Problem& problem, double alpha, Complex lambda) {
    require_zero_node(problem);
    const double S = problem.half_width();
    const int nsteps = effective_steps_per_side(problem, lambda);
    ColumnSet<1> s{{{std::sin(alpha), std::cos(alpha)}}};

    SampledSolution out;
    out.xs.reserve(2 * static_cast<std::size_t>(nsteps) + 2);
    auto push = [&](double x, const ColumnSet<1>& cs) {
        out.xs.push_back(x);
        out.values.push_back(cs.c[0].y);
        out.derivatives.push_back(cs.c[0].dy);
    };
    push(-S, s);
    const double h = S / nsteps;
    for (int i = 1; i <= nsteps; ++i) {
        const double x = -S + (i - 1) * h;
        rk4_step<1>(problem, lambda, x, (i == nsteps ? 0.0 - x : h), s);
        push(i == nsteps ? 0.0 : x + h, s);
    }
    if (!finite(s)) throw_overflow(lambda);
    problem.transfer().apply(s.c[0].y, s.c[0].dy);
    push(0.0, s);
    for (int i = 1; i <= nsteps; ++i) {
        const double x = (i - 1) * h;
        rk4_step<1>(problem, lambda, x, (i == nsteps ? S - x : h), s);
        push(i == nsteps ? S : x + h, s);
    }
    if (!finite(s)) throw_overflow(lambda);
    return out;
}

}  // namespace sltc
