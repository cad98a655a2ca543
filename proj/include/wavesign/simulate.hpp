#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wavesign/kernel.hpp"
#include "wavesign/model.hpp"
#include "wavesign/numerics.hpp"

namespace wavesign {

struct Grid {
    double x_min = -150.0;
    double x_max = 150.0;
    double dx = 0.1;
    int n = 3001;

    static Grid make(double x_min, double x_max, double dx) {
        if (!(dx > 0.0) || !(x_max > x_min))
            throw std::invalid_argument("Grid: need x_max > x_min and dx > 0");
        Grid g;
        g.x_min = x_min;
        g.x_max = x_max;
        g.dx = dx;
        g.n = static_cast<int>(std::llround((x_max - x_min) / dx)) + 1;
        return g;
    }

    double x(int i) const { return x_min + i * dx; }
};

struct State {
    double t = 0.0;
    std::vector<double> u, v;
};

enum class Boundary { EquilibriumPad };

struct SimConfig {
    Grid grid;
    double dt = 1e-3;
    double t_end = 20.0 * pi;
    int record_every = 10000;
    Boundary boundary = Boundary::EquilibriumPad;
    double front_level = 0.5;
};

/// Thrown when the tracked level set is missing or not unique.
struct FrontLostError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Nonlocal difference (J*f - f) with the out-of-range samples replaced by
/// the boundary pad values. Fixed ascending tap order per output point, so
/// parallel evaluation over points is bit-identical to the sequential loop.
inline void nonlocal_diff(const std::vector<double>& f, const std::vector<double>& w,
                          double left_pad, double right_pad, std::vector<double>& out) {
    const int n = static_cast<int>(f.size());
    const int m = (static_cast<int>(w.size()) - 1) / 2;
    out.resize(f.size());
    // Reversed taps: conv_i = sum_j w_j f_{i-j} = sum_o w_{-o} f_{i+o}.
    static thread_local std::vector<double> wr;
    wr.resize(w.size());
    for (int o = -m; o <= m; ++o)
        wr[static_cast<std::size_t>(m + o)] = w[static_cast<std::size_t>(m - o)];
    const double* F = f.data();
    const double* W = wr.data();
    double* O = out.data();
    const int lo = std::min(m, n), hi = std::max(n - m, lo);
    const int taps = 2 * m + 1;
    for (int i = lo; i < hi; ++i) {
        // Four independent accumulator lanes so the reduction vectorizes;
        // the lane layout is fixed, so results do not depend on threading.
        double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
        const double* base = F + (i - m);
        int j = 0;
        for (; j + 4 <= taps; j += 4) {
            s0 += W[j] * base[j];
            s1 += W[j + 1] * base[j + 1];
            s2 += W[j + 2] * base[j + 2];
            s3 += W[j + 3] * base[j + 3];
        }
        double s = (s0 + s1) + (s2 + s3);
        for (; j < taps; ++j) s += W[j] * base[j];
        O[i] = s - F[i];
    }
    auto padded = [&](int i) { return i < 0 ? left_pad : (i >= n ? right_pad : F[i]); };
    for (int i = 0; i < lo; ++i) {
        double s = 0.0;
        for (int o = -m; o <= m; ++o) s += W[m + o] * padded(i + o);
        O[i] = s - F[i];
    }
    for (int i = hi; i < n; ++i) {
        double s = 0.0;
        for (int o = -m; o <= m; ++o) s += W[m + o] * padded(i + o);
        O[i] = s - F[i];
    }
}

/// Semidiscrete right-hand side of the competition system at state time;
/// pads are the time-periodic equilibria (0, q(t)) on the left and
/// (p(t), 0) on the right, consistent with the wave limits.
class Stepper {
public:
    Stepper(const Model& model, const Grid& grid)
        : model_(&model),
          w1_(discretize(model.params().kernel1, grid.dx)),
          w2_(discretize(model.params().kernel2, grid.dx)) {}

    void rhs(const State& s, std::vector<double>& du, std::vector<double>& dv) const {
        const Model& m = *model_;
        const double t = s.t;
        const double d1 = m.params().d1.eval(t), r1 = m.params().r1.eval(t);
        const double a1 = m.params().a1.eval(t), b1 = m.params().b1.eval(t);
        const double d2 = m.params().d2.eval(t), r2 = m.params().r2.eval(t);
        const double a2 = m.params().a2.eval(t), b2 = m.params().b2.eval(t);
        const double pt = m.p().eval(t), qt = m.q().eval(t);
        nonlocal_diff(s.u, w1_, 0.0, pt, du);
        nonlocal_diff(s.v, w2_, qt, 0.0, dv);
        const int n = static_cast<int>(s.u.size());
        const double* U = s.u.data();
        const double* V = s.v.data();
        double* DU = du.data();
        double* DV = dv.data();
        for (int i = 0; i < n; ++i) {
            DU[i] = d1 * DU[i] + U[i] * (r1 - a1 * U[i] - b1 * V[i]);
            DV[i] = d2 * DV[i] + V[i] * (r2 - a2 * U[i] - b2 * V[i]);
        }
    }

    /// One classical 4-stage step; coefficients sampled at t, t+dt/2, t+dt.
    void step(State& s, double dt) {
        const std::size_t n = s.u.size();
        ensure(n);
        State& tmp = tmp_;
        tmp.u.resize(n);
        tmp.v.resize(n);

        rhs(s, k1u_, k1v_);
        axpy(tmp, s, 0.5 * dt, k1u_, k1v_);
        tmp.t = s.t + 0.5 * dt;
        rhs(tmp, k2u_, k2v_);
        axpy(tmp, s, 0.5 * dt, k2u_, k2v_);
        tmp.t = s.t + 0.5 * dt;
        rhs(tmp, k3u_, k3v_);
        axpy(tmp, s, dt, k3u_, k3v_);
        tmp.t = s.t + dt;
        rhs(tmp, k4u_, k4v_);

        double* U = s.u.data();
        double* V = s.v.data();
        const double w = dt / 6.0;
        const int ni = static_cast<int>(n);
        for (int i = 0; i < ni; ++i) {
            U[i] += w * (k1u_[i] + 2.0 * k2u_[i] + 2.0 * k3u_[i] + k4u_[i]);
            V[i] += w * (k1v_[i] + 2.0 * k2v_[i] + 2.0 * k3v_[i] + k4v_[i]);
        }
        s.t += dt;
        if (!std::isfinite(s.u[n / 2]) || !std::isfinite(s.v[n / 2]))
            throw std::runtime_error("Stepper: non-finite state at t = " + std::to_string(s.t));
    }

private:
    void ensure(std::size_t n) {
        for (auto* v : {&k1u_, &k1v_, &k2u_, &k2v_, &k3u_, &k3v_, &k4u_, &k4v_}) v->resize(n);
    }

    static void axpy(State& out, const State& s, double a, const std::vector<double>& ku,
                     const std::vector<double>& kv) {
        const int n = static_cast<int>(s.u.size());
        const double* U = s.u.data();
        const double* V = s.v.data();
        const double* KU = ku.data();
        const double* KV = kv.data();
        double* OU = out.u.data();
        double* OV = out.v.data();
        for (int i = 0; i < n; ++i) {
            OU[i] = U[i] + a * KU[i];
            OV[i] = V[i] + a * KV[i];
        }
    }

    const Model* model_;
    std::vector<double> w1_, w2_;
    State tmp_;
    std::vector<double> k1u_, k1v_, k2u_, k2v_, k3u_, k3v_, k4u_, k4v_;
};

/// Stability guard for the explicit 4-stage scheme: the nonlocal operator has
/// spectral radius at most 2 max d, the reaction part a crude Lipschitz bound.
inline void validate_stability(const Model& m, const SimConfig& cfg) {
    double dmax = 0.0, react = 0.0;
    const int grid = 512;
    const double pmax = m.p().max_sample(), qmax = m.q().max_sample();
    for (int i = 0; i < grid; ++i) {
        const double t = i * m.period() / grid;
        dmax = std::max({dmax, m.params().d1.eval(t), m.params().d2.eval(t)});
        react = std::max(
            {react,
             m.params().r1.eval(t) + 2.0 * m.params().a1.eval(t) * pmax +
                 m.params().b1.eval(t) * qmax,
             m.params().r2.eval(t) + m.params().a2.eval(t) * pmax +
                 2.0 * m.params().b2.eval(t) * qmax});
    }
    if (cfg.dt * (2.0 * dmax + react) > 2.5)
        throw std::invalid_argument("SimConfig: dt violates the explicit stability bound");
}

/// Sigmoid initial data u = p0/(1+e^{-x}), v = q0/(1+e^{x}); connects the
/// (0, q) state on the left to the (p, 0) state on the right.
inline State default_initial(const Model& m, const Grid& grid) {
    State s;
    s.t = 0.0;
    s.u.resize(static_cast<std::size_t>(grid.n));
    s.v.resize(static_cast<std::size_t>(grid.n));
    const double p0 = m.p0(), q0 = m.q0();
    for (int i = 0; i < grid.n; ++i) {
        const double x = grid.x(i);
        s.u[static_cast<std::size_t>(i)] = p0 / (1.0 + std::exp(-x));
        s.v[static_cast<std::size_t>(i)] = q0 / (1.0 + std::exp(x));
    }
    return s;
}

/// Location where u/p(t) crosses the level, by linear interpolation; the
/// crossing must be unique (monotone front).
inline double front_position(const Model& m, const Grid& grid, const State& s, double level) {
    const double pt = m.p().eval(s.t);
    int count = 0;
    double pos = 0.0;
    const int n = static_cast<int>(s.u.size());
    double prev = s.u[0] / pt - level;
    for (int i = 1; i < n; ++i) {
        const double cur = s.u[static_cast<std::size_t>(i)] / pt - level;
        if ((prev < 0.0 && cur >= 0.0) || (prev > 0.0 && cur <= 0.0)) {
            ++count;
            pos = grid.x(i - 1) + grid.dx * (-prev) / (cur - prev);
        }
        prev = cur;
    }
    if (count != 1)
        throw FrontLostError("front_position: found " + std::to_string(count) +
                             " level crossings at t = " + std::to_string(s.t));
    return pos;
}

struct FrontTrace {
    std::vector<double> times;     // period multiples
    std::vector<double> positions; // front location X(t)
    LinearFit fit;                 // filled by measure_speed
};

struct MeasuredSpeed {
    double c = 0.0;   // wave speed, plus sign = leftward drift of X(t)
    double rms = 0.0; // fit residual
    bool reliable = true;
    int samples_used = 0;
};

/// Least-squares speed from the per-period front positions. The profile
/// argument is z = x + c t, so X(t) drifts with slope -c; samples are taken
/// at period multiples to quotient out the periodic wobble, after a burn-in
/// of five periods.
inline MeasuredSpeed measure_speed(FrontTrace& trace, double period) {
    std::vector<double> ts, xs;
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        if (trace.times[i] >= 5.0 * period - 1e-9) {
            ts.push_back(trace.times[i]);
            xs.push_back(trace.positions[i]);
        }
    }
    if (ts.size() < 10)
        throw std::invalid_argument("measure_speed: need at least 10 period samples after burn-in");
    trace.fit = least_squares(ts, xs);
    MeasuredSpeed ms;
    ms.c = -trace.fit.slope;
    ms.rms = trace.fit.rms;
    ms.samples_used = static_cast<int>(ts.size());
    ms.reliable = ms.rms <= 0.1 * std::abs(trace.fit.slope) * period;
    return ms;
}

struct RunResult {
    State final_state;
    FrontTrace trace;
    std::vector<State> period_states; // full profiles at t = 0, T, 2T, ...
    int steps_taken = 0;
    double max_u = 0.0, max_v = 0.0; // over all recorded times
};

/// Integrate to t_end recording the front at every period multiple and full
/// snapshots through the optional sink every record_every steps. t_end is
/// snapped to the nearest period multiple when it is within 1e-6 of one.
inline RunResult run(const Model& m, const SimConfig& cfg, State initial,
                     const std::function<void(const State&, int)>& snapshot_sink = {}) {
    validate_stability(m, cfg);
    const double T = m.period();
    double t_end = cfg.t_end;
    const double k = std::round(t_end / T);
    if (std::abs(t_end - k * T) < 1e-6) t_end = k * T;

    Stepper stepper(m, cfg.grid);
    RunResult result;
    result.trace.times.push_back(0.0);
    result.trace.positions.push_back(front_position(m, cfg.grid, initial, cfg.front_level));
    result.period_states.push_back(initial);
    if (snapshot_sink) snapshot_sink(initial, 0);

    State s = std::move(initial);
    int next_period = 1;
    while (s.t < t_end - 1e-12) {
        const double t_target = std::min(next_period * T, t_end);
        const double dt = std::min(cfg.dt, t_target - s.t);
        stepper.step(s, dt);
        ++result.steps_taken;
        if (snapshot_sink && cfg.record_every > 0 && result.steps_taken % cfg.record_every == 0)
            snapshot_sink(s, result.steps_taken);
        if (s.t >= t_target - 1e-12 && t_target == next_period * T) {
            s.t = next_period * T; // suppress accumulated roundoff in t
            result.trace.times.push_back(s.t);
            result.trace.positions.push_back(front_position(m, cfg.grid, s, cfg.front_level));
            result.period_states.push_back(s);
            for (double x : s.u) result.max_u = std::max(result.max_u, x);
            for (double x : s.v) result.max_v = std::max(result.max_v, x);
            ++next_period;
        }
    }
    result.final_state = std::move(s);
    return result;
}

/// Snapshot CSV: x,u,v,phi,psi,t with phi = u/p(t), psi = (q(t)-v)/q(t).
inline void write_snapshot_csv(std::FILE* out, const Model& m, const Grid& grid, const State& s) {
    const double pt = m.p().eval(s.t), qt = m.q().eval(s.t);
    std::fprintf(out, "x,u,v,phi,psi,t\n");
    for (int i = 0; i < grid.n; ++i) {
        const double u = s.u[static_cast<std::size_t>(i)], v = s.v[static_cast<std::size_t>(i)];
        std::fprintf(out, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", grid.x(i), u, v, u / pt,
                     (qt - v) / qt, s.t);
    }
}

inline void write_trace_csv(std::FILE* out, const FrontTrace& trace, double level) {
    std::fprintf(out, "t,X,front_value\n");
    for (std::size_t i = 0; i < trace.times.size(); ++i)
        std::fprintf(out, "%.17g,%.17g,%.17g\n", trace.times[i], trace.positions[i], level);
}

} // namespace wavesign
