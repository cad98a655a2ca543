#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "wavesign/simulate.hpp"

using namespace wavesign;
using Catch::Approx;

namespace {

State shifted_initial(const Model& m, const Grid& grid, double center) {
    State s;
    s.t = 0.0;
    s.u.resize(static_cast<std::size_t>(grid.n));
    s.v.resize(static_cast<std::size_t>(grid.n));
    for (int i = 0; i < grid.n; ++i) {
        const double x = grid.x(i) - center;
        s.u[static_cast<std::size_t>(i)] = m.p0() / (1.0 + std::exp(-x));
        s.v[static_cast<std::size_t>(i)] = m.q0() / (1.0 + std::exp(x));
    }
    return s;
}

} // namespace

TEST_CASE("grid construction", "[simulator]") {
    const Grid g = Grid::make(-150.0, 150.0, 0.1);
    CHECK(g.n == 3001);
    CHECK(g.x(0) == -150.0);
    CHECK(g.x(g.n - 1) == Approx(150.0).margin(1e-12));
    CHECK_THROWS_AS(Grid::make(1.0, -1.0, 0.1), std::invalid_argument);
}

TEST_CASE("nonlocal difference operator", "[simulator]") {
    const auto w = discretize(Kernel::uniform(0.5), 0.5); // (0.25, 0.5, 0.25)

    SECTION("constant field with matching pads maps to zero") {
        std::vector<double> f(11, 0.7), out;
        nonlocal_diff(f, w, 0.7, 0.7, out);
        for (double v : out) CHECK(v == Approx(0.0).margin(1e-15));
    }
    SECTION("linear field is annihilated away from the boundary") {
        const auto wg = discretize(Kernel::gaussian(1.0), 0.1);
        const int m = (static_cast<int>(wg.size()) - 1) / 2;
        std::vector<double> f(400), out;
        for (int i = 0; i < 400; ++i) f[static_cast<std::size_t>(i)] = 0.3 + 0.02 * i;
        nonlocal_diff(f, wg, 0.0, 0.0, out);
        for (int i = m; i < 400 - m; ++i)
            CHECK(out[static_cast<std::size_t>(i)] == Approx(0.0).margin(1e-13));
    }
    SECTION("single spike reproduces the reversed weights") {
        std::vector<double> f(5, 0.0), out;
        f[2] = 1.0;
        nonlocal_diff(f, w, 0.0, 0.0, out);
        CHECK(out[0] == Approx(0.0).margin(1e-16));
        CHECK(out[1] == Approx(0.25).margin(1e-16));
        CHECK(out[2] == Approx(0.5 - 1.0).margin(1e-16));
        CHECK(out[3] == Approx(0.25).margin(1e-16));
        CHECK(out[4] == Approx(0.0).margin(1e-16));
    }
}

TEST_CASE("semidiscrete right-hand side", "[simulator]") {
    const Model m = Model::build(fixtures::example1());
    const Grid g = Grid::make(-20.0, 20.0, 0.1);
    Stepper stepper(m, g);

    SECTION("trivial equilibrium away from the pads") {
        // the equilibrium pads (0, q) | (p, 0) feed the zero state through
        // the convolution within one kernel radius of the boundary; beyond
        // that the zero state is an exact fixed point
        State s;
        s.t = 0.4;
        s.u.assign(static_cast<std::size_t>(g.n), 0.0);
        s.v.assign(static_cast<std::size_t>(g.n), 0.0);
        std::vector<double> du, dv;
        stepper.rhs(s, du, dv);
        const int mtaps = (static_cast<int>(discretize(m.params().kernel1, g.dx).size()) - 1) / 2;
        for (int i = mtaps; i < g.n - mtaps; ++i) {
            CHECK(du[static_cast<std::size_t>(i)] == 0.0);
            CHECK(dv[static_cast<std::size_t>(i)] == 0.0);
        }
        // influx from the pads is nonnegative
        for (int i = 0; i < g.n; ++i) {
            CHECK(du[static_cast<std::size_t>(i)] >= 0.0);
            CHECK(dv[static_cast<std::size_t>(i)] >= 0.0);
        }
    }
    SECTION("spatially constant carrying state follows the logistic flow") {
        // u = p(t), v = 0 with equilibrium pads: du/dt = p'(t) pointwise.
        // The left pad is 0, so only interior points see the constant field.
        const double that = 0.7;
        State s;
        s.t = that;
        const double pt = m.p().eval(that);
        s.u.assign(static_cast<std::size_t>(g.n), pt);
        s.v.assign(static_cast<std::size_t>(g.n), 0.0);
        std::vector<double> du, dv;
        stepper.rhs(s, du, dv);
        const double expect = pt * (m.params().r1.eval(that) - m.params().a1.eval(that) * pt);
        const int mtaps = (static_cast<int>(discretize(m.params().kernel1, g.dx).size()) - 1) / 2;
        for (int i = mtaps; i < g.n - mtaps; ++i)
            CHECK(du[static_cast<std::size_t>(i)] == Approx(expect).margin(1e-8));
        // and p'(t) equals that logistic value
        const double h = 1e-6;
        CHECK((m.p().eval(that + h) - m.p().eval(that - h)) / (2 * h) ==
              Approx(expect).margin(1e-7));
    }
    SECTION("spatially constant left state for v") {
        const double that = 1.3;
        State s;
        s.t = that;
        const double qt = m.q().eval(that);
        s.u.assign(static_cast<std::size_t>(g.n), 0.0);
        s.v.assign(static_cast<std::size_t>(g.n), qt);
        std::vector<double> du, dv;
        stepper.rhs(s, du, dv);
        const double expect = qt * (m.params().r2.eval(that) - m.params().b2.eval(that) * qt);
        const int mtaps = (static_cast<int>(discretize(m.params().kernel2, g.dx).size()) - 1) / 2;
        for (int i = mtaps; i < g.n - mtaps; ++i)
            CHECK(dv[static_cast<std::size_t>(i)] == Approx(expect).margin(1e-8));
    }
}

TEST_CASE("time stepping", "[simulator]") {
    const Model m = Model::build(fixtures::example1());
    const Grid g = Grid::make(-10.0, 10.0, 0.1);

    SECTION("zero state stays zero away from the pads") {
        // pad influx creeps inward one kernel radius per stage but its
        // amplitude decays superexponentially with distance; the center of a
        // +-30 window stays numerically zero over 50 steps
        const Grid wide = Grid::make(-30.0, 30.0, 0.1);
        Stepper st(m, wide);
        State s;
        s.t = 0.0;
        s.u.assign(static_cast<std::size_t>(wide.n), 0.0);
        s.v.assign(static_cast<std::size_t>(wide.n), 0.0);
        for (int k = 0; k < 50; ++k) st.step(s, 1e-3);
        for (int i = 0; i < wide.n; ++i) {
            if (std::abs(wide.x(i)) > 5.0) continue;
            CHECK(std::abs(s.u[static_cast<std::size_t>(i)]) < 1e-20);
            CHECK(std::abs(s.v[static_cast<std::size_t>(i)]) < 1e-20);
        }
    }

    SECTION("fourth-order one-step error on the kinetic flow") {
        // spatially constant states reduce to the kinetic system; compare a
        // single dt step against a tightly resolved reference
        auto advance = [&](double dt, int steps) {
            Stepper st(m, g);
            State s;
            s.t = 0.0;
            s.u.assign(static_cast<std::size_t>(g.n), 0.31);
            s.v.assign(static_cast<std::size_t>(g.n), 0.22);
            for (int k = 0; k < steps; ++k) st.step(s, dt);
            return s.u[static_cast<std::size_t>(g.n / 2)];
        };
        const double ref = advance(1e-4 / 64, 64 * 160); // dt = 1.5625e-6 reference
        const double e1 = std::abs(advance(8e-3, 2) - ref);
        const double e2 = std::abs(advance(4e-3, 4) - ref);
        const double e3 = std::abs(advance(2e-3, 8) - ref);
        CHECK(e2 < e1 / 10.0); // global order 4: halving dt gains ~16x
        CHECK(e3 < e2 / 10.0);
    }

    SECTION("comparison principle: cooperative ordering is preserved") {
        std::mt19937 rng(20240817u);
        std::uniform_real_distribution<double> jitter(0.0, 1.0);
        Stepper st(m, g);
        for (int trial = 0; trial < 3; ++trial) {
            State lo, hi;
            lo.t = hi.t = 0.0;
            lo.u.resize(static_cast<std::size_t>(g.n));
            hi.u.resize(static_cast<std::size_t>(g.n));
            lo.v.resize(static_cast<std::size_t>(g.n));
            hi.v.resize(static_cast<std::size_t>(g.n));
            // random monotone data, ordered in the cooperative sense
            // (u_lo <= u_hi, v_lo >= v_hi), built from nonneg increments
            double a = 0.0, b = 0.0;
            std::vector<double> inc1(static_cast<std::size_t>(g.n)),
                inc2(static_cast<std::size_t>(g.n));
            for (int i = 0; i < g.n; ++i) {
                a += jitter(rng);
                b += jitter(rng);
                inc1[static_cast<std::size_t>(i)] = a;
                inc2[static_cast<std::size_t>(i)] = b;
            }
            for (int i = 0; i < g.n; ++i) {
                const double s1 = inc1[static_cast<std::size_t>(i)] / a; // in [0,1], nondecr
                const double s2 = inc2[static_cast<std::size_t>(i)] / b;
                lo.u[static_cast<std::size_t>(i)] = 0.45 * m.p0() * s1;
                hi.u[static_cast<std::size_t>(i)] = 0.45 * m.p0() * s1 + 0.3 * m.p0() * s2;
                hi.v[static_cast<std::size_t>(i)] = 0.5 * m.q0() * (1.0 - s2);
                lo.v[static_cast<std::size_t>(i)] =
                    0.5 * m.q0() * (1.0 - s2) + 0.4 * m.q0() * (1.0 - s1);
            }
            for (int k = 0; k < 100; ++k) {
                st.step(lo, 1e-3);
                st.step(hi, 1e-3);
            }
            for (int i = 0; i < g.n; ++i) {
                CHECK(lo.u[static_cast<std::size_t>(i)] <=
                      hi.u[static_cast<std::size_t>(i)] + 1e-10);
                CHECK(lo.v[static_cast<std::size_t>(i)] >=
                      hi.v[static_cast<std::size_t>(i)] - 1e-10);
            }
        }
    }
}

TEST_CASE("initial data and front location", "[simulator]") {
    const Model m = Model::build(fixtures::example1());
    const Grid g = Grid::make(-30.0, 30.0, 0.1);
    const State s = default_initial(m, g);

    SECTION("sigmoid values and monotonicity") {
        const int i0 = static_cast<int>(std::llround((0.0 - g.x_min) / g.dx));
        CHECK(s.u[static_cast<std::size_t>(i0)] == Approx(m.p0() / 2).epsilon(1e-12));
        CHECK(s.v[static_cast<std::size_t>(i0)] == Approx(m.q0() / 2).epsilon(1e-12));
        for (int i = 1; i < g.n; ++i) {
            CHECK(s.u[static_cast<std::size_t>(i)] > s.u[static_cast<std::size_t>(i - 1)]);
            CHECK(s.v[static_cast<std::size_t>(i)] < s.v[static_cast<std::size_t>(i - 1)]);
        }
    }
    SECTION("front sits at the sigmoid center") {
        CHECK(front_position(m, g, s, 0.5) == Approx(0.0).margin(g.dx));
        const State off = shifted_initial(m, g, 5.0);
        CHECK(front_position(m, g, off, 0.5) == Approx(5.0).margin(g.dx));
    }
    SECTION("grid-exact translation shifts the front exactly") {
        State t = s;
        const int shift = 30; // +3.0 in grid units
        for (int i = g.n - 1; i >= 0; --i) {
            const int j = i - shift;
            t.u[static_cast<std::size_t>(i)] =
                j >= 0 ? s.u[static_cast<std::size_t>(j)] : s.u[0];
            t.v[static_cast<std::size_t>(i)] =
                j >= 0 ? s.v[static_cast<std::size_t>(j)] : s.v[0];
        }
        CHECK(front_position(m, g, t, 0.5) ==
              Approx(front_position(m, g, s, 0.5) + 3.0).margin(1e-12));
    }
    SECTION("missing or multiple crossings raise the front-lost error") {
        State flat = s;
        std::fill(flat.u.begin(), flat.u.end(), 0.9 * m.p0());
        CHECK_THROWS_AS(front_position(m, g, flat, 0.5), FrontLostError);
    }
}

TEST_CASE("speed measurement from a trace", "[simulator]") {
    SECTION("synthetic linear drift is recovered exactly") {
        FrontTrace tr;
        for (int n = 0; n <= 20; ++n) {
            tr.times.push_back(n * pi);
            tr.positions.push_back(4.0 - 2.0 * (n * pi));
        }
        const MeasuredSpeed ms = measure_speed(tr, pi);
        CHECK(ms.c == Approx(2.0).epsilon(1e-12));
        CHECK(ms.rms < 1e-10);
        CHECK(ms.reliable);
        CHECK(ms.samples_used == 16); // periods 5..20
    }
    SECTION("insufficient samples after burn-in are refused") {
        FrontTrace tr;
        for (int n = 0; n <= 8; ++n) {
            tr.times.push_back(n * pi);
            tr.positions.push_back(-1.0 * n);
        }
        CHECK_THROWS_AS(measure_speed(tr, pi), std::invalid_argument);
    }
}

TEST_CASE("stability guard", "[simulator]") {
    const Model m = Model::build(fixtures::example2());
    SimConfig cfg;
    cfg.grid = Grid::make(-10.0, 10.0, 0.1);
    cfg.dt = 2e-2; // dt (2 max d + reaction) ~ 5 > 2.5
    cfg.t_end = 1.0;
    CHECK_THROWS_AS(validate_stability(m, cfg), std::invalid_argument);
    cfg.dt = 5e-4;
    CHECK_NOTHROW(validate_stability(m, cfg));
}

TEST_CASE("short end-to-end run", "[simulator]") {
    const Model m = Model::build(fixtures::example1());
    SimConfig cfg;
    cfg.grid = Grid::make(-45.0, 45.0, 0.1);
    cfg.dt = 1e-3;
    cfg.t_end = 5.0 * pi;
    cfg.record_every = 0;
    RunResult r = run(m, cfg, shifted_initial(m, cfg.grid, 30.0));

    SECTION("front recorded at every period multiple") {
        REQUIRE(r.trace.times.size() == 6);
        CHECK(r.trace.times[5] == Approx(5.0 * pi));
        // leftward drift per period for these parameters
        CHECK(r.trace.positions[5] < r.trace.positions[0] - 30.0);
    }
    SECTION("invariant region holds at recorded times") {
        CHECK(r.max_u <= m.p().max_sample() * (1.0 + 1e-6));
        CHECK(r.max_v <= m.q().max_sample() * (1.0 + 1e-6));
    }
    SECTION("monotone fronts stay monotone at recorded times") {
        for (const State& s : r.period_states) {
            for (std::size_t i = 1; i < s.u.size(); ++i) {
                CHECK(s.u[i] >= s.u[i - 1] - 1e-10);
                CHECK(s.v[i] <= s.v[i - 1] + 1e-10);
            }
        }
    }
}
