#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "wavesign/kernel.hpp"
#include "wavesign/numerics.hpp"
#include "wavesign/periodic_curve.hpp"
#include "wavesign/trig_poly.hpp"

namespace wavesign {

/// Full coefficient bundle of the two-species competition model
///   u_t = d1(t)[J1*u - u] + u(r1 - a1 u - b1 v)
///   v_t = d2(t)[J2*v - v] + v(r2 - a2 u - b2 v)
/// with T-periodic positive coefficients and time-independent kernels.
struct ModelParams {
    double period = pi;
    TrigPoly d1, r1, a1, b1;
    TrigPoly d2, r2, a2, b2;
    Kernel kernel1 = Kernel::gaussian(1.0);
    Kernel kernel2 = Kernel::gaussian(1.0);

    void validate() const {
        if (!(period > 0.0)) throw std::invalid_argument("ModelParams: period must be positive");
        const TrigPoly* coeffs[] = {&d1, &r1, &a1, &b1, &d2, &r2, &a2, &b2};
        const char* names[] = {"d1", "r1", "a1", "b1", "d2", "r2", "a2", "b2"};
        for (int i = 0; i < 8; ++i) {
            if (std::abs(coeffs[i]->period() - period) > 1e-12 * period)
                throw std::invalid_argument(std::string("ModelParams: coefficient ") + names[i] +
                                            " has a mismatched period");
            if (!(coeffs[i]->min_value() > 0.0))
                throw std::invalid_argument(std::string("ModelParams: coefficient ") + names[i] +
                                            " is not strictly positive on [0,T]");
        }
    }
};

/// Mean over one period (exact for trig polynomials).
inline double average(const TrigPoly& f) { return f.mean(); }
inline double average(const PeriodicCurve& f) { return f.mean(); }

namespace detail {

/// Periodic solution of x' = x (r(t) - g(t) x), the periodic logistic
/// equation, in the closed form
///   x(t) = x0 e^{R(t)} / (1 + x0 int_0^t e^{R(s)} g(s) ds),
///   x0   = (e^{R(T)} - 1) / int_0^T e^{R(s)} g(s) ds,
/// with R the exact antiderivative of r.
inline PeriodicCurve periodic_logistic(const TrigPoly& r, const TrigPoly& g, double period,
                                       int n) {
    auto integrand = [&](double s) { return std::exp(r.antiderivative(s)) * g.eval(s); };
    const std::vector<double> acc = cumulative_integral(integrand, period, n, 1e-13);
    const double x0 = std::expm1(r.antiderivative(period)) / acc[static_cast<std::size_t>(n)];
    if (!(x0 > 0.0)) throw std::runtime_error("periodic_logistic: nonpositive periodic state");
    std::vector<double> samples(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double t = i * period / n;
        samples[static_cast<std::size_t>(i)] =
            x0 * std::exp(r.antiderivative(t)) / (1.0 + x0 * acc[static_cast<std::size_t>(i)]);
    }
    return PeriodicCurve(period, std::move(samples));
}

} // namespace detail

/// Periodic carrying capacity p(t) of species u (logistic with r1, a1).
inline PeriodicCurve carrying_p(const ModelParams& params, int n = 2048) {
    return detail::periodic_logistic(params.r1, params.a1, params.period, n);
}

/// Periodic carrying capacity q(t) of species v (logistic with r2, b2).
inline PeriodicCurve carrying_q(const ModelParams& params, int n = 2048) {
    return detail::periodic_logistic(params.r2, params.b2, params.period, n);
}

struct A2Check {
    double integral1 = 0.0; // int_0^T (a1 p - b1 q) dt
    double integral2 = 0.0; // int_0^T (b2 q - a2 p) dt
    bool holds = false;
};

struct StrongCheck {
    double lhs1 = 0.0, rhs1 = 0.0; // r1bar vs min(b1/b2) r2bar
    double lhs2 = 0.0, rhs2 = 0.0; // r2bar vs min(a2/a1) r1bar
    bool holds = false;
};

/// Coefficient bundle plus the derived periodic states and the product
/// averages every later stage needs. Immutable once built.
class Model {
public:
    static Model build(ModelParams params, int n = 2048) {
        params.validate();
        Model m;
        m.params_ = std::move(params);
        m.p_ = carrying_p(m.params_, n);
        m.q_ = carrying_q(m.params_, n);
        const double T = m.params_.period;
        auto product = [&](const TrigPoly& c, const PeriodicCurve& x) {
            std::vector<double> s(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
                const double t = i * T / n;
                s[static_cast<std::size_t>(i)] = c.eval(t) * x.sample(i);
            }
            return PeriodicCurve(T, std::move(s));
        };
        m.a1p_ = product(m.params_.a1, m.p_);
        m.b1q_ = product(m.params_.b1, m.q_);
        m.a2p_ = product(m.params_.a2, m.p_);
        m.b2q_ = product(m.params_.b2, m.q_);
        return m;
    }

    const ModelParams& params() const { return params_; }
    double period() const { return params_.period; }
    const PeriodicCurve& p() const { return p_; }
    const PeriodicCurve& q() const { return q_; }
    const PeriodicCurve& a1p() const { return a1p_; }
    const PeriodicCurve& b1q() const { return b1q_; }
    const PeriodicCurve& a2p() const { return a2p_; }
    const PeriodicCurve& b2q() const { return b2q_; }

    double p0() const { return p_.sample(0); }
    double q0() const { return q_.sample(0); }

private:
    ModelParams params_;
    PeriodicCurve p_, q_, a1p_, b1q_, a2p_, b2q_;
};

/// Bistability condition: both competition-pressure integrals negative.
inline A2Check check_A2(const Model& m) {
    A2Check c;
    const double T = m.period();
    c.integral1 = T * (m.a1p().mean() - m.b1q().mean());
    c.integral2 = T * (m.b2q().mean() - m.a2p().mean());
    c.holds = c.integral1 < 0.0 && c.integral2 < 0.0;
    return c;
}

/// Strong uniqueness condition on the averaged growth rates:
///   r1bar < min_t(b1/b2) r2bar  and  r2bar < min_t(a2/a1) r1bar.
inline StrongCheck check_strong(const ModelParams& params) {
    auto min_ratio = [&](const TrigPoly& num, const TrigPoly& den) {
        const int grid = 10000;
        double best = num.eval(0.0) / den.eval(0.0);
        int arg = 0;
        for (int i = 1; i < grid; ++i) {
            const double t = i * params.period / grid;
            const double v = num.eval(t) / den.eval(t);
            if (v < best) { best = v; arg = i; }
        }
        const double h = params.period / grid;
        const double t = golden_min(
            [&](double s) { return num.eval(s) / den.eval(s); }, (arg - 1) * h, (arg + 1) * h,
            1e-13);
        return std::min(best, num.eval(t) / den.eval(t));
    };
    StrongCheck s;
    s.lhs1 = params.r1.mean();
    s.rhs1 = min_ratio(params.b1, params.b2) * params.r2.mean();
    s.lhs2 = params.r2.mean();
    s.rhs2 = min_ratio(params.a2, params.a1) * params.r1.mean();
    s.holds = s.lhs1 < s.rhs1 && s.lhs2 < s.rhs2;
    return s;
}

} // namespace wavesign
