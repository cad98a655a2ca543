#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "wavesign/numerics.hpp"

namespace wavesign {

/// T-periodic function sampled on a uniform grid over [0,T) with periodic
/// cubic interpolation (4-point Lagrange with wrap-around).
class PeriodicCurve {
public:
    PeriodicCurve() = default;

    PeriodicCurve(double period, std::vector<double> samples)
        : period_(period), samples_(std::move(samples)) {
        if (!(period_ > 0.0)) throw std::invalid_argument("PeriodicCurve: period must be positive");
        if (samples_.size() < 4)
            throw std::invalid_argument("PeriodicCurve: need at least 4 samples");
    }

    static PeriodicCurve from_function(const std::function<double(double)>& f, double period,
                                       int n = 2048) {
        std::vector<double> s(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) s[i] = f(i * period / n);
        return PeriodicCurve(period, std::move(s));
    }

    double period() const { return period_; }
    int size() const { return static_cast<int>(samples_.size()); }
    double step() const { return period_ / size(); }
    double t_at(int i) const { return i * step(); }
    double sample(int i) const { return samples_[static_cast<std::size_t>(wrap(i))]; }
    const std::vector<double>& samples() const { return samples_; }

    double eval(double t) const {
        const int n = size();
        double x = t / step();
        x -= std::floor(x / n) * n; // into [0, n)
        int i1 = static_cast<int>(std::floor(x));
        if (i1 >= n) i1 = n - 1;
        const double th = x - i1;
        const double s0 = sample(i1 - 1), s1 = sample(i1), s2 = sample(i1 + 1), s3 = sample(i1 + 2);
        const double w0 = -th * (th - 1.0) * (th - 2.0) / 6.0;
        const double w1 = (th + 1.0) * (th - 1.0) * (th - 2.0) / 2.0;
        const double w2 = -(th + 1.0) * th * (th - 2.0) / 2.0;
        const double w3 = (th + 1.0) * th * (th - 1.0) / 6.0;
        return w0 * s0 + w1 * s1 + w2 * s2 + w3 * s3;
    }

    double operator()(double t) const { return eval(t); }

    /// Mean over one period; the uniform periodic grid makes the plain sample
    /// average spectrally accurate for smooth curves.
    double mean() const {
        double s = 0.0;
        for (double v : samples_) s += v;
        return s / size();
    }

    double min_sample() const {
        double m = samples_[0];
        for (double v : samples_) m = std::min(m, v);
        return m;
    }

    double max_sample() const {
        double m = samples_[0];
        for (double v : samples_) m = std::max(m, v);
        return m;
    }

    /// Fourth-order central difference of the sample sequence; useful for
    /// residual checks against a curve's defining ODE.
    double sample_derivative(int i) const {
        const double h = step();
        return (-sample(i + 2) + 8.0 * sample(i + 1) - 8.0 * sample(i - 1) + sample(i - 2)) /
               (12.0 * h);
    }

    /// Sixth-order central difference, for residual checks on curves with
    /// large high-order derivatives.
    double sample_derivative6(int i) const {
        const double h = step();
        return (sample(i + 3) - 9.0 * sample(i + 2) + 45.0 * sample(i + 1) -
                45.0 * sample(i - 1) + 9.0 * sample(i - 2) - sample(i - 3)) /
               (60.0 * h);
    }

private:
    int wrap(int i) const {
        const int n = size();
        i %= n;
        return i < 0 ? i + n : i;
    }

    double period_ = 1.0;
    std::vector<double> samples_;
};

} // namespace wavesign
