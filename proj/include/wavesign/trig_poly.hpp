#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "wavesign/numerics.hpp"

namespace wavesign {

/// One harmonic a*sin(k w t) + b*cos(k w t) of the base frequency w = 2*pi/T.
struct Harmonic {
    int k = 1;
    double sin_coeff = 0.0;
    double cos_coeff = 0.0;
};

/// T-periodic coefficient represented as mean plus a finite harmonic series.
/// This is the canonical form of every model coefficient; the mean and the
/// antiderivative are exact by construction.
class TrigPoly {
public:
    TrigPoly() = default;

    TrigPoly(double period, double mean, std::vector<Harmonic> harmonics = {})
        : period_(period), mean_(mean), harmonics_(std::move(harmonics)) {
        if (!(period_ > 0.0)) throw std::invalid_argument("TrigPoly: period must be positive");
        for (const auto& h : harmonics_)
            if (h.k <= 0) throw std::invalid_argument("TrigPoly: harmonic index must be >= 1");
    }

    double period() const { return period_; }
    double mean() const { return mean_; }
    const std::vector<Harmonic>& harmonics() const { return harmonics_; }

    double eval(double t) const {
        const double w = 2.0 * pi / period_;
        double v = mean_;
        for (const auto& h : harmonics_) {
            const double a = h.k * w * t;
            v += h.sin_coeff * std::sin(a) + h.cos_coeff * std::cos(a);
        }
        return v;
    }

    double operator()(double t) const { return eval(t); }

    /// Exact antiderivative with antiderivative(0) = 0; over one period it
    /// reduces to mean()*period().
    double antiderivative(double t) const {
        const double w = 2.0 * pi / period_;
        double v = mean_ * t;
        for (const auto& h : harmonics_) {
            const double kw = h.k * w;
            v += h.sin_coeff * (1.0 - std::cos(kw * t)) / kw + h.cos_coeff * std::sin(kw * t) / kw;
        }
        return v;
    }

    double derivative(double t) const {
        const double w = 2.0 * pi / period_;
        double v = 0.0;
        for (const auto& h : harmonics_) {
            const double kw = h.k * w;
            v += h.sin_coeff * kw * std::cos(kw * t) - h.cos_coeff * kw * std::sin(kw * t);
        }
        return v;
    }

    /// Minimum over one period: coarse grid scan plus golden-section
    /// refinement around the grid minimizer.
    double min_value(int grid = 10000) const {
        double best = eval(0.0);
        int arg = 0;
        for (int i = 1; i < grid; ++i) {
            const double v = eval(i * period_ / grid);
            if (v < best) { best = v; arg = i; }
        }
        const double h = period_ / grid;
        const double t = golden_min([this](double s) { return eval(s); }, (arg - 1) * h,
                                    (arg + 1) * h, 1e-13);
        return std::min(best, eval(t));
    }

private:
    double period_ = 1.0;
    double mean_ = 0.0;
    std::vector<Harmonic> harmonics_;
};

} // namespace wavesign
