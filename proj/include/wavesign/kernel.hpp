#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "wavesign/numerics.hpp"

namespace wavesign {

/// Dispersal kernel J with unit mass, exponential moments
///   M(lambda) = int J(y) e^{lambda y} dy
/// and half-line moments
///   H+(lambda) = int_0^inf J e^{lambda y} dy,  H-(lambda) = int_-inf^0 J e^{lambda y} dy.
/// All built-in variants are even in y, hence M(lambda) = M(-lambda).
class Kernel {
public:
    enum class Shape { Gaussian, Laplace, Uniform };
    enum class Side { Positive, Negative };

    static Kernel gaussian(double sigma, double truncation_radius = 0.0) {
        require_positive(sigma, "sigma");
        return Kernel(Shape::Gaussian, sigma,
                      truncation_radius > 0.0 ? truncation_radius : 6.0 * sigma);
    }

    static Kernel laplace(double scale, double truncation_radius = 0.0) {
        require_positive(scale, "scale");
        return Kernel(Shape::Laplace, scale,
                      truncation_radius > 0.0 ? truncation_radius : 12.0 * scale);
    }

    static Kernel uniform(double halfwidth, double truncation_radius = 0.0) {
        require_positive(halfwidth, "halfwidth");
        return Kernel(Shape::Uniform, halfwidth,
                      truncation_radius > 0.0 ? truncation_radius : halfwidth);
    }

    Shape shape() const { return shape_; }
    double scale() const { return scale_; }
    double truncation_radius() const { return radius_; }
    bool symmetric() const { return true; }

    double density(double y) const {
        switch (shape_) {
        case Shape::Gaussian: {
            const double s = y / scale_;
            return std::exp(-0.5 * s * s) / (scale_ * std::sqrt(2.0 * pi));
        }
        case Shape::Laplace:
            return std::exp(-std::abs(y) / scale_) / (2.0 * scale_);
        case Shape::Uniform:
            return std::abs(y) <= scale_ ? 0.5 / scale_ : 0.0;
        }
        return 0.0;
    }

    /// Closed-form exponential moment M(lambda).
    double mgf(double lambda) const {
        switch (shape_) {
        case Shape::Gaussian: {
            const double a = scale_ * lambda;
            return std::exp(0.5 * a * a);
        }
        case Shape::Laplace: {
            const double a = scale_ * lambda;
            if (std::abs(a) >= 1.0)
                throw std::domain_error("Kernel::mgf: Laplace moment diverges for |lambda| >= 1/scale");
            return 1.0 / (1.0 - a * a);
        }
        case Shape::Uniform: {
            const double a = scale_ * lambda;
            if (std::abs(a) < 1e-4) {
                const double a2 = a * a;
                return 1.0 + a2 / 6.0 + a2 * a2 / 120.0;
            }
            return std::sinh(a) / a;
        }
        }
        return 1.0;
    }

    /// dM/dlambda, used for Newton polish in the speed minimization.
    double mgf_d1(double lambda) const {
        switch (shape_) {
        case Shape::Gaussian:
            return scale_ * scale_ * lambda * mgf(lambda);
        case Shape::Laplace: {
            const double m = mgf(lambda);
            return 2.0 * scale_ * scale_ * lambda * m * m;
        }
        case Shape::Uniform: {
            const double a = scale_ * lambda;
            if (std::abs(a) < 1e-4)
                return scale_ * scale_ * lambda * (1.0 / 3.0 + a * a / 30.0);
            return (a * std::cosh(a) - std::sinh(a)) / (a * lambda);
        }
        }
        return 0.0;
    }

    /// d2M/dlambda2.
    double mgf_d2(double lambda) const {
        switch (shape_) {
        case Shape::Gaussian: {
            const double s2 = scale_ * scale_;
            return s2 * mgf(lambda) * (1.0 + s2 * lambda * lambda);
        }
        case Shape::Laplace: {
            const double m = mgf(lambda);
            const double b2 = scale_ * scale_;
            return 2.0 * b2 * m * m + 8.0 * b2 * b2 * lambda * lambda * m * m * m;
        }
        case Shape::Uniform: {
            const double a = scale_ * lambda;
            const double s2 = scale_ * scale_;
            if (std::abs(a) < 1e-3) return s2 * (1.0 / 3.0 + a * a / 10.0);
            // d2/dl2 [sinh(a)/a] with a = scale*lambda
            return s2 * ((a * a + 2.0) * std::sinh(a) - 2.0 * a * std::cosh(a)) / (a * a * a);
        }
        }
        return 0.0;
    }

    /// Half-line moment over (0,inf) or (-inf,0).
    double half_moment(Side side, double lambda) const {
        const double sgn = (side == Side::Positive) ? 1.0 : -1.0;
        switch (shape_) {
        case Shape::Gaussian: {
            const double a = scale_ * lambda;
            return std::exp(0.5 * a * a) * normal_cdf(sgn * a);
        }
        case Shape::Laplace: {
            const double a = scale_ * lambda;
            if (sgn * a >= 1.0)
                throw std::domain_error("Kernel::half_moment: Laplace moment diverges");
            return 0.5 / (1.0 - sgn * a);
        }
        case Shape::Uniform: {
            const double a = sgn * scale_ * lambda;
            if (std::abs(a) < 1e-12) return 0.5;
            return std::expm1(a) / (2.0 * a);
        }
        }
        return 0.5;
    }

    /// Radius beyond which the tail mass is negligible at double precision;
    /// wider than truncation_radius, for use in certification quadratures.
    double wide_radius() const {
        switch (shape_) {
        case Shape::Gaussian: return 9.0 * scale_;
        case Shape::Laplace: return 40.0 * scale_;
        case Shape::Uniform: return scale_;
        }
        return radius_;
    }

private:
    Kernel(Shape shape, double scale, double radius)
        : shape_(shape), scale_(scale), radius_(radius) {}

    static void require_positive(double v, const char* name) {
        if (!(v > 0.0))
            throw std::invalid_argument(std::string("Kernel: ") + name + " must be positive");
    }

    Shape shape_ = Shape::Gaussian;
    double scale_ = 1.0;
    double radius_ = 6.0;
};

/// Quadrature weights w_j ~ J(j*dx)*dx on j in [-R/dx, R/dx], trapezoid at the
/// truncation endpoints, exactly symmetric, renormalized to unit sum.
inline std::vector<double> discretize(const Kernel& k, double dx) {
    if (!(dx > 0.0)) throw std::invalid_argument("discretize: dx must be positive");
    const int m = static_cast<int>(std::llround(k.truncation_radius() / dx));
    if (m < 1)
        throw std::invalid_argument("discretize: dx exceeds the kernel truncation radius");
    std::vector<double> w(static_cast<std::size_t>(2 * m + 1), 0.0);
    for (int j = 0; j <= m; ++j) {
        double v = k.density(j * dx) * dx;
        if (j == m) v *= 0.5;
        w[static_cast<std::size_t>(m + j)] = v;
        w[static_cast<std::size_t>(m - j)] = v;
    }
    double sum = w[static_cast<std::size_t>(m)];
    for (int j = 1; j <= m; ++j) sum += 2.0 * w[static_cast<std::size_t>(m + j)];
    if (!(sum > 0.0)) throw std::invalid_argument("discretize: zero kernel mass on the grid");
    for (double& v : w) v /= sum;
    double resum = w[static_cast<std::size_t>(m)];
    for (int j = 1; j <= m; ++j) resum += 2.0 * w[static_cast<std::size_t>(m + j)];
    w[static_cast<std::size_t>(m)] += 1.0 - resum;
    return w;
}

} // namespace wavesign
