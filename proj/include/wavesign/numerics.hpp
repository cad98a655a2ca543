#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace wavesign {

inline constexpr double pi = std::numbers::pi;

/// Standard normal cumulative distribution function.
inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

namespace detail {

template <class F>
double adaptive_simpson_rec(const F& f, double a, double fa, double b, double fb, double m,
                            double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

} // namespace detail

/// Adaptive Simpson quadrature of f over [a,b] with absolute tolerance tol.
template <class F>
double integrate_adaptive(const F& f, double a, double b, double tol = 1e-11,
                          int max_depth = 48) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

/// Composite Simpson with panel doubling until successive values differ by
/// less than tol (relative to the magnitude of the result).
inline double integrate_refined(const std::function<double(double)>& f, double a, double b,
                                double tol = 1e-10, int initial_panels = 64,
                                int max_panels = 1 << 22) {
    auto composite = [&](int panels) {
        const double h = (b - a) / panels;
        double sum = f(a) + f(b);
        for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
        return sum * h / 3.0;
    };
    double prev = composite(initial_panels);
    for (int panels = 2 * initial_panels; panels <= max_panels; panels *= 2) {
        const double cur = composite(panels);
        if (std::abs(cur - prev) < tol * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    return prev;
}

/// Cumulative integral of f on the uniform grid t_i = i*length/n, i = 0..n.
/// Each cell uses composite Simpson; the panel count per cell is doubled until
/// the endpoint value settles to a relative tol.
inline std::vector<double> cumulative_integral(const std::function<double(double)>& f,
                                               double length, int n, double tol = 1e-12) {
    auto build = [&](int sub) {
        std::vector<double> acc(static_cast<std::size_t>(n) + 1, 0.0);
        const double h = length / n;
        for (int i = 0; i < n; ++i) {
            const double a = i * h, hh = h / sub;
            double cell = 0.0;
            for (int s = 0; s < sub; ++s) {
                const double x0 = a + s * hh;
                cell += hh / 6.0 * (f(x0) + 4.0 * f(x0 + 0.5 * hh) + f(x0 + hh));
            }
            acc[i + 1] = acc[i] + cell;
        }
        return acc;
    };
    std::vector<double> prev = build(2);
    for (int sub = 4; sub <= 256; sub *= 2) {
        std::vector<double> cur = build(sub);
        double scale = 1.0, dev = 0.0;
        for (int i = 1; i <= n; ++i) {
            scale = std::max(scale, std::abs(cur[i]));
            dev = std::max(dev, std::abs(cur[i] - prev[i]));
        }
        if (dev < tol * scale) return cur;
        prev = std::move(cur);
    }
    return prev;
}

/// Root of an increasing-through-zero function: f(lo) < 0 is required, the
/// upper end is doubled until the sign changes (capped), then bisected.
inline double solve_root_expanding(const std::function<double(double)>& f, double lo, double hi0,
                                   double cap, const std::string& what) {
    double flo = f(lo);
    if (!(flo < 0.0))
        throw std::invalid_argument(what + ": value at lower end is nonnegative (" +
                                    std::to_string(flo) + ")");
    double hi = hi0;
    double fhi = f(hi);
    while (!(fhi > 0.0)) {
        hi *= 2.0;
        if (hi > cap)
            throw std::runtime_error(what + ": no sign change up to " + std::to_string(cap));
        fhi = f(hi);
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        (fm < 0.0 ? lo : hi) = mid;
        if (hi - lo < 1e-15 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
}

/// Golden-section minimizer on [a,b]; assumes unimodality.
inline double golden_min(const std::function<double(double)>& f, double a, double b,
                         double tol = 1e-12) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol * std::max(1.0, std::abs(a) + std::abs(b))) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;
};

/// Ordinary least squares y = slope*x + intercept with fit RMS.
inline LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("least_squares: need at least two paired samples");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i]; sy += y[i];
        sxx += x[i] * x[i]; sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-300) throw std::invalid_argument("least_squares: degenerate abscissae");
    LinearFit fit;
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.slope * x[i] + fit.intercept);
        ss += r * r;
    }
    fit.rms = std::sqrt(ss / n);
    return fit;
}

/// FNV-1a 64-bit hash, used for config provenance.
inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace wavesign
