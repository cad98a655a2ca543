#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wavesign/model.hpp"
#include "wavesign/numerics.hpp"

namespace wavesign {

/// The four scalar root equations of the linearized wave problem, in their
/// time-averaged form (the kernels are time-independent, so the period
/// integral factors):
///   I1: d1bar (M1(-mu)-1) - c mu + avg(a1 p - b1 q) = 0
///   H1: d2bar (M2(-mu)-1) - c mu - avg(b2 q)        = 0
///   I2: d2bar (M2(+mu)-1) + c mu + avg(b2 q - a2 p) = 0
///   H2: d1bar (M1(+mu)-1) + c mu - avg(a1 p)        = 0
/// Each is convex in mu, negative at mu = 0 (using the bistability condition),
/// and grows without bound, so it has exactly one positive root.
enum class EigenEquation { I1, H1, I2, H2 };

struct EigenRoot {
    double mu = 0.0;
    EigenEquation equation = EigenEquation::I1;
    double c = 0.0;
    double residual = 0.0;
};

/// Averaged growth exponent of the leftward monostable subsystem.
inline double gamma1(const Model& m, double mu) {
    return m.params().d1.mean() * (m.params().kernel1.mgf(-mu) - 1.0) + m.a1p().mean();
}

/// Averaged growth exponent of the rightward monostable subsystem.
inline double gamma2(const Model& m, double mu) {
    return m.params().d2.mean() * (m.params().kernel2.mgf(mu) - 1.0) + m.b2q().mean();
}

inline double eigen_residual(const Model& m, EigenEquation eq, double c, double mu) {
    switch (eq) {
    case EigenEquation::I1:
        return m.params().d1.mean() * (m.params().kernel1.mgf(-mu) - 1.0) - c * mu +
               m.a1p().mean() - m.b1q().mean();
    case EigenEquation::H1:
        return m.params().d2.mean() * (m.params().kernel2.mgf(-mu) - 1.0) - c * mu -
               m.b2q().mean();
    case EigenEquation::I2:
        return m.params().d2.mean() * (m.params().kernel2.mgf(mu) - 1.0) + c * mu +
               m.b2q().mean() - m.a2p().mean();
    case EigenEquation::H2:
        return m.params().d1.mean() * (m.params().kernel1.mgf(mu) - 1.0) + c * mu -
               m.a1p().mean();
    }
    return 0.0;
}

inline const char* eigen_equation_name(EigenEquation eq) {
    switch (eq) {
    case EigenEquation::I1: return "I1";
    case EigenEquation::H1: return "h1";
    case EigenEquation::I2: return "I2";
    case EigenEquation::H2: return "h2";
    }
    return "?";
}

/// Unique positive root of the chosen equation at wave-speed parameter c.
inline EigenRoot solve_root(const Model& m, EigenEquation eq, double c) {
    auto f = [&](double mu) { return eigen_residual(m, eq, c, mu); };
    if (!(f(0.0) < 0.0))
        throw std::invalid_argument(std::string("solve_root(") + eigen_equation_name(eq) +
                                    "): nonnegative value at mu = 0; parameters are not bistable");
    EigenRoot root;
    root.equation = eq;
    root.c = c;
    root.mu = solve_root_expanding(f, 1e-8, 1.0, 50.0,
                                   std::string("solve_root(") + eigen_equation_name(eq) + ")");
    root.residual = f(root.mu);
    if (std::abs(root.residual) > 1e-10)
        throw std::runtime_error(std::string("solve_root(") + eigen_equation_name(eq) +
                                 "): residual above tolerance");
    return root;
}

struct SpreadingSpeed {
    double c_star = 0.0;
    double mu_star = 0.0;
};

namespace detail {

/// Minimize gamma(mu)/mu over mu > 0. gamma is convex with gamma(0) > 0, so
/// the quotient is unimodal: geometric scan to bracket, golden section, then
/// a few Newton steps on mu gamma'(mu) - gamma(mu) = 0 with the analytic
/// moment derivatives.
inline SpreadingSpeed minimize_speed_quotient(const std::function<double(double)>& gamma,
                                              const std::function<double(double)>& gamma_d1,
                                              const std::function<double(double)>& gamma_d2,
                                              double mu_cap = 50.0) {
    auto quotient = [&](double mu) { return gamma(mu) / mu; };
    const int npts = 600;
    const double lo = 1e-6;
    double best = quotient(lo);
    int arg = 0;
    std::vector<double> grid(npts);
    for (int i = 0; i < npts; ++i) {
        grid[static_cast<std::size_t>(i)] = lo * std::pow(mu_cap / lo, double(i) / (npts - 1));
        const double v = quotient(grid[static_cast<std::size_t>(i)]);
        if (std::isfinite(v) && v < best) { best = v; arg = i; }
    }
    const double a = grid[static_cast<std::size_t>(std::max(0, arg - 1))];
    const double b = grid[static_cast<std::size_t>(std::min(npts - 1, arg + 1))];
    double mu = golden_min(quotient, a, b, 1e-12);
    for (int it = 0; it < 3; ++it) {
        const double g = mu * gamma_d1(mu) - gamma(mu);
        const double gp = mu * gamma_d2(mu);
        if (!(std::abs(gp) > 0.0)) break;
        const double next = mu - g / gp;
        if (next > a && next < b) mu = next;
    }
    return {quotient(mu), mu};
}

} // namespace detail

/// Leftward spreading speed c*_- = inf_{mu>0} gamma1(mu)/mu of the monostable
/// subsystem left behind by the wave, together with the minimizing mu.
inline SpreadingSpeed spreading_speed_minus(const Model& m) {
    const double d1 = m.params().d1.mean();
    const Kernel& k = m.params().kernel1;
    return detail::minimize_speed_quotient(
        [&](double mu) { return gamma1(m, mu); },
        [&](double mu) { return -d1 * k.mgf_d1(-mu); },
        [&](double mu) { return d1 * k.mgf_d2(-mu); });
}

/// Rightward spreading speed c*_+ = inf_{mu>0} gamma2(mu)/mu.
inline SpreadingSpeed spreading_speed_plus(const Model& m) {
    const double d2 = m.params().d2.mean();
    const Kernel& k = m.params().kernel2;
    return detail::minimize_speed_quotient(
        [&](double mu) { return gamma2(m, mu); },
        [&](double mu) { return d2 * k.mgf_d1(mu); },
        [&](double mu) { return d2 * k.mgf_d2(mu); });
}

struct SpeedInterval {
    double lo = 0.0; // -c*_+
    double hi = 0.0; // +c*_-
    bool contains(double c) const { return lo <= c && c <= hi; }
    SpeedInterval widened(double rel) const { return {lo * (1.0 + rel), hi * (1.0 + rel)}; }
};

/// Admissible range of the bistable wave speed, [-c*_+, c*_-].
inline SpeedInterval speed_interval(const Model& m) {
    return {-spreading_speed_plus(m).c_star, spreading_speed_minus(m).c_star};
}

/// Unique periodic solution of x' - g(t) x = f(t) on [0,T] via the
/// integrating factor; requires int_0^T g != 0. When int g > 0 the forward
/// formula x = e^G (x0 + int f e^{-G}) cancels catastrophically and the
/// roundoff is amplified by e^{G(T)}, so everything is accumulated in long
/// double.
inline PeriodicCurve solve_periodic_linear(const std::function<double(double)>& g,
                                           const std::function<double(double)>& f, double T,
                                           int n = 2048) {
    const long double h = static_cast<long double>(T) / n;
    // cumulative Simpson with per-cell panel doubling until every grid value
    // settles
    auto cumulative = [&](auto&& integrand) {
        auto build = [&](int sub) {
            std::vector<long double> acc(static_cast<std::size_t>(n) + 1, 0.0L);
            for (int i = 0; i < n; ++i) {
                const long double a = i * h, hh = h / sub;
                long double cell = 0.0L;
                for (int s = 0; s < sub; ++s) {
                    const long double x0 = a + s * hh;
                    cell += hh / 6.0L *
                            (integrand(x0) + 4.0L * integrand(x0 + 0.5L * hh) +
                             integrand(x0 + hh));
                }
                acc[static_cast<std::size_t>(i) + 1] = acc[static_cast<std::size_t>(i)] + cell;
            }
            return acc;
        };
        std::vector<long double> prev = build(2);
        for (int sub = 4; sub <= 256; sub *= 2) {
            std::vector<long double> cur = build(sub);
            long double scale = 1.0L, dev = 0.0L;
            for (int i = 1; i <= n; ++i) {
                scale = std::max(scale, std::abs(cur[static_cast<std::size_t>(i)]));
                dev = std::max(dev, std::abs(cur[static_cast<std::size_t>(i)] -
                                             prev[static_cast<std::size_t>(i)]));
            }
            if (dev < 1e-15L * scale) return cur;
            prev = std::move(cur);
        }
        return prev;
    };

    const std::vector<long double> G =
        cumulative([&](long double t) -> long double { return g(static_cast<double>(t)); });
    const long double GT = G[static_cast<std::size_t>(n)];
    if (std::abs(static_cast<double>(GT)) < 1e-12)
        throw std::invalid_argument(
            "solve_periodic_linear: int_0^T g vanishes; no unique periodic solution");

    auto Geval = [&](long double t) -> long double {
        int i = static_cast<int>(t / h);
        if (i > n - 1) i = n - 1;
        const long double t0 = i * h;
        long double extra = 0.0L;
        if (t > t0) {
            const long double mid = 0.5L * (t0 + t);
            extra = (t - t0) / 6.0L *
                    (g(static_cast<double>(t0)) + 4.0L * g(static_cast<double>(mid)) +
                     g(static_cast<double>(t)));
        }
        return G[static_cast<std::size_t>(i)] + extra;
    };
    const std::vector<long double> J = cumulative([&](long double t) -> long double {
        return f(static_cast<double>(t)) * std::exp(-Geval(t));
    });
    const long double x0 =
        std::exp(GT) * J[static_cast<std::size_t>(n)] / (1.0L - std::exp(GT));
    std::vector<double> samples(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        samples[static_cast<std::size_t>(i)] = static_cast<double>(
            std::exp(G[static_cast<std::size_t>(i)]) * (x0 + J[static_cast<std::size_t>(i)]));
    return PeriodicCurve(T, std::move(samples));
}

/// Periodic eigenfunctions attached to the linearizations at the two stable
/// states: phi1 (exponent of the I1 root, phi1(0) = 1), rho1 (periodic ratio
/// of the slaved component near the origin state), nu2 and rho2 (their
/// counterparts at the invaded state).
struct PeriodicEigenData {
    double c = 0.0;
    EigenRoot mu1, mu2, mu3, mu4;
    PeriodicCurve phi1, rho1, nu2, rho2;
};

/// g1(mu,t) = d2(t)(M2(-mu)-1) - c mu - b2(t)q(t), the coefficient of the
/// slaved equation near the origin state.
inline double g1_coefficient(const Model& m, double mu, double c, double t) {
    return m.params().d2.eval(t) * (m.params().kernel2.mgf(-mu) - 1.0) - c * mu -
           m.params().b2.eval(t) * m.q().eval(t);
}

/// g2(mu,t) = d1(t)(M1(mu)-1) + c mu - a1(t)p(t).
inline double g2_coefficient(const Model& m, double mu, double c, double t) {
    return m.params().d1.eval(t) * (m.params().kernel1.mgf(mu) - 1.0) + c * mu -
           m.params().a1.eval(t) * m.p().eval(t);
}

/// Logarithmic derivative phi1'(t)/phi1(t) in closed form.
inline double phi1_log_deriv(const Model& m, double mu1, double c, double t) {
    return m.params().d1.eval(t) * (m.params().kernel1.mgf(-mu1) - 1.0) - c * mu1 +
           m.params().a1.eval(t) * m.p().eval(t) - m.params().b1.eval(t) * m.q().eval(t);
}

/// Logarithmic derivative nu2'(t)/nu2(t) in closed form.
inline double nu2_log_deriv(const Model& m, double mu4, double c, double t) {
    return m.params().d2.eval(t) * (m.params().kernel2.mgf(mu4) - 1.0) + c * mu4 +
           m.params().b2.eval(t) * m.q().eval(t) - m.params().a2.eval(t) * m.p().eval(t);
}

inline PeriodicEigenData eigen_data(const Model& m, double c, int n = 2048) {
    PeriodicEigenData e;
    e.c = c;
    e.mu1 = solve_root(m, EigenEquation::I1, c);
    e.mu2 = solve_root(m, EigenEquation::H1, c);
    e.mu3 = solve_root(m, EigenEquation::H2, c);
    e.mu4 = solve_root(m, EigenEquation::I2, c);
    const double T = m.period();

    // phi1 = exp of the cumulative I1 integrand at mu1; periodic exactly
    // because the root makes the exponent vanish over one period.
    auto phi1_ld = [&](double t) { return phi1_log_deriv(m, e.mu1.mu, c, t); };
    const std::vector<double> E1 = cumulative_integral(phi1_ld, T, n, 1e-13);
    std::vector<double> phi1(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) phi1[static_cast<std::size_t>(i)] = std::exp(E1[static_cast<std::size_t>(i)]);
    e.phi1 = PeriodicCurve(T, std::move(phi1));

    e.rho1 = solve_periodic_linear(
        [&](double t) { return g1_coefficient(m, e.mu1.mu, c, t) - phi1_ld(t); },
        [&](double t) { return m.params().a2.eval(t) * m.p().eval(t); }, T, n);

    auto nu2_ld = [&](double t) { return nu2_log_deriv(m, e.mu4.mu, c, t); };
    const std::vector<double> E2 = cumulative_integral(nu2_ld, T, n, 1e-13);
    std::vector<double> nu2(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) nu2[static_cast<std::size_t>(i)] = std::exp(E2[static_cast<std::size_t>(i)]);
    e.nu2 = PeriodicCurve(T, std::move(nu2));

    e.rho2 = solve_periodic_linear(
        [&](double t) { return g2_coefficient(m, e.mu4.mu, c, t) - nu2_ld(t); },
        [&](double t) { return m.params().b1.eval(t) * m.q().eval(t); }, T, n);
    return e;
}

/// Eigen-inequality pair used by the uniqueness/stability comparison
/// arguments: (lambda0, p1-, p2-) solves the decaying system with slack in
/// the first component, (lambda1, p1+, p2+) the mirrored system with slack in
/// the second. Construction is explicit; the residual margins are reported.
struct LeccPair {
    double lambda0 = 0.0;
    double lambda1 = 0.0;
    PeriodicCurve p1_minus, p2_minus, p1_plus, p2_plus;
    // Margins of the four differential inequalities, minimized over the grid:
    // two components per pair, >= 0 means the inequality holds.
    double margin[4] = {0.0, 0.0, 0.0, 0.0};
};

inline LeccPair lecc_pair(const Model& m, int n = 2048) {
    const double T = m.period();
    const double m1 = m.b1q().mean() - m.a1p().mean(); // avg(b1 q - a1 p)
    const double m2 = m.b2q().mean();
    const double m3 = m.a2p().mean() - m.b2q().mean(); // avg(a2 p - b2 q)
    const double m4 = m.a1p().mean();
    if (!(m1 > 0.0) || !(m3 > 0.0))
        throw std::invalid_argument("lecc_pair: bistability condition fails");

    LeccPair L;
    L.lambda0 = 0.5 * std::min(m1, m2);
    L.lambda1 = 0.5 * std::min(m3, m4);

    auto a1p = [&](double t) { return m.params().a1.eval(t) * m.p().eval(t); };
    auto b1q = [&](double t) { return m.params().b1.eval(t) * m.q().eval(t); };
    auto a2p = [&](double t) { return m.params().a2.eval(t) * m.p().eval(t); };
    auto b2q = [&](double t) { return m.params().b2.eval(t) * m.q().eval(t); };

    // p1-(t) = exp(int_0^t (a1 p - b1 q) + avg(b1 q - a1 p) t), p1-(0) = 1.
    const std::vector<double> C1 =
        cumulative_integral([&](double t) { return a1p(t) - b1q(t); }, T, n, 1e-13);
    std::vector<double> p1m(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double t = i * T / n;
        p1m[static_cast<std::size_t>(i)] = std::exp(C1[static_cast<std::size_t>(i)] + m1 * t);
    }
    L.p1_minus = PeriodicCurve(T, std::move(p1m));

    // p2- solves p2' = a2 p p1- + (lambda0 - b2 q) p2 exactly, periodic.
    const std::vector<double> B2 = cumulative_integral(b2q, T, n, 1e-13);
    const double hB = T / n;
    auto B2eval = [&](double t) {
        const int i = std::min(n - 1, static_cast<int>(t / hB));
        const double t0 = i * hB;
        double extra = 0.0;
        if (t > t0)
            extra = (t - t0) / 6.0 * (b2q(t0) + 4.0 * b2q(0.5 * (t0 + t)) + b2q(t));
        return B2[static_cast<std::size_t>(i)] + extra;
    };
    auto p1m_eval = [&](double t) { return L.p1_minus.eval(t); };
    auto c0_integrand = [&](double t) {
        return a2p(t) * p1m_eval(t) * std::exp(B2eval(t) - L.lambda0 * t);
    };
    const std::vector<double> c0 = cumulative_integral(c0_integrand, T, n, 1e-13);
    const double denom = std::exp(B2[static_cast<std::size_t>(n)] - L.lambda0 * T) - 1.0;
    if (!(denom > 0.0)) throw std::runtime_error("lecc_pair: degenerate p2- normalization");
    const double p2m0 = c0[static_cast<std::size_t>(n)] / denom;
    std::vector<double> p2m(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double t = i * T / n;
        p2m[static_cast<std::size_t>(i)] =
            (c0[static_cast<std::size_t>(i)] + p2m0) *
            std::exp(-B2[static_cast<std::size_t>(i)] + L.lambda0 * t);
    }
    L.p2_minus = PeriodicCurve(T, std::move(p2m));

    // Mirrored pair: p2+(t) = exp(int_0^t (b2 q - a2 p) + avg(a2 p - b2 q) t).
    const std::vector<double> C2 =
        cumulative_integral([&](double t) { return b2q(t) - a2p(t); }, T, n, 1e-13);
    std::vector<double> p2p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double t = i * T / n;
        p2p[static_cast<std::size_t>(i)] = std::exp(C2[static_cast<std::size_t>(i)] + m3 * t);
    }
    L.p2_plus = PeriodicCurve(T, std::move(p2p));

    // p1+ solves p1' = (lambda1 - a1 p) p1 + b1 q p2+ exactly, periodic;
    // int_0^T (lambda1 - a1 p) = T(lambda1 - avg(a1 p)) < 0 keeps it positive.
    L.p1_plus = solve_periodic_linear([&](double t) { return L.lambda1 - a1p(t); },
                                      [&](double t) { return b1q(t) * L.p2_plus.eval(t); }, T, n);

    // Residual margins. The slack components have exact analytic slack
    // (avg difference minus lambda) times the eigenfunction; the other two
    // are exact solutions of their equations.
    L.margin[0] = (m1 - L.lambda0) * L.p1_minus.min_sample();
    L.margin[1] = 0.0;
    L.margin[2] = 0.0;
    L.margin[3] = (m3 - L.lambda1) * L.p2_plus.min_sample();
    for (int i = 0; i < 4; ++i)
        if (L.margin[i] < -1e-10)
            throw std::runtime_error("lecc_pair: inequality margin violated");
    if (!(L.p2_minus.min_sample() > 0.0) || !(L.p1_plus.min_sample() > 0.0))
        throw std::runtime_error("lecc_pair: constructed eigenfunction not strictly positive");
    return L;
}

} // namespace wavesign
