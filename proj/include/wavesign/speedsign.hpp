#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wavesign/model.hpp"
#include "wavesign/numerics.hpp"
#include "wavesign/spectral.hpp"

namespace wavesign {

/// Dispersal mismatch of the two species at decay rate mu:
///   Y1(mu,t) = d1(t)(M1(mu)-1) - d2(t)(M2(mu)-1).
inline double Y1(const Model& m, double mu, double t) {
    return m.params().d1.eval(t) * (m.params().kernel1.mgf(mu) - 1.0) -
           m.params().d2.eval(t) * (m.params().kernel2.mgf(mu) - 1.0);
}

namespace detail {

/// int over the chosen half line of J1 (1+e^{mu y})(e^{mu y/2}-e^{-mu y/2})^2 dy,
/// expanded algebraically to e^{2 mu y} - e^{mu y} + e^{-mu y} - 1 and summed
/// from the half-line moments.
inline double half_line_defect(const Kernel& k, Kernel::Side side, double mu) {
    return k.half_moment(side, 2.0 * mu) - k.half_moment(side, mu) +
           k.half_moment(side, -mu) - k.half_moment(side, 0.0);
}

} // namespace detail

/// Y2(mu,t) = -d1(t) int_0^inf J1 (1+e^{mu y})(e^{mu y/2}-e^{-mu y/2})^2 dy <= 0.
inline double Y2(const Model& m, double mu, double t) {
    return -m.params().d1.eval(t) *
           detail::half_line_defect(m.params().kernel1, Kernel::Side::Positive, mu);
}

/// Y3(mu,t): the same integral over the negative half line; for symmetric
/// kernels Y3 == Y2.
inline double Y3(const Model& m, double mu, double t) {
    return -m.params().d1.eval(t) *
           detail::half_line_defect(m.params().kernel1, Kernel::Side::Negative, mu);
}

namespace detail {

/// t-independent part of F: int J2(y) (2 + (1-s0)(1-e^{mu y})/(s0+(1-s0)e^{mu y}))
/// (1-e^{mu y}) dy. The denominator is positive for s0 in (0,1), so the
/// integrand is smooth; adaptive quadrature over the widened support.
inline double f_shape_integral(const Kernel& k2, double mu, double s0) {
    const double R = k2.wide_radius();
    auto integrand = [&](double y) {
        const double e = std::exp(mu * y);
        const double one_minus = 1.0 - e;
        return k2.density(y) * (2.0 + (1.0 - s0) * one_minus / (s0 + (1.0 - s0) * e)) * one_minus;
    };
    return integrate_adaptive(integrand, -R, R, 1e-12);
}

} // namespace detail

/// F(mu,s0,t) = d2(t) * int J2 (2 + (1-s0)(1-e^{mu y})/(s0+(1-s0)e^{mu y}))(1-e^{mu y}) dy.
inline double F_term(const Model& m, double mu, double s0, double t) {
    if (!(s0 > 0.0 && s0 < 1.0))
        throw std::invalid_argument("F_term: s0 must lie in (0,1)");
    return m.params().d2.eval(t) * detail::f_shape_integral(m.params().kernel2, mu, s0);
}

enum class Verdict { Positive, Negative, Inconclusive };
enum class TheoremUsed { TH1, TH2, None };

inline const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::Positive: return "positive";
    case Verdict::Negative: return "negative";
    case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

inline const char* to_string(TheoremUsed t) {
    switch (t) {
    case TheoremUsed::TH1: return "TH1";
    case TheoremUsed::TH2: return "TH2";
    case TheoremUsed::None: return "none";
    }
    return "?";
}

/// Machine-checked record of a propagation-direction criterion: the verdict,
/// the feasible constant band, the margin curve over one period, and the
/// inequality values at the worst sampled t.
struct SignCertificate {
    Verdict verdict = Verdict::Inconclusive;
    TheoremUsed theorem = TheoremUsed::None;
    double mu1_at_0 = 0.0;
    bool has_band = false;
    double k_lo = 0.0;
    double k_hi = 0.0;
    std::optional<double> s0;
    std::vector<double> t_grid;
    std::vector<double> margin; // pointwise worst margin of the criterion
    double worst_t = 0.0;
    double worst_margin = 0.0;
    std::map<std::string, double> evidence;
    bool asymmetric_kernel_warning = false;
    std::optional<SpeedInterval> interval;
};

namespace detail {

/// Minimum of a smooth periodic margin function: grid scan plus golden
/// refinement around the grid minimizer.
inline std::pair<double, double> refined_min(const std::function<double(double)>& f, double T,
                                             const std::vector<double>& grid_values) {
    const int n = static_cast<int>(grid_values.size());
    int arg = 0;
    double best = grid_values[0];
    for (int i = 1; i < n; ++i)
        if (grid_values[static_cast<std::size_t>(i)] < best) {
            best = grid_values[static_cast<std::size_t>(i)];
            arg = i;
        }
    const double h = T / n;
    const double t = golden_min(f, (arg - 1) * h, (arg + 1) * h, 1e-12);
    const double v = f(t);
    return v < best ? std::make_pair(v, t) : std::make_pair(best, arg * h);
}

} // namespace detail

/// Criterion for a positive wave speed (the invading state wins). Checks
///   0 < L(t) < U(t) for all t, with
///   L = [Y1(mu1(0),t) + a1 p - b1 q + b2 q] / (a2 p),
///   U = [a1 p + Y2(mu1(0),t)] / (a1 p),
/// and reports the feasible constant band (max L, min U).
inline SignCertificate th1_check(const Model& m, int t_samples = 2048) {
    if (!check_A2(m).holds)
        throw std::invalid_argument("th1_check: bistability condition (A2) fails");
    SignCertificate cert;
    cert.theorem = TheoremUsed::TH1;
    cert.mu1_at_0 = solve_root(m, EigenEquation::I1, 0.0).mu;
    const double mu = cert.mu1_at_0;
    const double T = m.period();

    const double A1 = m.params().kernel1.mgf(mu) - 1.0;
    const double A2m = m.params().kernel2.mgf(mu) - 1.0;
    const double D2 = detail::half_line_defect(m.params().kernel1, Kernel::Side::Positive, mu);
    auto Lf = [&](double t) {
        const double y1 = m.params().d1.eval(t) * A1 - m.params().d2.eval(t) * A2m;
        const double a1p = m.params().a1.eval(t) * m.p().eval(t);
        const double b1q = m.params().b1.eval(t) * m.q().eval(t);
        const double b2q = m.params().b2.eval(t) * m.q().eval(t);
        const double a2p = m.params().a2.eval(t) * m.p().eval(t);
        return (y1 + a1p - b1q + b2q) / a2p;
    };
    auto Uf = [&](double t) {
        const double a1p = m.params().a1.eval(t) * m.p().eval(t);
        return 1.0 - m.params().d1.eval(t) * D2 / a1p;
    };
    auto marginf = [&](double t) {
        const double L = Lf(t), U = Uf(t);
        return std::min(L, U - L);
    };

    cert.t_grid.resize(static_cast<std::size_t>(t_samples));
    cert.margin.resize(static_cast<std::size_t>(t_samples));
    std::vector<double> negL(static_cast<std::size_t>(t_samples)),
        Uv(static_cast<std::size_t>(t_samples));
    for (int i = 0; i < t_samples; ++i) {
        const double t = i * T / t_samples;
        cert.t_grid[static_cast<std::size_t>(i)] = t;
        cert.margin[static_cast<std::size_t>(i)] = marginf(t);
        negL[static_cast<std::size_t>(i)] = -Lf(t);
        Uv[static_cast<std::size_t>(i)] = Uf(t);
    }
    auto [worst, worst_t] = detail::refined_min(marginf, T, cert.margin);
    cert.worst_margin = worst;
    cert.worst_t = worst_t;
    const double maxL = -detail::refined_min([&](double t) { return -Lf(t); }, T, negL).first;
    const double minU = detail::refined_min(Uf, T, Uv).first;
    cert.k_lo = maxL;
    cert.k_hi = minU;
    cert.has_band = maxL < minU;
    cert.evidence["t"] = worst_t;
    cert.evidence["L"] = Lf(worst_t);
    cert.evidence["U"] = Uf(worst_t);
    cert.evidence["Y1"] = Y1(m, mu, worst_t);
    cert.evidence["Y2"] = Y2(m, mu, worst_t);
    // The criterion is pointwise in t; the reported band additionally tells
    // whether a single constant k1 works for every t (has_band).
    cert.verdict = worst > 0.0 ? Verdict::Positive : Verdict::Inconclusive;
    if (cert.verdict != Verdict::Positive) cert.theorem = TheoremUsed::None;
    return cert;
}

/// Criterion for a negative wave speed at a fixed junction level s0. Checks
/// for all t
///   max{a2 p/(b2 q), 1} < min{(1-(a1 p/(b1 q))(1-s0))/s0, -Y3(mu1(0),t)/(b1 q)}
/// together with F(mu1(0),s0,t) < Y1(mu1(0),t) + a1 p - b1 q.
inline SignCertificate th2_check(const Model& m, double s0, int t_samples = 2048) {
    if (!(s0 > 0.0 && s0 < 1.0))
        throw std::invalid_argument("th2_check: s0 must lie in (0,1)");
    if (!check_A2(m).holds)
        throw std::invalid_argument("th2_check: bistability condition (A2) fails");
    SignCertificate cert;
    cert.theorem = TheoremUsed::TH2;
    cert.s0 = s0;
    cert.mu1_at_0 = solve_root(m, EigenEquation::I1, 0.0).mu;
    const double mu = cert.mu1_at_0;
    const double T = m.period();

    const double A1 = m.params().kernel1.mgf(mu) - 1.0;
    const double A2m = m.params().kernel2.mgf(mu) - 1.0;
    const double D3 = detail::half_line_defect(m.params().kernel1, Kernel::Side::Negative, mu);
    const double Fshape = detail::f_shape_integral(m.params().kernel2, mu, s0);

    auto lhsf = [&](double t) {
        const double a2p = m.params().a2.eval(t) * m.p().eval(t);
        const double b2q = m.params().b2.eval(t) * m.q().eval(t);
        return std::max(a2p / b2q, 1.0);
    };
    auto rhsf = [&](double t) {
        const double a1p = m.params().a1.eval(t) * m.p().eval(t);
        const double b1q = m.params().b1.eval(t) * m.q().eval(t);
        const double first = (1.0 - (a1p / b1q) * (1.0 - s0)) / s0;
        const double second = m.params().d1.eval(t) * D3 / b1q; // = -Y3/(b1 q)
        return std::min(first, second);
    };
    auto margin2f = [&](double t) {
        const double y1 = m.params().d1.eval(t) * A1 - m.params().d2.eval(t) * A2m;
        const double a1p = m.params().a1.eval(t) * m.p().eval(t);
        const double b1q = m.params().b1.eval(t) * m.q().eval(t);
        return y1 + a1p - b1q - m.params().d2.eval(t) * Fshape;
    };
    auto marginf = [&](double t) { return std::min(rhsf(t) - lhsf(t), margin2f(t)); };

    cert.t_grid.resize(static_cast<std::size_t>(t_samples));
    cert.margin.resize(static_cast<std::size_t>(t_samples));
    std::vector<double> neg_lhs(static_cast<std::size_t>(t_samples)),
        rhs(static_cast<std::size_t>(t_samples));
    for (int i = 0; i < t_samples; ++i) {
        const double t = i * T / t_samples;
        cert.t_grid[static_cast<std::size_t>(i)] = t;
        cert.margin[static_cast<std::size_t>(i)] = marginf(t);
        neg_lhs[static_cast<std::size_t>(i)] = -lhsf(t);
        rhs[static_cast<std::size_t>(i)] = rhsf(t);
    }
    auto [worst, worst_t] = detail::refined_min(marginf, T, cert.margin);
    cert.worst_margin = worst;
    cert.worst_t = worst_t;
    const double max_lhs = -detail::refined_min([&](double t) { return -lhsf(t); }, T, neg_lhs).first;
    const double min_rhs = detail::refined_min(rhsf, T, rhs).first;
    cert.k_lo = max_lhs;
    cert.k_hi = min_rhs;
    cert.has_band = max_lhs < min_rhs;
    cert.evidence["t"] = worst_t;
    cert.evidence["lhs"] = lhsf(worst_t);
    cert.evidence["rhs"] = rhsf(worst_t);
    cert.evidence["F"] = F_term(m, mu, s0, worst_t);
    cert.evidence["cond2_margin"] = margin2f(worst_t);
    cert.verdict = worst > 0.0 ? Verdict::Negative : Verdict::Inconclusive;
    if (cert.verdict != Verdict::Negative) cert.theorem = TheoremUsed::None;
    return cert;
}

/// Default search grid for the junction level: 0.01, 0.02, ..., 0.99.
inline std::vector<double> default_s0_grid() {
    std::vector<double> g(99);
    for (int i = 0; i < 99; ++i) g[static_cast<std::size_t>(i)] = 0.01 * (i + 1);
    return g;
}

/// Scan the s0 grid and keep the certificate with the largest worst-t margin.
inline SignCertificate th2_search(const Model& m, const std::vector<double>& s0_grid,
                                  int t_samples = 2048) {
    std::optional<SignCertificate> best;
    std::optional<SignCertificate> best_failed;
    for (double s0 : s0_grid) {
        SignCertificate c = th2_check(m, s0, t_samples);
        if (c.verdict == Verdict::Negative) {
            if (!best || c.worst_margin > best->worst_margin) best = std::move(c);
        } else if (!best_failed || c.worst_margin > best_failed->worst_margin) {
            best_failed = std::move(c);
        }
    }
    if (best) return *best;
    if (best_failed) return *best_failed;
    throw std::invalid_argument("th2_search: empty s0 grid");
}

inline SignCertificate th2_search(const Model& m, int t_samples = 2048) {
    return th2_search(m, default_s0_grid(), t_samples);
}

/// Combined classification: positive-speed criterion first, then the
/// negative-speed search; attaches the admissible speed interval. The
/// criteria are sufficient only, so Inconclusive is an honest outcome.
inline SignCertificate classify(const Model& m, int t_samples = 2048) {
    if (!check_A2(m).holds)
        throw std::invalid_argument("classify: bistability condition (A2) fails");
    SignCertificate cert = th1_check(m, t_samples);
    if (cert.verdict != Verdict::Positive) cert = th2_search(m, t_samples);
    if (cert.verdict == Verdict::Inconclusive) cert.theorem = TheoremUsed::None;
    cert.asymmetric_kernel_warning =
        !m.params().kernel1.symmetric() || !m.params().kernel2.symmetric();
    cert.interval = speed_interval(m);
    return cert;
}

} // namespace wavesign
