#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "wavesign/model.hpp"
#include "wavesign/numerics.hpp"
#include "wavesign/spectral.hpp"
#include "wavesign/speedsign.hpp"

namespace wavesign {

enum class CandidateKind { LowerTH1, UpperTH2 };

/// Explicit traveling-profile candidate in the moving frame z = x + ct.
/// LowerTH1: (k1 s(z,t), s(z,t)) with s = phi1/(phi1 + e^{-mu1 z}), smooth.
/// UpperTH2: the piecewise pair that is s0 left of z1(t), the sigmoid right
/// of it, with second component min(k4 Phi, 1) switching at z2(t).
struct ProfileCandidate {
    CandidateKind kind = CandidateKind::LowerTH1;
    double c = 0.0;
    double k = 0.0;           // k1 or k4
    double s0 = 0.0;          // junction level, UpperTH2 only
    PeriodicEigenData eigen;  // mu1(c) and phi1 at this c

    double mu() const { return eigen.mu1.mu; }

    /// s(z,t) = phi1/(phi1 + e^{-mu z}), evaluated overflow-safely on both tails.
    double sigmoid(double z, double t) const {
        const double phi = eigen.phi1.eval(t);
        const double a = mu() * z;
        if (a >= 0.0) return phi / (phi + std::exp(-a));
        const double e = std::exp(a);
        return phi * e / (phi * e + 1.0);
    }

    /// Junction where the sigmoid crosses s0 (UpperTH2).
    double z1(double t) const {
        return -std::log(eigen.phi1.eval(t) * (1.0 - s0) / s0) / mu();
    }

    /// Junction where k4 * sigmoid reaches 1 (UpperTH2).
    double z2(double t) const {
        return -std::log(eigen.phi1.eval(t) * (k - 1.0)) / mu();
    }

    double phi(double z, double t) const {
        if (kind == CandidateKind::LowerTH1) return k * sigmoid(z, t);
        return z < z1(t) ? s0 : sigmoid(z, t);
    }

    double psi(double z, double t) const {
        if (kind == CandidateKind::LowerTH1) return sigmoid(z, t);
        return z <= z2(t) ? k * phi(z, t) : 1.0;
    }
};

/// Lower-solution candidate for the positive-speed criterion; k1 must lie in
/// the feasible band and the frame speed must be a small positive fraction of
/// the leftward spreading speed.
inline ProfileCandidate build_lower_th1(const Model& m, double k1, double c_small) {
    SignCertificate cert = th1_check(m);
    if (cert.verdict != Verdict::Positive)
        throw std::invalid_argument("build_lower_th1: criterion fails for these parameters");
    if (!cert.has_band || !(k1 > cert.k_lo && k1 < cert.k_hi))
        throw std::invalid_argument("build_lower_th1: k1 outside the feasible band");
    const double cap = 0.01 * spreading_speed_minus(m).c_star;
    if (!(c_small > 0.0 && c_small <= cap))
        throw std::invalid_argument("build_lower_th1: need 0 < c_small <= 0.01 c*_-");
    ProfileCandidate cand;
    cand.kind = CandidateKind::LowerTH1;
    cand.c = c_small;
    cand.k = k1;
    cand.eigen = eigen_data(m, c_small);
    return cand;
}

/// Upper-solution candidate for the negative-speed criterion at junction
/// level s0; k4 must lie in the feasible band (k4 s0 < 1 then follows).
inline ProfileCandidate build_upper_th2(const Model& m, double k4, double s0, double c_small) {
    SignCertificate cert = th2_check(m, s0);
    if (cert.verdict != Verdict::Negative)
        throw std::invalid_argument("build_upper_th2: criterion fails at this s0");
    // When no single constant satisfies the band at every t (k_lo >= k_hi),
    // accept any k4 inside the envelope of the two band edges; the residual
    // field then reports where the construction breaks down.
    const double lo = std::min(cert.k_lo, cert.k_hi), hi = std::max(cert.k_lo, cert.k_hi);
    if (!(k4 >= lo && k4 <= hi))
        throw std::invalid_argument("build_upper_th2: k4 outside the feasible band");
    if (!(k4 > 1.0) || !(k4 * s0 < 1.0))
        throw std::invalid_argument("build_upper_th2: need 1 < k4 < 1/s0");
    const double cap = 0.01 * spreading_speed_plus(m).c_star;
    if (!(c_small < 0.0 && -c_small <= cap))
        throw std::invalid_argument("build_upper_th2: need -0.01 c*_+ <= c_small < 0");
    ProfileCandidate cand;
    cand.kind = CandidateKind::UpperTH2;
    cand.c = c_small;
    cand.k = k4;
    cand.s0 = s0;
    cand.eigen = eigen_data(m, c_small);
    return cand;
}

enum class DerivMode { Analytic, FiniteDifference };

struct ResidualField {
    std::vector<double> z;  // nz
    std::vector<double> t;  // nt
    std::vector<double> r1; // nz*nt, z-major rows per t
    std::vector<double> r2;
    std::vector<unsigned char> masked; // junction exclusion bands (UpperTH2)
    double min_r1 = 0.0, max_r1 = 0.0;
    double min_r2 = 0.0, max_r2 = 0.0;

    double at_r1(int iz, int it) const { return r1[static_cast<std::size_t>(it) * z.size() + iz]; }
    double at_r2(int iz, int it) const { return r2[static_cast<std::size_t>(it) * z.size() + iz]; }
};

namespace detail {

/// Convolution int J(y) f(z - y) dy by adaptive quadrature over the widened
/// kernel support, split at the candidate's junction lines so every piece of
/// the integrand is smooth.
template <class F>
double convolve_candidate(const Kernel& kern, const F& f, double z, const double* junctions,
                          int n_junctions) {
    const double R = kern.wide_radius();
    double cuts[4] = {-R, R, 0, 0};
    int nc = 2;
    for (int j = 0; j < n_junctions; ++j) {
        const double y = z - junctions[j];
        if (y > -R && y < R) cuts[nc++] = y;
    }
    std::sort(cuts, cuts + nc);
    double total = 0.0;
    for (int i = 0; i + 1 < nc; ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        if (b - a < 1e-14) continue;
        total += integrate_adaptive([&](double y) { return kern.density(y) * f(z - y); }, a, b,
                                    1e-10);
    }
    return total;
}

} // namespace detail

/// Residual fields of the wave-profile operator at the candidate:
///   R1 = d1 (J1*Phi - Phi) - c Phi_z - Phi_t + Phi [a1 p (1-Phi) - b1 q (1-Psi)]
///   R2 = d2 (J2*Psi - Psi) - c Psi_z - Psi_t + (1-Psi)[a2 p Phi - b2 q Psi]
/// A lower solution needs R >= 0, an upper solution R <= 0. For the piecewise
/// UpperTH2 candidate the junction lines are excluded by a band of one grid
/// step on each side, and partial derivatives are one-sided closed forms.
inline ResidualField residuals(const Model& m, const ProfileCandidate& cand,
                               double z_min = -40.0, double z_max = 40.0, double dz = 0.1,
                               int t_samples = 64, DerivMode mode = DerivMode::Analytic,
                               double fd_step = 1e-4) {
    if (!(z_max - z_min >= 80.0))
        throw std::invalid_argument("residuals: z-range must cover the transition zone (>= 80)");
    const double T = m.period();
    const int nz = static_cast<int>(std::llround((z_max - z_min) / dz)) + 1;
    ResidualField field;
    field.z.resize(static_cast<std::size_t>(nz));
    for (int i = 0; i < nz; ++i) field.z[static_cast<std::size_t>(i)] = z_min + i * dz;
    field.t.resize(static_cast<std::size_t>(t_samples));
    field.r1.assign(static_cast<std::size_t>(nz) * t_samples, 0.0);
    field.r2.assign(static_cast<std::size_t>(nz) * t_samples, 0.0);
    field.masked.assign(static_cast<std::size_t>(nz) * t_samples, 0);

    const double mu = cand.mu();
    const double c = cand.c;

    for (int it = 0; it < t_samples; ++it) {
        const double t = it * T / t_samples;
        field.t[static_cast<std::size_t>(it)] = t;
        const double d1 = m.params().d1.eval(t), d2 = m.params().d2.eval(t);
        const double a1p = m.params().a1.eval(t) * m.p().eval(t);
        const double b1q = m.params().b1.eval(t) * m.q().eval(t);
        const double a2p = m.params().a2.eval(t) * m.p().eval(t);
        const double b2q = m.params().b2.eval(t) * m.q().eval(t);
        const double ld = phi1_log_deriv(m, mu, c, t);

        double junctions[2] = {0.0, 0.0};
        int n_junctions = 0;
        double zj1 = 0.0, zj2 = 0.0;
        if (cand.kind == CandidateKind::UpperTH2) {
            zj1 = cand.z1(t);
            zj2 = cand.z2(t);
            junctions[0] = zj1;
            junctions[1] = zj2;
            n_junctions = 2;
        }

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
        for (int iz = 0; iz < nz; ++iz) {
            const double z = field.z[static_cast<std::size_t>(iz)];
            const std::size_t idx = static_cast<std::size_t>(it) * nz + iz;
            if (cand.kind == CandidateKind::UpperTH2 &&
                (std::abs(z - zj1) <= dz || std::abs(z - zj2) <= dz))
                field.masked[idx] = 1;

            const double Phi = cand.phi(z, t);
            const double Psi = cand.psi(z, t);
            const double s = cand.sigmoid(z, t);
            const double sz = mu * s * (1.0 - s);
            const double st = ld * s * (1.0 - s);

            double Phi_z, Phi_t, Psi_z, Psi_t;
            if (cand.kind == CandidateKind::LowerTH1) {
                Phi_z = cand.k * sz;
                Phi_t = cand.k * st;
                Psi_z = sz;
                Psi_t = st;
            } else {
                const bool on_sig = z >= zj1;
                Phi_z = on_sig ? sz : 0.0;
                Phi_t = on_sig ? st : 0.0;
                const bool below = z <= zj2;
                Psi_z = below ? cand.k * Phi_z : 0.0;
                Psi_t = below ? cand.k * Phi_t : 0.0;
            }
            if (mode == DerivMode::FiniteDifference) {
                Phi_z = (cand.phi(z + fd_step, t) - cand.phi(z - fd_step, t)) / (2.0 * fd_step);
                Psi_z = (cand.psi(z + fd_step, t) - cand.psi(z - fd_step, t)) / (2.0 * fd_step);
                Phi_t = (cand.phi(z, t + fd_step) - cand.phi(z, t - fd_step)) / (2.0 * fd_step);
                Psi_t = (cand.psi(z, t + fd_step) - cand.psi(z, t - fd_step)) / (2.0 * fd_step);
            }

            const double conv1 = detail::convolve_candidate(
                m.params().kernel1, [&](double zz) { return cand.phi(zz, t); }, z, junctions,
                n_junctions);
            const double conv2 = detail::convolve_candidate(
                m.params().kernel2, [&](double zz) { return cand.psi(zz, t); }, z, junctions,
                n_junctions);

            field.r1[idx] = d1 * (conv1 - Phi) - c * Phi_z - Phi_t +
                            Phi * (a1p * (1.0 - Phi) - b1q * (1.0 - Psi));
            field.r2[idx] = d2 * (conv2 - Psi) - c * Psi_z - Psi_t +
                            (1.0 - Psi) * (a2p * Phi - b2q * Psi);
        }
    }
    bool first = true;
    for (std::size_t idx = 0; idx < field.r1.size(); ++idx) {
        if (field.masked[idx]) continue;
        if (first) {
            field.min_r1 = field.max_r1 = field.r1[idx];
            field.min_r2 = field.max_r2 = field.r2[idx];
            first = false;
        } else {
            field.min_r1 = std::min(field.min_r1, field.r1[idx]);
            field.max_r1 = std::max(field.max_r1, field.r1[idx]);
            field.min_r2 = std::min(field.min_r2, field.r2[idx]);
            field.max_r2 = std::max(field.max_r2, field.r2[idx]);
        }
    }
    return field;
}

struct ResidualSummary {
    CandidateKind kind = CandidateKind::LowerTH1;
    double min_r1 = 0.0, max_r1 = 0.0;
    double min_r2 = 0.0, max_r2 = 0.0;
    bool pass = false;
};

/// Sign verdict for a residual field: lower solutions need both minima above
/// -tol, upper solutions both maxima below +tol.
inline ResidualSummary summarize(const ProfileCandidate& cand, const ResidualField& f,
                                 double tol = 1e-6) {
    ResidualSummary s;
    s.kind = cand.kind;
    s.min_r1 = f.min_r1;
    s.max_r1 = f.max_r1;
    s.min_r2 = f.min_r2;
    s.max_r2 = f.max_r2;
    s.pass = cand.kind == CandidateKind::LowerTH1
                 ? (f.min_r1 >= -tol && f.min_r2 >= -tol)
                 : (f.max_r1 <= tol && f.max_r2 <= tol);
    return s;
}

} // namespace wavesign
