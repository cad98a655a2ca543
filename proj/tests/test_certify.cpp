#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fixtures.hpp"
#include "wavesign/certify.hpp"

using namespace wavesign;
using Catch::Approx;

namespace {

/// Brute-force residual oracle, fully independent of certify.hpp: composite
/// Simpson convolution split at the junction lines, centered differences for
/// the partial derivatives, reaction terms written out directly.
std::pair<double, double> residual_oracle(const Model& m, const ProfileCandidate& cand, double z,
                                          double t) {
    const double R = m.params().kernel1.wide_radius();
    auto conv = [&](auto&& field, const Kernel& k) {
        std::vector<double> cuts{-R, R};
        if (cand.kind == CandidateKind::UpperTH2) {
            for (double zj : {cand.z1(t), cand.z2(t)}) {
                const double y = z - zj;
                if (y > -R && y < R) cuts.push_back(y);
            }
        }
        std::sort(cuts.begin(), cuts.end());
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            total += integrate_refined([&](double y) { return k.density(y) * field(z - y); },
                                       cuts[i], cuts[i + 1], 1e-12, 256);
        return total;
    };
    auto Phi = [&](double zz) { return cand.phi(zz, t); };
    auto Psi = [&](double zz) { return cand.psi(zz, t); };
    const double h = 1e-5;
    const double Phi_z = (cand.phi(z + h, t) - cand.phi(z - h, t)) / (2 * h);
    const double Phi_t = (cand.phi(z, t + h) - cand.phi(z, t - h)) / (2 * h);
    const double Psi_z = (cand.psi(z + h, t) - cand.psi(z - h, t)) / (2 * h);
    const double Psi_t = (cand.psi(z, t + h) - cand.psi(z, t - h)) / (2 * h);
    const double a1p = m.params().a1.eval(t) * m.p().eval(t);
    const double b1q = m.params().b1.eval(t) * m.q().eval(t);
    const double a2p = m.params().a2.eval(t) * m.p().eval(t);
    const double b2q = m.params().b2.eval(t) * m.q().eval(t);
    const double P = cand.phi(z, t), S = cand.psi(z, t);
    const double r1 = m.params().d1.eval(t) * (conv(Phi, m.params().kernel1) - P) -
                      cand.c * Phi_z - Phi_t + P * (a1p * (1.0 - P) - b1q * (1.0 - S));
    const double r2 = m.params().d2.eval(t) * (conv(Psi, m.params().kernel2) - S) -
                      cand.c * Psi_z - Psi_t + (1.0 - S) * (a2p * P - b2q * S);
    return {r1, r2};
}

} // namespace

TEST_CASE("profile candidate construction", "[certify]") {
    const Model m1 = Model::build(fixtures::example1());
    const SignCertificate t1 = th1_check(m1);
    const double k1 = 0.5 * (t1.k_lo + t1.k_hi);
    const ProfileCandidate lower = build_lower_th1(m1, k1, 1e-3);

    SECTION("limits and proportionality of the lower pair") {
        for (double t : {0.0, 1.3}) {
            CHECK(lower.phi(-500.0, t) == Approx(0.0).margin(1e-30));
            CHECK(lower.psi(-500.0, t) == Approx(0.0).margin(1e-30));
            CHECK(lower.phi(500.0, t) == Approx(k1).margin(1e-12));
            CHECK(lower.psi(500.0, t) == Approx(1.0).margin(1e-12));
            for (double z : {-3.0, 0.0, 2.5})
                CHECK(lower.psi(z, t) == Approx(lower.phi(z, t) / k1).epsilon(1e-14));
            // increasing in z
            double prev = lower.phi(-20.0, t);
            for (double z = -18.0; z <= 20.0; z += 2.0) {
                CHECK(lower.phi(z, t) > prev);
                prev = lower.phi(z, t);
            }
        }
    }

    SECTION("k1 outside the band is refused") {
        CHECK_THROWS_AS(build_lower_th1(m1, t1.k_hi + 0.05, 1e-3), std::invalid_argument);
        CHECK_THROWS_AS(build_lower_th1(m1, t1.k_lo - 0.05, 1e-3), std::invalid_argument);
    }
    SECTION("frame speed must be small and positive") {
        CHECK_THROWS_AS(build_lower_th1(m1, k1, -1e-3), std::invalid_argument);
        CHECK_THROWS_AS(build_lower_th1(m1, k1, 1.0), std::invalid_argument);
    }

    const Model m2 = Model::build(fixtures::example2());
    const SignCertificate t2 = th2_check(m2, 0.81);
    const double k4 = 0.5 * (t2.k_lo + t2.k_hi);
    const ProfileCandidate upper = build_upper_th2(m2, k4, 0.81, -1e-3);

    SECTION("junction continuity of the piecewise pair") {
        for (double t : {0.0, 0.9, 2.1}) {
            const double z1 = upper.z1(t), z2 = upper.z2(t);
            CHECK(z1 < z2); // k4 s0 < 1 guarantees a nonempty sigmoid stretch
            CHECK(upper.sigmoid(z1, t) == Approx(0.81).epsilon(1e-12));
            CHECK(upper.phi(z1 - 1e-9, t) == Approx(upper.phi(z1 + 1e-9, t)).margin(1e-8));
            CHECK(upper.k * upper.sigmoid(z2, t) == Approx(1.0).epsilon(1e-12));
            CHECK(upper.psi(z2 - 1e-9, t) == Approx(upper.psi(z2 + 1e-9, t)).margin(1e-8));
            CHECK(upper.psi(z2 + 10.0, t) == 1.0);
            CHECK(upper.phi(z1 - 10.0, t) == 0.81);
        }
    }
    SECTION("k4 envelope and sign of the frame speed are enforced") {
        CHECK_THROWS_AS(build_upper_th2(m2, 2.0, 0.81, -1e-3), std::invalid_argument);
        CHECK_THROWS_AS(build_upper_th2(m2, k4, 0.81, 1e-3), std::invalid_argument);
    }
}

TEST_CASE("residual fields against the brute-force oracle", "[certify]") {
    const Model m1 = Model::build(fixtures::example1());
    const SignCertificate t1 = th1_check(m1);
    const ProfileCandidate lower = build_lower_th1(m1, 0.5 * (t1.k_lo + t1.k_hi), 1e-3);

    const Model m2 = Model::build(fixtures::example2());
    const SignCertificate t2 = th2_check(m2, 0.81);
    const ProfileCandidate upper = build_upper_th2(m2, 0.5 * (t2.k_lo + t2.k_hi), 0.81, -1e-3);

    const ResidualField f1 = residuals(m1, lower, -40, 40, 0.5, 8);
    const ResidualField f2 = residuals(m2, upper, -40, 40, 0.5, 8);

    auto check_point = [&](const Model& m, const ProfileCandidate& cand,
                           const ResidualField& field, int iz, int it) {
        const auto [r1, r2] = residual_oracle(m, cand, field.z[iz], field.t[it]);
        CHECK(field.at_r1(iz, it) == Approx(r1).margin(2e-5));
        CHECK(field.at_r2(iz, it) == Approx(r2).margin(2e-5));
    };
    for (int iz : {20, 80, 100, 140})
        for (int it : {0, 3, 6}) {
            check_point(m1, lower, f1, iz, it);
            if (!f2.masked[static_cast<std::size_t>(it) * f2.z.size() + iz])
                check_point(m2, upper, f2, iz, it);
        }
}

TEST_CASE("lower candidate satisfies the differential inequalities", "[certify]") {
    const Model m = Model::build(fixtures::example1());
    const SignCertificate cert = th1_check(m);
    const ProfileCandidate lower = build_lower_th1(m, 0.5 * (cert.k_lo + cert.k_hi), 1e-3);
    const ResidualField f = residuals(m, lower, -40, 40, 0.2, 24);
    CHECK(f.min_r1 >= -1e-6);
    CHECK(f.min_r2 >= -1e-6);
    const ResidualSummary s = summarize(lower, f);
    CHECK(s.pass);
    // the residual fades toward the equilibrium limit (0,0) on the left; on
    // the right the pair tends to (k1, 1), which is not an equilibrium, and
    // the residual tends to the positive slack k1 a1p (1 - k1)
    CHECK(std::abs(f.at_r1(0, 0)) < 1e-4);
    const double t0 = f.t[0];
    const double slack = lower.k * m.params().a1.eval(t0) * m.p().eval(t0) * (1.0 - lower.k);
    CHECK(f.at_r1(static_cast<int>(f.z.size()) - 1, 0) == Approx(slack).margin(1e-3));
}

TEST_CASE("piecewise upper candidate violates its inequality near the lower junction",
          "[certify]") {
    // The printed piecewise pair drops the convolution mismatch between the
    // constant plateau and the sigmoid; at dispersal rates of order 100 the
    // dropped term exceeds the reaction margin in a neighborhood of z1(t),
    // independently of where k4 is placed in the (inverted) band. The
    // residual field reports that honestly.
    const Model m = Model::build(fixtures::example2());
    const SignCertificate cert = th2_check(m, 0.81);
    const ProfileCandidate upper = build_upper_th2(m, 0.5 * (cert.k_lo + cert.k_hi), 0.81, -1e-3);
    const ResidualField f = residuals(m, upper, -40, 40, 0.2, 24);
    CHECK(f.max_r1 > 0.1);
    CHECK(f.max_r2 > 0.1);
    CHECK_FALSE(summarize(upper, f).pass);
    // locate the worst first-component violation: it sits within a few kernel
    // widths left of z1(t)
    double worst = -1e300, worst_z = 0.0, worst_t = 0.0;
    for (std::size_t it = 0; it < f.t.size(); ++it)
        for (std::size_t iz = 0; iz < f.z.size(); ++iz) {
            if (f.masked[it * f.z.size() + iz]) continue;
            if (f.at_r1(static_cast<int>(iz), static_cast<int>(it)) > worst) {
                worst = f.at_r1(static_cast<int>(iz), static_cast<int>(it));
                worst_z = f.z[iz];
                worst_t = f.t[it];
            }
        }
    const double z1 = upper.z1(worst_t);
    CHECK(worst_z > z1 - 6.0);
    CHECK(worst_z < z1 + 2.0);
}

TEST_CASE("finite-difference derivative mode converges at second order", "[certify]") {
    const Model m = Model::build(fixtures::example1());
    const SignCertificate cert = th1_check(m);
    const ProfileCandidate lower = build_lower_th1(m, 0.5 * (cert.k_lo + cert.k_hi), 1e-3);

    auto max_deviation = [&](double h) {
        const ResidualField a = residuals(m, lower, -40, 40, 2.0, 4, DerivMode::Analytic);
        const ResidualField b = residuals(m, lower, -40, 40, 2.0, 4, DerivMode::FiniteDifference, h);
        double dev = 0.0;
        for (std::size_t i = 0; i < a.r1.size(); ++i) {
            dev = std::max(dev, std::abs(a.r1[i] - b.r1[i]));
            dev = std::max(dev, std::abs(a.r2[i] - b.r2[i]));
        }
        return dev;
    };
    const double e1 = max_deviation(0.08);
    const double e2 = max_deviation(0.04);
    const double e3 = max_deviation(0.02);
    CHECK(e1 > 0.0);
    CHECK(e2 < e1 / 3.0); // ~4x per halving for a second-order stencil
    CHECK(e3 < e2 / 3.0);
}
