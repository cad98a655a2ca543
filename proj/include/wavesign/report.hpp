#pragma once

#include <chrono>
#include <cstdio>
#include <optional>
#include <string>

#include <json.hpp>

#include "wavesign/certify.hpp"
#include "wavesign/config.hpp"
#include "wavesign/model.hpp"
#include "wavesign/simulate.hpp"
#include "wavesign/speedsign.hpp"
#include "wavesign/version.hpp"

namespace wavesign {

using json = nlohmann::json;

inline json to_json(const A2Check& c) {
    return {{"integral1", c.integral1}, {"integral2", c.integral2}, {"holds", c.holds}};
}

inline json to_json(const StrongCheck& c) {
    return {{"holds", c.holds},
            {"lhs1", c.lhs1},
            {"rhs1", c.rhs1},
            {"lhs2", c.lhs2},
            {"rhs2", c.rhs2}};
}

inline json to_json(const SpeedInterval& iv) { return {{"lo", iv.lo}, {"hi", iv.hi}}; }

inline json to_json(const SignCertificate& cert) {
    json j;
    j["verdict"] = to_string(cert.verdict);
    j["theorem"] = to_string(cert.theorem);
    j["mu1_at_0"] = cert.mu1_at_0;
    if (cert.has_band)
        j["k_interval"] = {{"lo", cert.k_lo}, {"hi", cert.k_hi}};
    else
        j["k_interval"] = nullptr;
    j["s0"] = cert.s0 ? json(*cert.s0) : json(nullptr);
    j["worst_t"] = cert.worst_t;
    j["worst_margin"] = cert.worst_margin;
    j["evidence"] = cert.evidence;
    j["per_t_margins"] = {{"t", cert.t_grid}, {"margin", cert.margin}};
    j["asymmetric_kernel_warning"] = cert.asymmetric_kernel_warning;
    if (cert.interval) j["interval"] = to_json(*cert.interval);
    return j;
}

inline json to_json(const MeasuredSpeed& ms) {
    return {{"c", ms.c},
            {"rms", ms.rms},
            {"reliable", ms.reliable},
            {"samples_used", ms.samples_used}};
}

inline json to_json(const ResidualSummary& rs) {
    return {{"kind", rs.kind == CandidateKind::LowerTH1 ? "lower_th1" : "upper_th2"},
            {"min_r1", rs.min_r1},
            {"max_r1", rs.max_r1},
            {"min_r2", rs.min_r2},
            {"max_r2", rs.max_r2},
            {"pass", rs.pass}};
}

inline std::string config_hash(const std::string& raw) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64-%016llx",
                  static_cast<unsigned long long>(fnv1a64(raw)));
    return buf;
}

inline json provenance(const std::string& raw, bool with_timestamp = true) {
    json j;
    j["config_hash"] = config_hash(raw);
    j["version"] = version_string;
    if (with_timestamp) {
        const auto now = std::chrono::system_clock::now();
        j["generated_at"] =
            std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    }
    return j;
}

/// Full certification report: condition checks, spreading speeds, the sign
/// certificate, and (when available) the measured simulation speed and the
/// candidate residual summary.
inline json build_speed_report(const Model& m, const std::string& raw_config,
                               const SignCertificate& cert,
                               const std::optional<MeasuredSpeed>& measured,
                               const std::optional<ResidualSummary>& residual_summary,
                               bool with_timestamp = true) {
    json j;
    j["a2_check"] = to_json(check_A2(m));
    j["strong_check"] = to_json(check_strong(m.params()));
    const SpeedInterval iv = cert.interval ? *cert.interval : speed_interval(m);
    j["c_star_minus"] = iv.hi;
    j["c_star_plus"] = -iv.lo;
    j["interval"] = to_json(iv);
    j["certificate"] = to_json(cert);
    if (measured) {
        j["measured_speed"] = to_json(*measured);
        j["measured_in_interval"] = iv.widened(0.10).contains(measured->c);
    } else {
        j["measured_speed"] = nullptr;
        j["measured_in_interval"] = nullptr;
    }
    j["residual_summary"] = residual_summary ? to_json(*residual_summary) : json(nullptr);
    j["provenance"] = provenance(raw_config, with_timestamp);
    return j;
}

} // namespace wavesign
