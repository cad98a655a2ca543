// Command-line front end: certifies the propagation direction of the
// periodic two-species competition model with nonlocal dispersal and
// cross-validates the certificates by direct simulation.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "wavesign/wavesign.hpp"

namespace fs = std::filesystem;
using namespace wavesign;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    int tgrid = 2048;
    bool json = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "path to the model config file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", opts.out_dir, "output directory (default: [output] dir from config)");
    cmd->add_option("--tgrid", opts.tgrid, "t-grid resolution for the per-period checks")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--json", opts.json, "print the machine-readable JSON document");
}

struct Loaded {
    RunConfig config;
    Model model;
};

Loaded load(const CommonOpts& opts) {
    RunConfig rc = load_config_file(opts.config_path);
    Model model = Model::build(rc.model);
    if (!opts.out_dir.empty()) rc.out_dir = opts.out_dir;
    return {std::move(rc), std::move(model)};
}

int exit_code_for(Verdict v) { return v == Verdict::Inconclusive ? 2 : 0; }

void emit(const json& doc, const CommonOpts& opts, const std::string& summary) {
    if (opts.json)
        std::cout << doc.dump(2) << "\n";
    else
        std::cout << summary;
}

std::optional<MeasuredSpeed> run_simulation(const Loaded& in, FrontTrace* trace_out = nullptr) {
    if (!in.config.sim) return std::nullopt;
    const SimConfig& sc = *in.config.sim;
    validate_stability(in.model, sc);
    State initial = default_initial(in.model, sc.grid);

    std::optional<fs::path> dir;
    if (!in.config.out_dir.empty()) {
        dir = fs::path(in.config.out_dir);
        fs::create_directories(*dir);
    }
    auto sink = [&](const State& s, int step) {
        if (!dir) return;
        const fs::path p = *dir / ("snap_" + std::to_string(step) + ".csv");
        std::FILE* f = std::fopen(p.c_str(), "w");
        if (!f) throw std::runtime_error("cannot write " + p.string());
        write_snapshot_csv(f, in.model, sc.grid, s);
        std::fclose(f);
    };
    RunResult r = run(in.model, sc, std::move(initial), sink);
    MeasuredSpeed ms = measure_speed(r.trace, in.model.period());
    if (dir) {
        const fs::path p = *dir / "trace.csv";
        std::FILE* f = std::fopen(p.c_str(), "w");
        if (!f) throw std::runtime_error("cannot write " + p.string());
        write_trace_csv(f, r.trace, sc.front_level);
        std::fclose(f);
    }
    if (trace_out) *trace_out = r.trace;
    return ms;
}

ResidualSummary certify_candidate(const Model& m, const SignCertificate& cert, double k_opt,
                                  double s0_opt, double c_small_opt, double z_half, double dz,
                                  int tsamples) {
    if (cert.verdict == Verdict::Positive) {
        const SignCertificate band = th1_check(m);
        const double k = k_opt > 0.0 ? k_opt : 0.5 * (band.k_lo + band.k_hi);
        const double c_small = c_small_opt != 0.0 ? c_small_opt : 1e-3;
        const ProfileCandidate cand = build_lower_th1(m, k, c_small);
        return summarize(cand, residuals(m, cand, -z_half, z_half, dz, tsamples));
    }
    if (cert.verdict == Verdict::Negative) {
        const double s0 = s0_opt > 0.0 ? s0_opt : cert.s0.value_or(0.5);
        const SignCertificate band = th2_check(m, s0);
        const double k = k_opt > 0.0 ? k_opt : 0.5 * (band.k_lo + band.k_hi);
        const double c_small = c_small_opt != 0.0 ? c_small_opt : -1e-3;
        const ProfileCandidate cand = build_upper_th2(m, k, s0, c_small);
        return summarize(cand, residuals(m, cand, -z_half, z_half, dz, tsamples));
    }
    throw std::invalid_argument("certify: classification is inconclusive; pass --theorem");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"wavesign: propagation-direction certificates for periodic bistable "
                 "competition with nonlocal dispersal"};
    app.set_version_flag("--version", std::string("wavesign ") + version_string);
    app.require_subcommand(1);

    CommonOpts opts;

    auto* inspect = app.add_subcommand("inspect", "periodic states and condition checks");
    add_common(inspect, opts);

    auto* speeds = app.add_subcommand("speeds", "spreading speeds and the admissible interval");
    add_common(speeds, opts);

    auto* classify_cmd = app.add_subcommand("classify", "propagation-direction certificate");
    add_common(classify_cmd, opts);

    auto* certify_cmd =
        app.add_subcommand("certify", "residual check of the certified profile candidate");
    add_common(certify_cmd, opts);
    std::string theorem = "auto";
    double k_opt = 0.0, s0_opt = 0.0, c_small_opt = 0.0, z_half = 40.0, dz = 0.1;
    int tsamples = 64;
    certify_cmd->add_option("--theorem", theorem, "th1 | th2 | auto")
        ->check(CLI::IsMember({"th1", "th2", "auto"}));
    certify_cmd->add_option("--k", k_opt, "band constant (default: band midpoint)");
    certify_cmd->add_option("--s0", s0_opt, "junction level for th2");
    certify_cmd->add_option("--c-small", c_small_opt, "frame speed (default +-1e-3)");
    certify_cmd->add_option("--z-half", z_half, "half-width of the z grid");
    certify_cmd->add_option("--dz", dz, "z grid step");
    certify_cmd->add_option("--tsamples", tsamples, "t samples for the residual field");

    auto* simulate_cmd = app.add_subcommand("simulate", "direct integration and front tracking");
    add_common(simulate_cmd, opts);

    auto* report_cmd = app.add_subcommand("report", "full certification report");
    add_common(report_cmd, opts);
    bool no_sim = false, no_certify = false;
    report_cmd->add_flag("--no-sim", no_sim, "skip the simulation cross-check");
    report_cmd->add_flag("--no-certify", no_certify, "skip the residual certificate");

    CLI11_PARSE(app, argc, argv);

    try {
        const Loaded in = load(opts);
        const Model& m = in.model;

        if (*inspect) {
            const A2Check a2 = check_A2(m);
            const StrongCheck sc = check_strong(m.params());
            json j;
            j["p0"] = m.p0();
            j["q0"] = m.q0();
            j["averages"] = {{"a1p", m.a1p().mean()},
                             {"b1q", m.b1q().mean()},
                             {"a2p", m.a2p().mean()},
                             {"b2q", m.b2q().mean()}};
            j["a2_check"] = to_json(a2);
            j["strong_check"] = to_json(sc);
            char buf[256];
            std::snprintf(buf, sizeof buf,
                          "p0 = %.6f  q0 = %.6f\nbistable (A2): %s   strong condition: %s\n",
                          m.p0(), m.q0(), a2.holds ? "yes" : "no", sc.holds ? "yes" : "no");
            emit(j, opts, buf);
            return a2.holds ? 0 : 2;
        }

        if (*speeds) {
            const SpreadingSpeed cm = spreading_speed_minus(m);
            const SpreadingSpeed cp = spreading_speed_plus(m);
            const PeriodicEigenData e = eigen_data(m, 0.0);
            json j;
            j["c_star_minus"] = cm.c_star;
            j["c_star_plus"] = cp.c_star;
            j["interval"] = {{"lo", -cp.c_star}, {"hi", cm.c_star}};
            j["mu_star"] = {{"minus", cm.mu_star}, {"plus", cp.mu_star}};
            j["mu_at_0"] = {{"mu1", e.mu1.mu}, {"mu2", e.mu2.mu}, {"mu3", e.mu3.mu},
                            {"mu4", e.mu4.mu}};
            char buf[256];
            std::snprintf(buf, sizeof buf,
                          "c*- = %.8f (mu* %.6f)\nc*+ = %.8f (mu* %.6f)\nspeed interval "
                          "[%.8f, %.8f]\n",
                          cm.c_star, cm.mu_star, cp.c_star, cp.mu_star, -cp.c_star, cm.c_star);
            emit(j, opts, buf);
            return 0;
        }

        if (*classify_cmd) {
            const SignCertificate cert = classify(m, opts.tgrid);
            char buf[512];
            std::snprintf(buf, sizeof buf,
                          "verdict: %s (theorem %s)\nmu1(0) = %.8f\nworst margin %.6g at t = "
                          "%.6f\nband (%.6f, %.6f)%s\n",
                          to_string(cert.verdict), to_string(cert.theorem), cert.mu1_at_0,
                          cert.worst_margin, cert.worst_t, cert.k_lo, cert.k_hi,
                          cert.has_band ? "" : " [no single constant fits all t]");
            emit(to_json(cert), opts, buf);
            return exit_code_for(cert.verdict);
        }

        if (*certify_cmd) {
            SignCertificate cert;
            if (theorem == "th1")
                cert = th1_check(m, opts.tgrid);
            else if (theorem == "th2")
                cert = th2_check(m, s0_opt > 0.0 ? s0_opt : 0.5, opts.tgrid);
            else
                cert = classify(m, opts.tgrid);
            const ResidualSummary rs =
                certify_candidate(m, cert, k_opt, s0_opt, c_small_opt, z_half, dz, tsamples);
            char buf[512];
            std::snprintf(buf, sizeof buf,
                          "candidate: %s\nR1 in [%.3e, %.3e]\nR2 in [%.3e, %.3e]\nresult: %s\n",
                          rs.kind == CandidateKind::LowerTH1 ? "lower (positive speed)"
                                                             : "upper (negative speed)",
                          rs.min_r1, rs.max_r1, rs.min_r2, rs.max_r2,
                          rs.pass ? "PASS" : "FAIL");
            emit(to_json(rs), opts, buf);
            return rs.pass ? 0 : 1;
        }

        if (*simulate_cmd) {
            if (!in.config.sim) throw ConfigError("simulate: config has no [sim] section");
            FrontTrace trace;
            const std::optional<MeasuredSpeed> ms = run_simulation(in, &trace);
            json j;
            j["measured_speed"] = ms ? to_json(*ms) : json(nullptr);
            j["front"] = {{"t", trace.times}, {"X", trace.positions}};
            char buf[256];
            std::snprintf(buf, sizeof buf, "measured wave speed c = %+.6f (rms %.3e, %s)\n",
                          ms->c, ms->rms, ms->reliable ? "reliable" : "unreliable fit");
            emit(j, opts, buf);
            return 0;
        }

        if (*report_cmd) {
            const SignCertificate cert = classify(m, opts.tgrid);
            std::optional<ResidualSummary> rs;
            if (!no_certify && cert.verdict != Verdict::Inconclusive)
                rs = certify_candidate(m, cert, 0.0, 0.0, 0.0, 40.0, 0.1, 64);
            std::optional<MeasuredSpeed> ms;
            if (!no_sim) ms = run_simulation(in);
            const json doc = build_speed_report(m, in.config.raw_text, cert, ms, rs);
            if (!in.config.out_dir.empty()) {
                fs::create_directories(in.config.out_dir);
                std::ofstream out(fs::path(in.config.out_dir) / "report.json");
                out << doc.dump(2) << "\n";
            }
            std::string summary = std::string("verdict: ") + to_string(cert.verdict) + "\n";
            if (cert.interval)
                summary += "interval [" + std::to_string(cert.interval->lo) + ", " +
                           std::to_string(cert.interval->hi) + "]\n";
            summary += "measured c: " + (ms ? std::to_string(ms->c) : "(skipped)") + "\n";
            summary +=
                "residuals: " + std::string(rs ? (rs->pass ? "PASS" : "FAIL") : "(skipped)") +
                "\n";
            emit(doc, opts, summary);
            return exit_code_for(cert.verdict);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
