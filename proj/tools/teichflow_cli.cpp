// Command-line frontend for the flow laboratory: runs earthquake and
// horocycle trajectories, computes Teichmueller distances by both routes,
// emits convergence traces/reports/plots, and hosts the acceptance selftest.
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure,
// 3 inconclusive limit detection.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "teichflow/teichflow.hpp"

namespace tf = teichflow;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitInconclusive = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw tf::ConfigError("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw tf::ConfigError("cannot write " + path);
    out << content;
}

tf::TorusPoint parse_tau(const std::string& text) {
    std::size_t comma = text.find(',');
    if (comma == std::string::npos)
        throw tf::ConfigError("expected re,im but got \"" + text + "\"");
    char* end = nullptr;
    double re = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + comma) throw tf::ConfigError("bad real part in \"" + text + "\"");
    double im = std::strtod(text.c_str() + comma + 1, &end);
    if (end != text.c_str() + text.size()) throw tf::ConfigError("bad imaginary part in \"" + text + "\"");
    return tf::TorusPoint(re, im);
}

tf::FlowConfig load_config(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw tf::ConfigError(std::string("config parse: ") + e.what());
    }
    return tf::config_from_json(j);
}

// Runs the configured flow and writes trace/report files. Used by the
// earthquake, horocycle and boundary-trace subcommands.
int run_and_write(const tf::FlowConfig& cfg, const std::string& out_path,
                  const std::string& report_path, bool require_limit,
                  const std::optional<std::string>& target_slope) {
    tf::FlowTrace trace = tf::run_flow(cfg);
    if (!out_path.empty()) write_file(out_path, tf::trace_to_csv(trace));

    std::optional<tf::ProjectiveVector> target;
    std::optional<tf::FoliationVector> quake_dir;
    if (cfg.flow == tf::Flow::earthquake) {
        quake_dir = cfg.direction.foliation();
        target = tf::foliation_vec(*quake_dir, trace.family);
    } else if (cfg.flow == tf::Flow::horocycle) {
        target = tf::foliation_vec(tf::invariant_foliation(cfg.base_qd), trace.family);
    }
    if (target_slope) target = tf::foliation_vec(tf::parse_slope(*target_slope), trace.family);

    tf::ConvergenceReport rep = tf::convergence_report(
        trace, target, cfg.tol, cfg.window, quake_dir,
        cfg.backend == tf::Backend::torus);
    if (!report_path.empty())
        write_file(report_path, tf::report_to_json(rep).dump(2) + "\n");

    if (require_limit && !rep.limit) {
        std::cerr << "limit detection inconclusive within the schedule\n";
        return kExitInconclusive;
    }
    if (rep.pass && !*rep.pass) {
        std::cerr << "detected limit misses the target by "
                  << tf::format_number(*rep.target_distance) << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int cmd_selftest(const std::string& outdir, double epsilon_tol) {
    tf::SelftestOptions opt;
    opt.epsilon_ratio_tol = epsilon_tol;

    if (!outdir.empty()) {
        std::filesystem::create_directories(outdir);
        tf::SelftestArtifacts art = tf::make_artifacts();
        write_file(outdir + "/trace.csv", art.trace_csv);
        write_file(outdir + "/report.json", art.report_json);
        write_file(outdir + "/plot.svg", art.plot_svg);
    }

    auto results = tf::run_acceptance(opt);
    bool all = true;
    std::printf("%-4s %-42s %-6s %s\n", "#", "criterion", "status", "detail");
    for (const auto& r : results) {
        all = all && r.pass;
        std::printf("%-4d %-42s %-6s %s\n", r.index, r.name.c_str(),
                    r.pass ? "PASS" : "FAIL", r.detail.c_str());
    }
    std::printf("%s\n", all ? "all criteria passed" : "FAILURES present");
    return all ? kExitOk : kExitNumerical;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"teichflow: flows on exactly computable torus models of Teichmueller space"};
    app.require_subcommand(1);

    // distance
    std::string tau1_text, tau2_text, method = "closed";
    auto* distance = app.add_subcommand(
        "distance", "Teichmueller distance between two marked flat tori "
                    "(closed hyperbolic form and certified slope search)");
    distance->add_option("--tau1", tau1_text, "first point, re,im")->required();
    distance->add_option("--tau2", tau2_text, "second point, re,im")->required();
    distance->add_option("--method", method, "closed | farey | both")
        ->check(CLI::IsMember({"closed", "farey", "both"}));

    // earthquake / horocycle / boundary-trace share config-driven plumbing
    std::string cfg_path, out_path, report_path;
    std::optional<std::string> target_slope;
    std::optional<int> ov_depth, ov_count, ov_window;
    std::optional<double> ov_t0, ov_ratio, ov_tol;
    auto add_flow_options = [&](CLI::App* sub, bool report_required) {
        sub->add_option("--config", cfg_path, "flow configuration JSON")->required();
        sub->add_option("--out", out_path, "trace CSV output path");
        auto* rep = sub->add_option("--report", report_path, "convergence report JSON path");
        if (report_required) rep->required();
        sub->add_option("--target", target_slope,
                        "expected limit slope p/q (defaults to the flow's own class)");
        sub->add_option("--depth", ov_depth, "override the curve-family depth");
        sub->add_option("--t0", ov_t0, "override the schedule start time");
        sub->add_option("--ratio", ov_ratio, "override the schedule ratio");
        sub->add_option("--count", ov_count, "override the schedule sample count");
        sub->add_option("--tol", ov_tol, "override the limit-detection tolerance");
        sub->add_option("--window", ov_window, "override the limit-detection window");
    };
    auto apply_overrides = [&](tf::FlowConfig& cfg) {
        if (ov_depth) cfg.depth = *ov_depth;
        if (ov_t0) cfg.schedule.t0 = *ov_t0;
        if (ov_ratio) cfg.schedule.ratio = *ov_ratio;
        if (ov_count) cfg.schedule.count = *ov_count;
        if (ov_tol) cfg.tol = *ov_tol;
        if (ov_window) cfg.window = *ov_window;
        cfg.validate();
        tf::build_schedule(cfg.schedule);
    };
    auto* earthquake = app.add_subcommand(
        "earthquake", "run an earthquake trajectory; the trace records "
                      "length functionals converging to the twisting class");
    add_flow_options(earthquake, false);
    auto* horocycle = app.add_subcommand(
        "horocycle", "run a horocycle trajectory of a unit-area quadratic "
                     "differential; scaled flat lengths approach the "
                     "flow-invariant foliation");
    add_flow_options(horocycle, false);
    auto* boundary = app.add_subcommand(
        "boundary-trace", "run any configured flow and grade its projective "
                          "limit against the expected boundary class");
    add_flow_options(boundary, true);

    // quasiconvex
    std::string qc_cfg, qc_gamma, qc_out;
    auto* quasiconvex = app.add_subcommand(
        "quasiconvex", "estimate the quasiconvexity constant of an extremal "
                       "length along a configured earthquake path");
    quasiconvex->add_option("--config", qc_cfg, "flow configuration JSON")->required();
    quasiconvex->add_option("--gamma", qc_gamma, "curve class p/q to track")->required();
    quasiconvex->add_option("--out", qc_out, "write {gamma, K} JSON here");

    // plot
    std::string plot_trace, plot_out;
    auto* plot = app.add_subcommand("plot", "render log-log convergence curves from a trace CSV");
    plot->add_option("--trace", plot_trace, "trace CSV path")->required();
    plot->add_option("--out", plot_out, "SVG output path")->required();

    // selftest
    std::string selftest_dir = "selftest_artifacts";
    double selftest_eps_tol = 5e-3;
    auto* selftest = app.add_subcommand(
        "selftest", "run the acceptance suite and write deterministic artifacts");
    selftest->add_option("--outdir", selftest_dir, "artifact directory");
    selftest->add_option("--epsilon-ratio-tol", selftest_eps_tol,
                         "tail tolerance demanded of the boundary-function ratio");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (distance->parsed()) {
            tf::TorusPoint t1 = parse_tau(tau1_text), t2 = parse_tau(tau2_text);
            if (method == "closed" || method == "both")
                std::printf("%s\n", tf::format_number(tf::teich_dist(t1, t2)).c_str());
            if (method == "farey" || method == "both")
                std::printf("%s\n", tf::format_number(tf::teich_dist_farey(t1, t2)).c_str());
            return kExitOk;
        }
        if (earthquake->parsed() || horocycle->parsed() || boundary->parsed()) {
            tf::FlowConfig cfg = load_config(cfg_path);
            apply_overrides(cfg);
            if (earthquake->parsed() && cfg.flow != tf::Flow::earthquake)
                throw tf::ConfigError("earthquake subcommand requires an earthquake flow config");
            if (horocycle->parsed() && cfg.flow != tf::Flow::horocycle)
                throw tf::ConfigError("horocycle subcommand requires a horocycle flow config");
            return run_and_write(cfg, out_path, report_path, boundary->parsed(), target_slope);
        }
        if (quasiconvex->parsed()) {
            tf::FlowConfig cfg = load_config(qc_cfg);
            if (cfg.flow != tf::Flow::earthquake || cfg.backend != tf::Backend::torus)
                throw tf::ConfigError("quasiconvex expects a torus earthquake config");
            tf::Slope gamma = tf::parse_slope(qc_gamma);
            tf::FlowTrace trace = tf::run_flow(cfg);
            int gi = tf::family_index(trace.family, gamma);
            if (gi < 0) throw tf::ConfigError("gamma is outside the configured family depth");
            std::vector<std::pair<double, double>> samples;
            for (const tf::FlowSample& sm : trace.samples)
                samples.emplace_back(sm.t, sm.raw[std::size_t(gi)] * sm.raw[std::size_t(gi)]);
            double k = tf::quasiconvex_K(samples);
            if (!qc_out.empty()) {
                nlohmann::ordered_json j;
                j["gamma"] = tf::to_string(gamma);
                if (std::isinf(k)) j["K"] = "inf";
                else j["K"] = k;
                write_file(qc_out, j.dump(2) + "\n");
            }
            std::printf("%s\n", tf::format_number(k).c_str());
            return kExitOk;
        }
        if (plot->parsed()) {
            tf::FlowTrace trace = tf::trace_from_csv(read_file(plot_trace));
            write_file(plot_out, tf::emit_plot_svg(trace));
            return kExitOk;
        }
        if (selftest->parsed()) return cmd_selftest(selftest_dir, selftest_eps_tol);
    } catch (const tf::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const tf::InsufficientData& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return kExitInconclusive;
    } catch (const tf::Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitConfig;
}
