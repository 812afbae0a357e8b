#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "teichflow/boundary.hpp"
#include "teichflow/ptorus.hpp"
#include "teichflow/qdiff.hpp"
#include "teichflow/slopes.hpp"
#include "teichflow/torus.hpp"
#include "teichflow/trace.hpp"

namespace teichflow {

enum class Backend { torus, ptorus };
enum class Flow { earthquake, horocycle, geodesic };

/// Earthquake direction: either an exact weighted slope or a real direction vector.
struct Direction {
    std::optional<Slope> slope;
    double weight = 1.0;
    std::optional<FoliationVector> vector;

    FoliationVector foliation() const {
        if (slope) return FoliationVector::of(*slope, weight);
        if (vector) return *vector;
        throw ConfigError("Direction: no direction specified");
    }
};

struct Schedule {
    double t0 = 1.0;
    double ratio = 2.0;
    int count = 8;
};

/**
 * @brief Full description of one trajectory run: backend and flow kind, base
 *        point, direction, family depth, geometric schedule, and the limit
 *        detection parameters.
 */
struct FlowConfig {
    Backend backend = Backend::torus;
    Flow flow = Flow::earthquake;
    TorusPoint base_tau{0.0, 1.0};
    MarkovTriple base_triple{};
    MarkedQuadDiff base_qd{};
    Direction direction;
    int depth = 4;
    Schedule schedule;
    double tol = 1e-2;
    int window = 4;

    void validate() const {
        if ((flow == Flow::horocycle || flow == Flow::geodesic) && backend != Backend::torus)
            throw ConfigError("FlowConfig: horocycle and geodesic flows require the torus backend");
        if (backend == Backend::ptorus && flow == Flow::earthquake && !direction.slope)
            throw ConfigError("FlowConfig: punctured-torus earthquakes need a rational slope direction");
        if (depth < 0 || depth > 12) throw ConfigError("FlowConfig: depth out of range");
        if (window < 2) throw ConfigError("FlowConfig: window must be >= 2");
        if (!(tol > 0.0)) throw ConfigError("FlowConfig: tol must be positive");
    }
};

/// Geometric grid t_k = t0 * ratio^k, k = 0..count-1.
inline std::vector<double> build_schedule(double t0, double ratio, int count) {
    if (!(t0 > 0.0)) throw ConfigError("build_schedule: t0 must be positive");
    if (!(ratio > 1.0)) throw ConfigError("build_schedule: ratio must exceed 1");
    if (count < 2) throw ConfigError("build_schedule: count must be >= 2");
    std::vector<double> out;
    out.reserve(std::size_t(count));
    for (int k = 0; k < count; ++k) out.push_back(t0 * std::pow(ratio, k));
    return out;
}

inline std::vector<double> build_schedule(const Schedule& s) {
    return build_schedule(s.t0, s.ratio, s.count);
}

/**
 * @brief Runs the configured flow over its schedule and assembles the trace.
 *
 * Raw values are sqrt-extremal lengths for torus earthquakes and geodesics,
 * hyperbolic lengths for punctured-torus earthquakes, and scaled flat-length
 * currents for horocycles. Diagnostics ride along per sample so a failure is
 * attributable to a specific t. Output is deterministic.
 */
inline FlowTrace run_flow(const FlowConfig& cfg) {
    cfg.validate();
    CurveFamily fam = farey_family(cfg.depth);
    std::vector<double> ts = build_schedule(cfg.schedule);

    if (cfg.flow == Flow::horocycle)
        return current_limit_trace(cfg.base_qd, fam, ts);

    FlowTrace trace;
    trace.family = fam;

    if (cfg.flow == Flow::geodesic) {
        for (double t : ts) {
            MarkedQuadDiff qt = geodesic_step(cfg.base_qd, t);
            FlowSample sm;
            sm.t = t;
            sm.tau = project_tau(qt);
            for (const Slope& s : fam) sm.raw.push_back(flat_length(qt, s));
            sm.residual = double(std::fabs(qt.area() - 1.0L));
            sm.normalized = ProjectiveVector::normalized(fam, sm.raw).values;
            trace.append(std::move(sm));
        }
        return trace;
    }

    if (cfg.backend == Backend::torus) {
        FoliationVector mu = cfg.direction.foliation();
        double ext0 = ext_length(mu, cfg.base_tau);
        for (double t : ts) {
            TorusPoint tau = cfg.direction.slope
                ? earthquake_tau(cfg.base_tau, *cfg.direction.slope, cfg.direction.weight, t)
                : earthquake_tau(cfg.base_tau, mu, t);
            FlowSample sm;
            sm.t = t;
            sm.tau = tau;
            for (const Slope& s : fam) sm.raw.push_back(std::sqrt(ext_length(s, tau)));
            // The direction's own extremal length is constant along the flow.
            sm.residual = std::fabs(ext_length(mu, tau) - ext0) / ext0;
            sm.normalized = ProjectiveVector::normalized(fam, sm.raw).values;
            trace.append(std::move(sm));
        }
        return trace;
    }

    // Punctured-torus earthquake in trace coordinates.
    const Slope alpha = *cfg.direction.slope;
    const double weight = cfg.direction.weight;
    check_markov(cfg.base_triple);
    double len0 = hyp_length(cfg.base_triple, alpha);
    for (double t : ts) {
        MarkovTriple tt = eq_twist(cfg.base_triple, alpha, weight * t);
        FlowSample sm;
        sm.t = t;
        for (const Slope& s : fam) sm.raw.push_back(hyp_length(tt, s));
        double res = markov_residual(tt);
        res = std::max(res, std::fabs(hyp_length(tt, alpha) - len0) / len0);
        sm.residual = res;
        sm.normalized = ProjectiveVector::normalized(fam, sm.raw).values;
        trace.append(std::move(sm));
    }
    return trace;
}

/// Convergence summary of one trace, optionally against an expected target.
struct ConvergenceReport {
    std::optional<ProjectiveVector> limit;
    std::optional<double> rate;
    double tol = 0.0;
    int window = 0;
    std::optional<double> target_distance;
    std::optional<bool> pass;
    std::optional<double> lemma_constant; // empirical twist-asymptotics constant
    double max_residual = 0.0;
};

/**
 * @brief Runs limit detection on a trace and, when a target class is given,
 *        grades the detected limit against it.
 *
 * For earthquake traces the empirical twist constant is estimated from the
 * tail: the worst of ratio and 1/ratio where ratio compares the raw growth
 * against t * i(alpha, beta) (lengths) or t^2 * i^2 (extremal lengths).
 */
inline ConvergenceReport convergence_report(const FlowTrace& trace,
                                            const std::optional<ProjectiveVector>& target,
                                            double tol, int window,
                                            const std::optional<FoliationVector>& quake_dir = std::nullopt,
                                            bool raw_is_sqrt_ext = true) {
    if (trace.samples.empty()) throw InsufficientData("convergence_report: empty trace");
    ConvergenceReport rep;
    rep.tol = tol;
    rep.window = window;
    LimitDetection det = detect_limit(trace, tol, window);
    rep.limit = det.limit;
    rep.rate = det.rate;
    for (const FlowSample& sm : trace.samples)
        rep.max_residual = std::max(rep.max_residual, sm.residual);
    if (target && det.limit) {
        rep.target_distance = proj_dist(*det.limit, *target);
        rep.pass = *rep.target_distance < tol;
    }
    if (quake_dir) {
        // ratio compares raw growth against t^2 i(mu,beta)^2 (extremal
        // lengths) or t i(mu,beta) (hyperbolic lengths); the tail maximum of
        // max(ratio, 1/ratio) is a valid sandwich constant.
        double worst = 1.0;
        std::size_t n = trace.samples.size();
        for (std::size_t k = n - std::min<std::size_t>(n, 4); k < n; ++k) {
            const FlowSample& sm = trace.samples[k];
            if (!(sm.t > 0.0)) continue;
            for (std::size_t i = 0; i < trace.family.size(); ++i) {
                double inter = intersection(*quake_dir, trace.family[i]);
                if (inter <= 0.0) continue;
                double ratio = raw_is_sqrt_ext
                    ? (sm.raw[i] * sm.raw[i]) / (sm.t * sm.t * inter * inter)
                    : sm.raw[i] / (sm.t * inter);
                worst = std::max(worst, std::max(ratio, 1.0 / ratio));
            }
        }
        rep.lemma_constant = worst;
    }
    return rep;
}

// --- JSON bindings -------------------------------------------------------

inline FlowConfig config_from_json(const nlohmann::json& j) {
    try {
        FlowConfig cfg;
        std::string backend = j.at("backend").get<std::string>();
        if (backend == "torus") cfg.backend = Backend::torus;
        else if (backend == "ptorus") cfg.backend = Backend::ptorus;
        else throw ConfigError("config: unknown backend \"" + backend + "\"");

        std::string flow = j.at("flow").get<std::string>();
        if (flow == "earthquake") cfg.flow = Flow::earthquake;
        else if (flow == "horocycle") cfg.flow = Flow::horocycle;
        else if (flow == "geodesic") cfg.flow = Flow::geodesic;
        else throw ConfigError("config: unknown flow \"" + flow + "\"");

        const auto& base = j.at("base");
        if (cfg.flow == Flow::horocycle || cfg.flow == Flow::geodesic) {
            cfg.base_qd = make_qd({base.at("w1").at("re").get<double>(),
                                   base.at("w1").at("im").get<double>()},
                                  {base.at("w2").at("re").get<double>(),
                                   base.at("w2").at("im").get<double>()},
                                  base.value("normalize", false));
        } else if (cfg.backend == Backend::torus) {
            cfg.base_tau = TorusPoint(base.at("re").get<double>(), base.at("im").get<double>());
        } else {
            cfg.base_triple = MarkovTriple{base.at("x").get<double>(),
                                           base.at("y").get<double>(),
                                           base.at("z").get<double>()};
            check_markov(cfg.base_triple);
        }

        if (cfg.flow == Flow::earthquake) {
            const auto& dir = j.at("direction");
            if (dir.contains("slope")) {
                cfg.direction.slope = parse_slope(dir.at("slope").get<std::string>());
                cfg.direction.weight = dir.value("weight", 1.0);
                if (!(cfg.direction.weight > 0.0))
                    throw ConfigError("config: direction weight must be positive");
            } else {
                cfg.direction.vector =
                    FoliationVector(dir.at("a").get<double>(), dir.at("b").get<double>());
            }
        }

        cfg.depth = j.value("depth", 4);
        const auto& sch = j.at("schedule");
        cfg.schedule.t0 = sch.at("t0").get<double>();
        cfg.schedule.ratio = sch.at("ratio").get<double>();
        cfg.schedule.count = sch.at("count").get<int>();
        cfg.tol = j.value("tol", 1e-2);
        cfg.window = j.value("window", 4);
        cfg.validate();
        build_schedule(cfg.schedule); // surfaces schedule parameter errors early
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

inline nlohmann::ordered_json vector_to_json(const ProjectiveVector& v) {
    nlohmann::ordered_json j;
    std::vector<std::string> names;
    names.reserve(v.family.size());
    for (const Slope& s : v.family) names.push_back(to_string(s));
    j["family"] = names;
    j["values"] = v.values;
    return j;
}

inline nlohmann::ordered_json report_to_json(const ConvergenceReport& rep) {
    nlohmann::ordered_json j;
    if (rep.limit) j["limit"] = vector_to_json(*rep.limit);
    else j["limit"] = nullptr;
    if (rep.rate) j["rate"] = *rep.rate;
    else j["rate"] = nullptr;
    j["tol"] = rep.tol;
    j["window"] = rep.window;
    if (rep.target_distance) j["target_distance"] = *rep.target_distance;
    if (rep.pass) j["pass"] = *rep.pass;
    if (rep.lemma_constant) j["lemma_C"] = *rep.lemma_constant;
    j["max_residual"] = rep.max_residual;
    return j;
}

} // namespace teichflow
