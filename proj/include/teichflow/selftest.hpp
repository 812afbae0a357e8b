#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include "teichflow/boundary.hpp"
#include "teichflow/flowlab.hpp"
#include "teichflow/ptorus.hpp"
#include "teichflow/qdiff.hpp"
#include "teichflow/slopes.hpp"
#include "teichflow/svgplot.hpp"
#include "teichflow/torus.hpp"
#include "teichflow/trace.hpp"

namespace teichflow {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SelftestOptions {
    // Tail tolerance demanded of the boundary-function ratio check; tighten
    // it (say to 1e-15) to exercise the deliberate-failure path.
    double epsilon_ratio_tol = 5e-3;
};

struct SelftestArtifacts {
    std::string trace_csv;
    std::string report_json;
    std::string plot_svg;
};

namespace detail {

inline MarkedQuadDiff random_qd(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ux(-0.5, 0.5), uy(0.75, 1.35),
        uth(0.0, 6.283185307179586);
    double x = ux(rng), y = uy(rng), th = uth(rng);
    std::complex<double> rot = std::polar(1.0, th);
    std::complex<double> w1 = rot / std::sqrt(y);
    std::complex<double> w2 = std::complex<double>(x, y) * rot / std::sqrt(y);
    return make_qd(w1, w2, true);
}

inline FlowConfig reference_earthquake_config() {
    FlowConfig cfg;
    cfg.backend = Backend::torus;
    cfg.flow = Flow::earthquake;
    cfg.base_tau = TorusPoint(0.0, 1.0);
    cfg.direction.slope = Slope{1, 0};
    cfg.direction.weight = 1.0;
    cfg.depth = 4;
    cfg.schedule = Schedule{1.0, 2.0, 11}; // t up to 1024
    cfg.tol = 1e-2;
    cfg.window = 4;
    return cfg;
}

} // namespace detail

/// Deterministic artifacts of the reference earthquake run (trace, report, plot).
inline SelftestArtifacts make_artifacts() {
    FlowConfig cfg = detail::reference_earthquake_config();
    FlowTrace trace = run_flow(cfg);
    CurveFamily fam = trace.family;
    ConvergenceReport rep = convergence_report(
        trace, foliation_vec(Slope{1, 0}, fam), cfg.tol, cfg.window,
        FoliationVector::of(Slope{1, 0}), true);
    SelftestArtifacts art;
    art.trace_csv = trace_to_csv(trace);
    art.report_json = report_to_json(rep).dump(2) + "\n";
    art.plot_svg = emit_plot_svg(trace);
    return art;
}

/**
 * @brief Runs the full acceptance suite and reports one result per
 *        criterion. Every tolerance is pinned here.
 */
inline std::vector<CriterionResult> run_acceptance(const SelftestOptions& opt = {}) {
    std::vector<CriterionResult> results;
    auto add = [&](int idx, const std::string& name, bool pass, const std::string& detail) {
        results.push_back({idx, name, pass, detail});
    };
    char buf[256];

    // 1. Twist-asymptotics ratio reproduction on the square torus.
    {
        bool ok = true;
        double worst = 0.0;
        for (std::int64_t n : {std::int64_t(10), std::int64_t(100), std::int64_t(1000)}) {
            double r = converge_ratio(TorusPoint(0, 1), Slope{1, 0}, Slope{0, 1}, n);
            double expected = (double(n) * double(n) + 1.0) / (double(n) * double(n));
            double nn = double(n) * double(n);
            ok = ok && std::fabs(r - expected) <= 1e-12 && std::fabs(r - 1.0) <= 1.1 / nn;
            worst = std::max(worst, std::fabs(r - 1.0) * nn);
        }
        std::snprintf(buf, sizeof buf, "max n^2|ratio-1| = %.6g (<= 1.1)", worst);
        add(1, "twist-ratio asymptotics", ok, buf);
    }

    // 2. Earthquake along a simple closed curve converges to its class
    //    (sqrt-extremal-length vectors), with rate exponent -1 +/- 0.2.
    FlowTrace quake_trace;
    {
        FlowConfig cfg = detail::reference_earthquake_config();
        quake_trace = run_flow(cfg);
        LimitDetection det = detect_limit(quake_trace, cfg.tol, cfg.window);
        bool ok = det.limit.has_value();
        double dist = -1.0, rate = 0.0, angle = -1.0;
        if (ok) {
            ProjectiveVector target = foliation_vec(Slope{1, 0}, quake_trace.family);
            dist = proj_dist(*det.limit, target);
            // angle-metric cross-check: the identity of the limit must not
            // depend on the choice of sup-norm projective metric
            double dot = 0.0, nu = 0.0, nv = 0.0;
            for (std::size_t i = 0; i < target.values.size(); ++i) {
                dot += det.limit->values[i] * target.values[i];
                nu += det.limit->values[i] * det.limit->values[i];
                nv += target.values[i] * target.values[i];
            }
            angle = std::acos(std::min(1.0, dot / std::sqrt(nu * nv)));
            ok = dist < 1e-2 && angle < 1e-2;
        }
        if (ok && det.rate) {
            rate = *det.rate;
            ok = rate > -1.2 && rate < -0.8;
        } else if (!det.rate) {
            ok = false;
        }
        std::snprintf(buf, sizeof buf,
                      "dist = %.3g, angle = %.3g (< 1e-2), rate = %.3f (-1 +/- 0.2)",
                      dist, angle, rate);
        add(2, "earthquake to simple closed class", ok, buf);

        // Boundary-function ratio along the same trace: the limit of the
        //  (0,1)/(1,1) entry quotient must equal 1 within the demanded tol.
        EpsilonRatio er = epsilon_ratio(quake_trace, Slope{0, 1}, Slope{1, 1});
        bool er_ok = std::fabs(er.limit_estimate - 1.0) <= opt.epsilon_ratio_tol;
        std::snprintf(buf, sizeof buf, "|eps-ratio - 1| = %.3g (<= %.3g)",
                      std::fabs(er.limit_estimate - 1.0), opt.epsilon_ratio_tol);
        add(2, "boundary-function ratio", er_ok, buf);
    }

    // 3. Earthquake along the golden direction (uniquely ergodic case).
    {
        const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
        FlowConfig cfg;
        cfg.backend = Backend::torus;
        cfg.flow = Flow::earthquake;
        cfg.base_tau = TorusPoint(0.0, 1.0);
        cfg.direction.vector = FoliationVector(1.0, phi);
        cfg.depth = 4;
        cfg.schedule = Schedule{1.0, 2.0, 15}; // t up to 16384 >= 1e4
        FlowTrace trace = run_flow(cfg);
        LimitDetection det = detect_limit(trace, 1e-2, 4);
        bool ok = det.limit.has_value();
        double dist = -1.0;
        if (ok) {
            dist = proj_dist(*det.limit, foliation_vec(FoliationVector(1.0, phi), trace.family));
            ok = dist < 1e-2;
        }

        // Rational-convergent oracle: Fibonacci slopes with weight 1/F_j
        // approach the golden direction; endpoints must agree to 1e-6.
        double T = 16384.0;
        TorusPoint golden_end = earthquake_tau(cfg.base_tau, FoliationVector(1.0, phi), T);
        double fib_a = 1.0, fib_b = 1.0; // F_1, F_2
        double prev_gap = 1e300, last_gap = 0.0;
        bool shrinking = true;
        for (int j = 2; j <= 26; ++j) {
            double next = fib_a + fib_b;
            fib_a = fib_b;
            fib_b = next; // fib_a = F_j, fib_b = F_{j+1}
            if (j < 14 || j % 2 != 0) continue;
            TorusPoint end = earthquake_tau(
                cfg.base_tau, canonicalize(std::int64_t(fib_a), std::int64_t(fib_b)),
                1.0 / fib_a, T);
            last_gap = std::hypot(end.x - golden_end.x, end.y - golden_end.y);
            if (last_gap > prev_gap * 1.05) shrinking = false;
            prev_gap = last_gap;
        }
        ok = ok && shrinking && last_gap <= 1e-6;
        std::snprintf(buf, sizeof buf, "dist = %.3g (< 1e-2), oracle gap = %.3g (<= 1e-6)",
                      dist, last_gap);
        add(3, "earthquake, golden direction", ok, buf);
    }

    // 4. Punctured-torus twist calibration and invariants along the path.
    {
        MarkovTriple base{3.0L, 3.0L, 3.0L};
        double ell = 2.0 * std::acosh(1.5);
        MarkovTriple one = eq_twist(base, Slope{1, 0}, ell);
        double calib = std::max({std::fabs(double(one.x) - 3.0) / 3.0,
                                 std::fabs(double(one.y) - 3.0) / 3.0,
                                 std::fabs(double(one.z) - 6.0) / 6.0});
        bool ok = calib <= 1e-8;

        double worst_markov = 0.0, worst_comm = 0.0, worst_len = 0.0;
        double len0 = hyp_length(base, Slope{1, 0});
        for (double t = 1.0; t <= 1024.0; t *= 2.0) {
            MarkovTriple tt = eq_twist(base, Slope{1, 0}, t);
            worst_markov = std::max(worst_markov, markov_residual(tt));
            // commutator trace from the explicit lift, relative to the
            // squared-trace scale of the triple
            MatrixLift lift = lift_matrices(tt);
            long double scale = std::max(1.0L, tt.x * tt.x + tt.y * tt.y + tt.z * tt.z);
            worst_comm = std::max(worst_comm,
                                  double(std::fabs(commutator_trace(lift) + 2.0L) / scale));
            worst_len = std::max(worst_len,
                                 std::fabs(hyp_length(tt, Slope{1, 0}) - len0) / len0);
        }
        ok = ok && worst_markov <= 1e-9 && worst_comm <= 1e-9 && worst_len <= 1e-9;
        std::snprintf(buf, sizeof buf,
                      "calib = %.2g, markov = %.2g, tr[A,B]+2 = %.2g, len drift = %.2g",
                      calib, worst_markov, worst_comm, worst_len);
        add(4, "punctured-torus calibration", ok, buf);
    }

    // 5. Thurston convergence of punctured-torus earthquakes.
    {
        CurveFamily fam = farey_family(4);
        MarkovTriple tt = eq_twist(MarkovTriple{3.0L, 3.0L, 3.0L}, Slope{1, 0}, 1000.0);
        double dist = proj_dist(thurston_vec(tt, fam), foliation_vec(Slope{1, 0}, fam));
        bool ok = dist < 1e-2;
        std::snprintf(buf, sizeof buf, "dist at t=1000: %.3g (< 1e-2)", dist);
        add(5, "Thurston convergence (punctured torus)", ok, buf);
    }

    // 6. Horocycle invariants: unit area and horizontal pairings, |t| <= 1e4.
    {
        std::mt19937_64 rng(0xC0FFEE06);
        CurveFamily fam = farey_family(2);
        double worst_area = 0.0, worst_drift = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            MarkedQuadDiff q = detail::random_qd(rng);
            for (double mag : {1.0, 10.0, 100.0, 1000.0, 10000.0}) {
                for (double t : {mag, -mag}) {
                    MarkedQuadDiff qt = horocycle_step(q, t);
                    worst_area = std::max(worst_area, double(std::fabs(qt.area() - 1.0L)));
                    for (const Slope& s : fam)
                        worst_drift = std::max(worst_drift,
                                               std::fabs(pairing_h(qt, s) - pairing_h(q, s)));
                }
            }
        }
        bool ok = worst_area <= 1e-12 && worst_drift <= 1e-12;
        std::snprintf(buf, sizeof buf, "area residual = %.3g, pairing drift = %.3g (<= 1e-12)",
                      worst_area, worst_drift);
        add(6, "horocycle invariants", ok, buf);
    }

    // 7. Scaled-current sandwich and limit along horocycle paths.
    {
        std::mt19937_64 rng(0xC0FFEE07);
        CurveFamily fam = farey_family(2);
        std::vector<double> sched = build_schedule(1.0, 2.0, 15); // to 16384
        bool ok = true;
        double worst_slack = 0.0, worst_dist = 0.0;
        for (int trial = 0; trial < 101; ++trial) {
            MarkedQuadDiff q = trial == 0 ? MarkedQuadDiff{} : detail::random_qd(rng);
            FlowTrace trace = current_limit_trace(q, fam, sched);
            for (const FlowSample& sm : trace.samples) {
                worst_slack = std::max(worst_slack, sm.residual);
                // exact sandwich on the flowed pairings
                MarkedQuadDiff qt = horocycle_step(q, sm.t);
                for (const Slope& s : fam) {
                    double L = flat_length(qt, s);
                    double lo = std::max(pairing_v(qt, s), pairing_h(qt, s));
                    double hi = pairing_v(qt, s) + pairing_h(qt, s);
                    worst_slack = std::max(worst_slack, std::max(lo - L, L - hi));
                }
            }
            LimitDetection det = detect_limit(trace, 1e-2, 4);
            if (!det.limit) { ok = false; continue; }
            double dist = proj_dist(*det.limit, foliation_vec(invariant_foliation(q), fam));
            worst_dist = std::max(worst_dist, dist);
        }
        ok = ok && worst_slack <= 1e-12 && worst_dist < 1e-3;
        std::snprintf(buf, sizeof buf, "sandwich slack = %.3g (<= 1e-12), limit dist = %.3g (< 1e-3)",
                      worst_slack, worst_dist);
        add(7, "horocycle current sandwich and limit", ok, buf);
    }

    // 8. Orthogonality of the detected limit with the invariant foliation.
    {
        const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
        CurveFamily fam = farey_family(2);
        std::vector<double> sched = build_schedule(1.0, 4.0, 15); // to ~2.7e8
        MarkedQuadDiff rational{};                                // invariant class (1,0)
        MarkedQuadDiff golden = make_qd({1.0, -phi}, {0.0, 1.0}); // invariant class (1,phi)
        bool ok = true;
        double worst = 0.0;
        for (const MarkedQuadDiff& q : {rational, golden}) {
            OrthogonalityReport rep = accumulation_orthogonality(q, fam, sched);
            if (rep.inconclusive) { ok = false; continue; }
            worst = std::max(worst, rep.pairing);
        }
        ok = ok && worst <= 1e-6;
        std::snprintf(buf, sizeof buf, "max normalized pairing = %.3g (<= 1e-6)", worst);
        add(8, "limit orthogonal to invariant foliation", ok, buf);
    }

    // 9. Certified Farey distance agrees with the closed form; length-ratio
    //    bounds from the distance hold on depth-5 families.
    {
        std::mt19937_64 rng(0xC0FFEE09);
        std::uniform_real_distribution<double> ux(-2.0, 2.0), uy(-1.0, 1.0);
        CurveFamily fam = farey_family(5);
        bool ok = true;
        double worst_rel = 0.0;
        int done = 0;
        while (done < 100) {
            TorusPoint t1(ux(rng), std::exp(uy(rng)));
            TorusPoint t2(ux(rng), std::exp(uy(rng)));
            double d = teich_dist(t1, t2);
            if (d < 1e-3 || d > 2.0) continue;
            ++done;
            double df = teich_dist_farey(t1, t2, 1e-9);
            worst_rel = std::max(worst_rel, std::fabs(df - d) / d);
            ok = ok && kerckhoff_bound_check(t1, t2, fam);
        }
        ok = ok && worst_rel <= 1e-6;
        std::snprintf(buf, sizeof buf, "max relative gap = %.3g (<= 1e-6), ratio bounds %s",
                      worst_rel, ok ? "hold" : "violated");
        add(9, "distance cross-check", ok, buf);
    }

    // 10. Quasiconvexity of extremal length along earthquake paths.
    {
        auto sample_ext = [&](const Slope& gamma, int count) {
            std::vector<std::pair<double, double>> out;
            for (int k = 0; k < count; ++k) {
                double t = 10.0 * double(k) / double(count - 1);
                TorusPoint tau = earthquake_tau(TorusPoint(0, 1), Slope{1, 0}, 1.0, t);
                out.emplace_back(t, ext_length(gamma, tau));
            }
            return out;
        };
        double k01 = quasiconvex_K(sample_ext(Slope{0, 1}, 41));
        bool ok = std::fabs(k01 - 1.0) <= 1e-9;

        std::mt19937_64 rng(0xC0FFEE10);
        std::uniform_int_distribution<std::int64_t> up(-9, 9), uq(0, 9);
        double worst_rel = 0.0;
        int trials = 0;
        while (trials < 20) {
            std::int64_t p = up(rng), q = uq(rng);
            if (p == 0 && q == 0) continue;
            ++trials;
            Slope gamma = canonicalize(p, q);
            double k1 = quasiconvex_K(sample_ext(gamma, 40));
            double k2 = quasiconvex_K(sample_ext(gamma, 80));
            if (!std::isfinite(k1) || !std::isfinite(k2)) { ok = false; continue; }
            worst_rel = std::max(worst_rel, std::fabs(k1 - k2) / std::max(k1, k2));
        }
        ok = ok && worst_rel <= 0.05;
        std::snprintf(buf, sizeof buf, "K(0/1) = 1 within %.2g; refinement drift = %.3g (<= 0.05)",
                      std::fabs(k01 - 1.0), worst_rel);
        add(10, "quasiconvexity along earthquakes", ok, buf);
    }

    // 11. Determinism of emitted artifacts.
    {
        SelftestArtifacts a = make_artifacts();
        SelftestArtifacts b = make_artifacts();
        bool ok = a.trace_csv == b.trace_csv && a.report_json == b.report_json &&
                  a.plot_svg == b.plot_svg;
        std::snprintf(buf, sizeof buf, "CSV %zu B, JSON %zu B, SVG %zu B byte-identical",
                      a.trace_csv.size(), a.report_json.size(), a.plot_svg.size());
        add(11, "artifact determinism", ok, buf);
    }

    return results;
}

} // namespace teichflow
