#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "teichflow/boundary.hpp"
#include "teichflow/flowlab.hpp"

using namespace teichflow;

namespace {

FlowTrace synthetic_trace(const CurveFamily& fam,
                          const std::vector<std::pair<double, std::vector<double>>>& rows) {
    FlowTrace trace;
    trace.family = fam;
    for (const auto& [t, raw] : rows) {
        FlowSample sm;
        sm.t = t;
        sm.raw = raw;
        sm.normalized = ProjectiveVector::normalized(fam, raw).values;
        trace.append(std::move(sm));
    }
    return trace;
}

} // namespace

TEST_CASE("gm_vec values") {
    CurveFamily basis = {Slope{1, 0}, Slope{0, 1}, Slope{1, 1}};
    ProjectiveVector v = gm_vec(TorusPoint(0, 1), basis);
    CHECK(v.values[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(v.values[1] == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(v.values[2] == doctest::Approx(1.0));

    ProjectiveVector w = gm_vec(TorusPoint(0, 2), {Slope{1, 0}, Slope{0, 1}});
    CHECK(w.values[0] == doctest::Approx(0.5));
    CHECK(w.values[1] == doctest::Approx(1.0));

    ProjectiveVector s = gm_vec(TorusPoint(0.7, 0.4), {Slope{2, 1}});
    CHECK(s.values[0] == doctest::Approx(1.0));
}

TEST_CASE("foliation_vec values and the zero functional") {
    CurveFamily basis = {Slope{1, 0}, Slope{0, 1}, Slope{1, 1}};
    ProjectiveVector v = foliation_vec(Slope{1, 0}, basis);
    CHECK(v.values[0] == doctest::Approx(0.0));
    CHECK(v.values[1] == doctest::Approx(1.0));
    CHECK(v.values[2] == doctest::Approx(1.0));

    ProjectiveVector w = foliation_vec(FoliationVector(1, 1), basis);
    CHECK(w.values[0] == doctest::Approx(1.0));
    CHECK(w.values[1] == doctest::Approx(1.0));
    CHECK(w.values[2] == doctest::Approx(0.0));

    CHECK_THROWS_AS(foliation_vec(Slope{1, 0}, CurveFamily{Slope{1, 0}}), ZeroFunctional);
}

TEST_CASE("proj_dist is a metric on normalized vectors") {
    CurveFamily basis = {Slope{1, 0}, Slope{0, 1}, Slope{1, 1}};
    ProjectiveVector a = ProjectiveVector::normalized(basis, {0.0, 1.0, 1.0});
    CHECK(proj_dist(a, a) == 0.0);

    // scale invariance enters through normalization
    ProjectiveVector b = ProjectiveVector::normalized(basis, {0.0, 2.0, 2.0});
    CHECK(proj_dist(a, b) == 0.0);

    ProjectiveVector c = ProjectiveVector::normalized(basis, {1.0, 1.0, 1.0});
    CHECK(proj_dist(a, c) == doctest::Approx(1.0));

    ProjectiveVector other_family =
        ProjectiveVector::normalized({Slope{1, 0}, Slope{0, 1}, Slope{2, 1}}, {0.0, 1.0, 1.0});
    CHECK_THROWS_AS(proj_dist(a, other_family), FamilyError);

    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (int k = 0; k < 200; ++k) {
        auto rand_vec = [&] {
            std::vector<double> raw = {u(rng), u(rng), u(rng) + 0.01};
            return ProjectiveVector::normalized(basis, raw);
        };
        ProjectiveVector x = rand_vec(), y = rand_vec(), z = rand_vec();
        CHECK(proj_dist(x, y) == doctest::Approx(proj_dist(y, x)));
        CHECK(proj_dist(x, z) <= proj_dist(x, y) + proj_dist(y, z) + 1e-15);
        if (proj_dist(x, y) == 0.0)
            for (std::size_t i = 0; i < 3; ++i)
                CHECK(x.values[i] == doctest::Approx(y.values[i]));
    }
}

TEST_CASE("detect_limit on synthetic traces") {
    CurveFamily basis = {Slope{1, 0}, Slope{0, 1}, Slope{1, 1}};

    std::vector<std::pair<double, std::vector<double>>> rows;
    for (int k = 0; k < 6; ++k) rows.push_back({std::pow(2.0, k), {1.0, 2.0, 3.0}});
    FlowTrace constant = synthetic_trace(basis, rows);
    LimitDetection det = detect_limit(constant, 1e-6, 3);
    REQUIRE(det.limit.has_value());
    CHECK(det.limit->values[2] == doctest::Approx(1.0));
    CHECK_FALSE(det.rate.has_value()); // no nonzero steps to fit

    rows.clear();
    for (int k = 0; k < 8; ++k) {
        double v = (k % 2 == 0) ? 1.0 : 2.0;
        rows.push_back({std::pow(2.0, k), {v, 1.0, 3.0}});
    }
    FlowTrace oscillating = synthetic_trace(basis, rows);
    CHECK_FALSE(detect_limit(oscillating, 1e-3, 4).limit.has_value());

    CHECK_THROWS_AS(detect_limit(constant, 1e-6, 10), InsufficientData);
    CHECK_THROWS_AS(detect_limit(constant, 1e-6, 1), ConfigError);
    CHECK_THROWS_AS(detect_limit(constant, -1.0, 3), ConfigError);
}

TEST_CASE("detect_limit on an earthquake trace finds the twisting class") {
    FlowConfig cfg;
    cfg.backend = Backend::torus;
    cfg.flow = Flow::earthquake;
    cfg.base_tau = TorusPoint(0, 1);
    cfg.direction.slope = Slope{1, 0};
    cfg.depth = 3;
    cfg.schedule = Schedule{1.0, 2.0, 11};
    FlowTrace trace = run_flow(cfg);
    LimitDetection det = detect_limit(trace, 1e-2, 4);
    REQUIRE(det.limit.has_value());
    CHECK(proj_dist(*det.limit, foliation_vec(Slope{1, 0}, trace.family)) < 1e-3);
    REQUIRE(det.rate.has_value());
    CHECK(*det.rate == doctest::Approx(-1.0).epsilon(0.2));
}

TEST_CASE("epsilon_ratio estimates the limiting entry quotient") {
    FlowConfig cfg;
    cfg.backend = Backend::torus;
    cfg.flow = Flow::earthquake;
    cfg.base_tau = TorusPoint(0, 1);
    cfg.direction.slope = Slope{1, 0};
    cfg.depth = 3;
    cfg.schedule = Schedule{1.0, 2.0, 13};
    FlowTrace trace = run_flow(cfg);

    EpsilonRatio er = epsilon_ratio(trace, Slope{0, 1}, Slope{1, 1});
    CHECK(er.limit_estimate == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(er.tail_spread < 5e-3);

    // the denominator parallel to the twisting class degenerates projectively
    CHECK_THROWS_AS(epsilon_ratio(trace, Slope{0, 1}, Slope{1, 0}), DegenerateDenominator);
    CHECK_THROWS_AS(epsilon_ratio(trace, Slope{0, 1}, Slope{9, 1}), FamilyError);

    // a constant trace reports the plain quotient: sqrt(2) at the square torus
    CurveFamily basis = {Slope{1, 0}, Slope{0, 1}, Slope{1, 1}};
    std::vector<std::pair<double, std::vector<double>>> rows;
    for (int k = 0; k < 6; ++k)
        rows.push_back({std::pow(2.0, k), {1.0, 1.0, std::sqrt(2.0)}});
    EpsilonRatio cr = epsilon_ratio(synthetic_trace(basis, rows), Slope{1, 1}, Slope{1, 0});
    CHECK(cr.limit_estimate == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("quasiconvex_K by exhaustive triples") {
    std::vector<std::pair<double, double>> convex;
    for (int k = 0; k <= 40; ++k) {
        double t = 10.0 * k / 40.0;
        convex.emplace_back(t, 1.0 + t * t);
    }
    CHECK(quasiconvex_K(convex) == doctest::Approx(1.0));

    std::vector<std::pair<double, double>> flat = {{0, 2}, {1, 2}, {2, 2}, {3, 2}};
    CHECK(quasiconvex_K(flat) == doctest::Approx(1.0));

    std::vector<std::pair<double, double>> bump = {{0, 1}, {1, 3}, {2, 1}};
    CHECK(quasiconvex_K(bump) == doctest::Approx(3.0));

    CHECK_THROWS_AS(quasiconvex_K({{0, 1}, {1, 2}}), InsufficientData);
    CHECK_THROWS_AS(quasiconvex_K({{0, 1}, {0, 2}, {1, 3}}), ConfigError);
    CHECK_THROWS_AS(quasiconvex_K({{0, 1}, {1, 0.0}, {2, 3}}), ConfigError);
}

TEST_CASE("fit_direction recovers signs from the (1,1) entry") {
    CurveFamily basis = farey_family(1);
    FoliationVector plus(1.0, 1.7), minus(-1.0, 1.7);
    auto fit_plus = fit_direction(foliation_vec(plus, basis));
    auto fit_minus = fit_direction(foliation_vec(minus, basis));
    REQUIRE(fit_plus.has_value());
    REQUIRE(fit_minus.has_value());
    CHECK(intersection(*fit_plus, plus) / (fit_plus->norm() * plus.norm()) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(intersection(*fit_minus, minus) / (fit_minus->norm() * minus.norm()) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK_FALSE(fit_direction(ProjectiveVector::normalized({Slope{1, 1}}, {1.0})).has_value());
}

TEST_CASE("gm and thurston vectors of the same flat trajectory share limits") {
    // on the torus the sqrt-extremal-length and flat-length functionals agree,
    // so the two projective embeddings of a horocycle path coincide
    MarkedQuadDiff q = make_qd({1, 0}, {0, 1});
    CurveFamily fam = farey_family(2);
    for (double t : {16.0, 256.0, 4096.0}) {
        MarkedQuadDiff qt = horocycle_step(q, t);
        ProjectiveVector gm = gm_vec(project_tau(qt), fam);
        std::vector<double> flat;
        for (const Slope& s : fam) flat.push_back(flat_length(qt, s));
        ProjectiveVector fl = ProjectiveVector::normalized(fam, flat);
        CHECK(proj_dist(gm, fl) < 1e-12);
    }
}
