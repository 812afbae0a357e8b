#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "teichflow/boundary.hpp"
#include "teichflow/slopes.hpp"
#include "teichflow/torus.hpp"
#include "teichflow/trace.hpp"

namespace teichflow {

using cld = std::complex<long double>;

/**
 * @brief Unit-area marked quadratic differential on the torus, stored as the
 *        holonomy vectors of the marked basis curves (1,0) and (0,1).
 *
 * Extended precision keeps the area and horizontal-measure drift below 1e-12
 * across |t| up to 1e4 of unipotent flow.
 */
struct MarkedQuadDiff {
    cld w1{1.0L, 0.0L};
    cld w2{0.0L, 1.0L};

    long double area() const { return std::imag(std::conj(w1) * w2); }
};

/**
 * @brief Constructs a unit-area differential from a basis pair; with
 *        `normalize` the pair is rescaled by area^{-1/2}, otherwise a
 *        non-unit area is rejected.
 */
inline MarkedQuadDiff make_qd(std::complex<double> w1, std::complex<double> w2,
                              bool normalize = false) {
    MarkedQuadDiff q{cld(w1.real(), w1.imag()), cld(w2.real(), w2.imag())};
    long double a = q.area();
    if (!(a > 0.0L))
        throw InvalidBasis("make_qd: basis must have positive area");
    if (normalize) {
        long double r = std::sqrt(a);
        q.w1 /= r;
        q.w2 /= r;
    } else if (std::fabs(a - 1.0L) > 1e-12L) {
        throw AreaError("make_qd: area differs from 1; pass normalize to rescale");
    }
    return q;
}

inline cld holonomy(const MarkedQuadDiff& q, const Slope& s) {
    return (long double)s.p * q.w1 + (long double)s.q * q.w2;
}

/// Pairing with the vertical foliation (total |dx| along the straight representative).
inline double pairing_v(const MarkedQuadDiff& q, const Slope& s) {
    return double(std::fabs(std::real(holonomy(q, s))));
}

/// Pairing with the horizontal foliation (total |dy|); invariant under the horocycle flow.
inline double pairing_h(const MarkedQuadDiff& q, const Slope& s) {
    return double(std::fabs(std::imag(holonomy(q, s))));
}

/// Flat length of the straight geodesic representative; satisfies
/// max(pairing_v, pairing_h) <= flat_length <= pairing_v + pairing_h.
inline double flat_length(const MarkedQuadDiff& q, const Slope& s) {
    return double(std::abs(holonomy(q, s)));
}

/**
 * @brief Teichmueller horocycle flow: each holonomy (x, y) moves to
 *        (x + t y, y). Unit area is preserved exactly and every horizontal
 *        pairing is left invariant.
 */
inline MarkedQuadDiff horocycle_step(const MarkedQuadDiff& q, double t) {
    long double lt = t;
    return MarkedQuadDiff{
        cld(std::real(q.w1) + lt * std::imag(q.w1), std::imag(q.w1)),
        cld(std::real(q.w2) + lt * std::imag(q.w2), std::imag(q.w2))};
}

/// Teichmueller geodesic flow companion: (x, y) -> (e^s x, e^{-s} y).
inline MarkedQuadDiff geodesic_step(const MarkedQuadDiff& q, double s) {
    long double es = std::exp((long double)s);
    return MarkedQuadDiff{
        cld(es * std::real(q.w1), std::imag(q.w1) / es),
        cld(es * std::real(q.w2), std::imag(q.w2) / es)};
}

/**
 * @brief Projection to the marked flat torus underlying the differential:
 *        tau = w2 / w1. Invariant under rotations e^{i theta} q.
 */
inline TorusPoint project_tau(const MarkedQuadDiff& q) {
    if (std::abs(q.w1) == 0.0L) throw InvalidBasis("project_tau: w1 vanishes");
    cld tau = q.w2 / q.w1;
    return TorusPoint(double(std::real(tau)), double(std::imag(tau)));
}

/**
 * @brief The flow-invariant (horizontal) foliation as a torus direction
 *        class: pairing with every slope reproduces pairing_h.
 */
inline FoliationVector invariant_foliation(const MarkedQuadDiff& q) {
    return FoliationVector(double(std::imag(q.w2)), double(-std::imag(q.w1)));
}

/**
 * @brief Trace of scaled flat-length currents L_{h^t q}(s) / |t| over a
 *        schedule.
 *
 * Residual per sample: the worst violation of the proof sandwich
 *   -v/|t| + h  <=  L_t/|t|  <=  (v + h)/|t| + h
 * (v, h the base pairings) together with the area drift. The normalized
 * vectors converge projectively to the horizontal-pairing vector.
 */
inline FlowTrace current_limit_trace(const MarkedQuadDiff& q, const CurveFamily& fam,
                                     const std::vector<double>& schedule) {
    if (fam.empty()) throw FamilyError("current_limit_trace: empty family");
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (!(schedule[i] > 0.0))
            throw ConfigError("current_limit_trace: schedule must be positive");
        if (i > 0 && !(schedule[i] > schedule[i - 1]))
            throw ConfigError("current_limit_trace: schedule must be strictly increasing");
    }
    FlowTrace trace;
    trace.family = fam;
    for (double t : schedule) {
        MarkedQuadDiff qt = horocycle_step(q, t);
        FlowSample sm;
        sm.t = t;
        sm.tau = project_tau(qt);
        double slack = 0.0;
        for (const Slope& s : fam) {
            double scaled = flat_length(qt, s) / t;
            double v = pairing_v(q, s), h = pairing_h(q, s);
            slack = std::max(slack, (h - v / t) - scaled);
            slack = std::max(slack, scaled - (h + (v + h) / t));
            sm.raw.push_back(scaled);
        }
        slack = std::max(slack, double(std::fabs(qt.area() - 1.0L)));
        sm.residual = std::max(0.0, slack);
        sm.normalized = ProjectiveVector::normalized(fam, sm.raw).values;
        trace.append(std::move(sm));
    }
    return trace;
}

/**
 * @brief Outcome of the boundary-orthogonality check along a horocycle path.
 *
 * `pairing` is the normalized intersection of the direction fitted to the
 * detected Thurston-type limit with the flow-invariant foliation; it must
 * vanish in the limit. `inconclusive` is reported, not thrown.
 */
struct OrthogonalityReport {
    std::optional<ProjectiveVector> limit;
    std::optional<FoliationVector> fitted;
    double pairing = 0.0;
    bool inconclusive = true;
};

/**
 * @brief Detects the projective limit of the Thurston-type vectors of
 *        pi(h^t q) over a family and verifies that its intersection with the
 *        flow-invariant foliation vanishes.
 */
inline OrthogonalityReport accumulation_orthogonality(const MarkedQuadDiff& q,
                                                      const CurveFamily& fam,
                                                      const std::vector<double>& schedule,
                                                      double tol = 1e-2, int window = 4) {
    OrthogonalityReport rep;
    FlowTrace trace = current_limit_trace(q, fam, schedule);
    LimitDetection det = detect_limit(trace, tol, window);
    if (!det.limit) return rep;
    rep.limit = det.limit;
    rep.fitted = fit_direction(*det.limit);
    if (!rep.fitted) return rep;
    FoliationVector inv = invariant_foliation(q);
    rep.pairing = intersection(*rep.fitted, inv) / (rep.fitted->norm() * inv.norm());
    rep.inconclusive = false;
    return rep;
}

} // namespace teichflow
