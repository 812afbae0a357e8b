#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "teichflow/slopes.hpp"
#include "teichflow/torus.hpp"
#include "teichflow/trace.hpp"

namespace teichflow {

/**
 * @brief Sup-normalized nonnegative length functional over a finite curve
 *        family: the finite-dimensional realization of a projective boundary
 *        vector.
 */
struct ProjectiveVector {
    CurveFamily family;
    std::vector<double> values; // max entry = 1

    static ProjectiveVector normalized(CurveFamily fam, std::vector<double> raw) {
        if (fam.size() != raw.size())
            throw FamilyError("ProjectiveVector: family/value size mismatch");
        if (fam.empty()) throw FamilyError("ProjectiveVector: empty family");
        double top = 0.0;
        for (double v : raw) {
            if (v < 0.0) throw ZeroFunctional("ProjectiveVector: negative entry");
            top = std::max(top, v);
        }
        if (top <= 0.0) throw ZeroFunctional("ProjectiveVector: all entries vanish");
        for (double& v : raw) v /= top;
        return ProjectiveVector{std::move(fam), std::move(raw)};
    }
};

/// Gardiner-Masur vector of a torus point: sup-normalized sqrt extremal lengths.
inline ProjectiveVector gm_vec(const TorusPoint& tau, const CurveFamily& fam) {
    std::vector<double> vals;
    vals.reserve(fam.size());
    for (const Slope& s : fam) vals.push_back(std::sqrt(ext_length(s, tau)));
    return ProjectiveVector::normalized(fam, std::move(vals));
}

/// Intersection-number vector of a measured-foliation class over a family.
inline ProjectiveVector foliation_vec(const FoliationVector& mu, const CurveFamily& fam) {
    std::vector<double> vals;
    vals.reserve(fam.size());
    for (const Slope& s : fam) vals.push_back(intersection(mu, s));
    return ProjectiveVector::normalized(fam, std::move(vals)); // throws ZeroFunctional if mu is parallel to all
}

inline ProjectiveVector foliation_vec(const Slope& alpha, const CurveFamily& fam) {
    return foliation_vec(FoliationVector::of(alpha), fam);
}

/**
 * @brief Sup-norm distance between sup-normalized vectors over the same
 *        family; zero iff the classes agree projectively on the family.
 */
inline double proj_dist(const ProjectiveVector& u, const ProjectiveVector& v) {
    if (u.family != v.family) throw FamilyError("proj_dist: family mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i)
        d = std::max(d, std::fabs(u.values[i] - v.values[i]));
    return d;
}

/// Outcome of windowed-Cauchy limit detection on a trace.
struct LimitDetection {
    std::optional<ProjectiveVector> limit;
    // Log-log slope of consecutive-sample distances vs t; empty when fewer
    // than two nonzero steps were available (e.g. a constant trace).
    std::optional<double> rate;
};

/**
 * @brief Decides whether the normalized vectors of a trace have settled.
 *
 * Returns the final normalized vector when all pairwise sup-distances over
 * the last `window` samples stay below `tol`; detection is windowed-Cauchy
 * rather than model-fitting, and the empirical convergence rate is reported
 * separately from consecutive-sample distances.
 */
inline LimitDetection detect_limit(const FlowTrace& trace, double tol, int window) {
    if (window < 2) throw ConfigError("detect_limit: window must be >= 2");
    if (!(tol > 0.0)) throw ConfigError("detect_limit: tol must be positive");
    if (int(trace.samples.size()) < window)
        throw InsufficientData("detect_limit: trace shorter than window");

    auto vec = [&](std::size_t k) {
        return ProjectiveVector{trace.family, trace.samples[k].normalized};
    };
    std::size_t n = trace.samples.size();

    LimitDetection out;
    // Rate from consecutive differences over (up to) the trailing 8 steps.
    {
        std::vector<double> lt, ld;
        std::size_t first = n > 9 ? n - 9 : 0;
        for (std::size_t k = first; k + 1 < n; ++k) {
            double d = proj_dist(vec(k), vec(k + 1));
            if (d > 0.0 && trace.samples[k].t > 0.0) {
                lt.push_back(std::log(trace.samples[k].t));
                ld.push_back(std::log(d));
            }
        }
        if (lt.size() >= 2) {
            double mt = 0.0, md = 0.0;
            for (std::size_t i = 0; i < lt.size(); ++i) { mt += lt[i]; md += ld[i]; }
            mt /= double(lt.size()); md /= double(lt.size());
            double sxx = 0.0, sxy = 0.0;
            for (std::size_t i = 0; i < lt.size(); ++i) {
                sxx += (lt[i] - mt) * (lt[i] - mt);
                sxy += (lt[i] - mt) * (ld[i] - md);
            }
            if (sxx > 0.0) out.rate = sxy / sxx;
        }
    }

    for (std::size_t i = n - std::size_t(window); i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (proj_dist(vec(i), vec(j)) >= tol) return out;
    out.limit = vec(n - 1);
    return out;
}

/// Ratio sequence of two family entries along a trace, with a tail estimate.
struct EpsilonRatio {
    std::vector<double> ratios;
    double limit_estimate = 0.0;
    double tail_spread = 0.0; // max pairwise gap over the trailing window
};

/**
 * @brief Empirical boundary-function ratio: pointwise quotient of the gamma
 *        and beta0 entries along a trace, estimating the limiting ratio of
 *        the two length functionals.
 *
 * The denominator entry must stay bounded away from zero along the tail; a
 * normalized entry collapsing toward zero (the family-normalization
 * degeneracy that appears when beta0 is parallel to the flow direction) is
 * rejected.
 */
inline EpsilonRatio epsilon_ratio(const FlowTrace& trace, const Slope& gamma,
                                  const Slope& beta0, int window = 5) {
    int gi = family_index(trace.family, gamma);
    int bi = family_index(trace.family, beta0);
    if (gi < 0 || bi < 0)
        throw FamilyError("epsilon_ratio: slope not in the trace family");
    if (trace.samples.empty()) throw InsufficientData("epsilon_ratio: empty trace");

    std::size_t n = trace.samples.size();
    std::size_t tail = n > std::size_t(window) ? n - std::size_t(window) : 0;
    double tail_min = 1.0, first_den = trace.samples.front().normalized[bi];
    for (std::size_t k = tail; k < n; ++k)
        tail_min = std::min(tail_min, trace.samples[k].normalized[bi]);
    double last_den = trace.samples.back().normalized[bi];
    if (tail_min < 1e-9 || (first_den > 0.0 && last_den / first_den < 1e-2))
        throw DegenerateDenominator("epsilon_ratio: normalized denominator collapses along the tail");

    EpsilonRatio out;
    out.ratios.reserve(n);
    for (const FlowSample& sm : trace.samples)
        out.ratios.push_back(sm.normalized[gi] / sm.normalized[bi]);
    out.limit_estimate = out.ratios.back();
    for (std::size_t i = tail; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            out.tail_spread = std::max(out.tail_spread, std::fabs(out.ratios[i] - out.ratios[j]));
    return out;
}

/**
 * @brief Minimal K >= 1 with f(t2) <= K max(f(t1), f(t3)) over all sampled
 *        triples t1 < t2 < t3, by exhaustive search.
 */
inline double quasiconvex_K(const std::vector<std::pair<double, double>>& samples) {
    if (samples.size() < 3) throw InsufficientData("quasiconvex_K: need at least 3 samples");
    for (std::size_t i = 0; i + 1 < samples.size(); ++i)
        if (!(samples[i].first < samples[i + 1].first))
            throw ConfigError("quasiconvex_K: times must be strictly increasing");
    for (const auto& [t, f] : samples)
        if (!(f > 0.0)) throw ConfigError("quasiconvex_K: values must be positive");

    std::size_t n = samples.size();
    double k = 1.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t l = j + 1; l < n; ++l) {
                double outer = std::max(samples[i].second, samples[l].second);
                k = std::max(k, samples[j].second / outer);
            }
    return k;
}

/**
 * @brief Recovers a direction class from its intersection pattern over a
 *        family containing (1,0), (0,1) and (1,1); the (1,1) entry resolves
 *        the relative sign. Returns nothing when the pattern is degenerate.
 */
inline std::optional<FoliationVector> fit_direction(const ProjectiveVector& vec) {
    int i10 = family_index(vec.family, Slope{1, 0});
    int i01 = family_index(vec.family, Slope{0, 1});
    int i11 = family_index(vec.family, Slope{1, 1});
    if (i10 < 0 || i01 < 0 || i11 < 0) return std::nullopt;
    double abs_b = vec.values[i10]; // i((a,b),(1,0)) = |b|
    double abs_a = vec.values[i01]; // i((a,b),(0,1)) = |a|
    if (abs_a == 0.0 && abs_b == 0.0) return std::nullopt;
    // i((a,b),(1,1)) = |a - b| distinguishes the sign combinations.
    double same = std::fabs(abs_a - abs_b), opposite = abs_a + abs_b;
    double observed = vec.values[i11];
    double b = (std::fabs(observed - same) <= std::fabs(observed - opposite)) ? abs_b : -abs_b;
    return FoliationVector(abs_a, b);
}

} // namespace teichflow
