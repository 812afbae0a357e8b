#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "teichflow/boundary.hpp"
#include "teichflow/slopes.hpp"

namespace teichflow {

/**
 * @brief Marked complete hyperbolic structure on the once-punctured torus in
 *        trace coordinates (tr A, tr B, tr AB) of the marked generators.
 *
 * The cusp forces x^2 + y^2 + z^2 = xyz; all three traces exceed 2. Values
 * grow like exp(length/2) along twist paths, so the coordinates are carried
 * in extended precision and the relation is monitored as a relative residual.
 */
struct MarkovTriple {
    long double x = 3.0L, y = 3.0L, z = 3.0L;
};

/// Relative residual of the cusp relation, |x^2+y^2+z^2-xyz| / max(1, |xyz|).
inline double markov_residual(const MarkovTriple& t) {
    long double lhs = t.x * t.x + t.y * t.y + t.z * t.z - t.x * t.y * t.z;
    long double scale = std::max(1.0L, std::fabs(t.x * t.y * t.z));
    return double(std::fabs(lhs) / scale);
}

inline void check_markov(const MarkovTriple& t, double tol = 1e-9) {
    if (!(t.x > 2.0L) || !(t.y > 2.0L) || !(t.z > 2.0L))
        throw DegenerateStructure("MarkovTriple: traces must exceed 2");
    if (markov_residual(t) > tol)
        throw DegenerateStructure("MarkovTriple: cusp relation violated");
}

enum class Branch { minus, plus };

/**
 * @brief Completes (x, y) to a Markov triple by solving
 *        z^2 - xyz + x^2 + y^2 = 0; the two roots are related by a Dehn
 *        twist and both give valid structures.
 */
inline MarkovTriple markov_complete(double x, double y, Branch branch) {
    if (!(x > 2.0) || !(y > 2.0))
        throw DegenerateStructure("markov_complete: need x > 2 and y > 2");
    long double lx = x, ly = y;
    long double disc = lx * lx * ly * ly - 4.0L * (lx * lx + ly * ly);
    if (disc < 0.0L)
        throw NotRealizable("markov_complete: negative discriminant");
    long double root = std::sqrt(disc);
    long double z = branch == Branch::plus ? (lx * ly + root) / 2.0L
                                           : (lx * ly - root) / 2.0L;
    if (!(z > 2.0L))
        throw DegenerateStructure("markov_complete: root does not exceed 2");
    return MarkovTriple{lx, ly, z};
}

/**
 * @brief Explicit SL(2,R) generators realizing a Markov triple: A diagonal
 *        (axis the imaginary axis), B normalized by a unit lower-left entry.
 */
struct MatrixLift {
    std::array<long double, 4> A; // row-major (a11, a12, a21, a22)
    std::array<long double, 4> B;
};

namespace detail {
inline std::array<long double, 4> mat_mul(const std::array<long double, 4>& m,
                                          const std::array<long double, 4>& n) {
    return {m[0] * n[0] + m[1] * n[2], m[0] * n[1] + m[1] * n[3],
            m[2] * n[0] + m[3] * n[2], m[2] * n[1] + m[3] * n[3]};
}
inline std::array<long double, 4> mat_inv(const std::array<long double, 4>& m) {
    // determinant-one inverse
    return {m[3], -m[1], -m[2], m[0]};
}
inline long double mat_trace(const std::array<long double, 4>& m) { return m[0] + m[3]; }
} // namespace detail

inline MatrixLift lift_matrices(const MarkovTriple& t) {
    check_markov(t);
    long double lam = (t.x + std::sqrt(t.x * t.x - 4.0L)) / 2.0L;
    // tr B = y, tr AB = z, det B = 1, B21 = 1 fix the conjugation gauge.
    long double e = (lam * t.z - t.y) / (lam * lam - 1.0L);
    long double h = t.y - e;
    long double f = e * h - 1.0L;
    MatrixLift lift{{lam, 0.0L, 0.0L, 1.0L / lam}, {e, f, 1.0L, h}};

    auto AB = detail::mat_mul(lift.A, lift.B);
    long double res = std::fabs(detail::mat_trace(AB) - t.z);
    if (res > 1e-9L * std::max(1.0L, std::fabs(t.z)))
        throw NumericalFailure("lift_matrices: trace residual " + std::to_string(double(res)));
    return lift;
}

/// Trace of the commutator [A,B], computed from the explicit product.
inline long double commutator_trace(const MatrixLift& lift) {
    auto c = detail::mat_mul(detail::mat_mul(lift.A, lift.B),
                             detail::mat_mul(detail::mat_inv(lift.A), detail::mat_inv(lift.B)));
    return detail::mat_trace(c);
}

/**
 * @brief Trace of the simple closed geodesic of a slope, by the Farey
 *        recursion t(u+v) = t(u) t(v) - t(u-v) on neighbor pairs.
 *
 * Base values: t(1,0) = x, t(0,1) = y, t(1,1) = z, t(-1,1) = xy - z. The
 * walk descends the Stern-Brocot tree to the target slope.
 */
inline long double slope_trace(const MarkovTriple& t, const Slope& s) {
    if (s == Slope{1, 0}) return t.x;
    if (s == Slope{0, 1}) return t.y;
    if (s == Slope{1, 1}) return t.z;
    if (s == Slope{-1, 1}) return t.x * t.y - t.z;

    auto cross = [](std::int64_t p1, std::int64_t q1, std::int64_t p2, std::int64_t q2) {
        return p1 * q2 - q1 * p2;
    };

    std::int64_t pL, qL, pR, qR;
    long double tL, tR, tm;
    if (s.p >= 1) { // interior of [ (1,0), (0,1) ]
        pL = 1; qL = 0; pR = 0; qR = 1;
        tL = t.x; tR = t.y; tm = t.z;
    } else {        // interior of [ (0,1), (-1,0) ]
        pL = 0; qL = 1; pR = -1; qR = 0;
        tL = t.y; tR = t.x; tm = t.x * t.y - t.z;
    }
    std::int64_t pm = pL + pR, qm = qL + qR;
    std::int64_t orient = cross(pL, qL, pR, qR);
    for (;;) {
        if (pm == s.p && qm == s.q) return tm;
        // s = a*(pL,qL) + b*(pR,qR) with positive integers a, b
        std::int64_t a = cross(s.p, s.q, pR, qR) / orient;
        std::int64_t b = cross(pL, qL, s.p, s.q) / orient;
        if (a <= 0 || b <= 0)
            throw InvalidSlope("slope_trace: slope outside the search cone");
        if (a > b) { // descend toward the left endpoint
            pR = pm; qR = qm;
            long double told = tR;
            tR = tm;
            tm = tL * tm - told;
        } else {
            pL = pm; qL = qm;
            long double told = tL;
            tL = tm;
            tm = tm * tR - told;
        }
        pm = pL + pR; qm = qL + qR;
    }
}

/// Overflow-safe acosh for trace-scale arguments.
inline long double acosh_big(long double u) {
    if (u < 1.0L) u = 1.0L;
    if (u > 1e9L) return std::log(2.0L) + std::log(u); // relative error < 1e-18
    return std::log(u + std::sqrt(u * u - 1.0L));
}

/// Hyperbolic length of the geodesic of a slope: 2 acosh(trace / 2).
inline double hyp_length(const MarkovTriple& t, const Slope& s) {
    long double tr = slope_trace(t, s);
    if (!(tr > 2.0L))
        throw DegenerateStructure("hyp_length: trace must exceed 2");
    return double(2.0L * acosh_big(tr / 2.0L));
}

namespace detail {
// Traces of the re-marked structure with t_{T'}(s) = t_T(M s).
inline MarkovTriple remark(const MarkovTriple& t, const MappingClass& m) {
    auto image = [&](std::int64_t p, std::int64_t q) {
        return canonicalize(m.a * p + m.b * q, m.c * p + m.d * q);
    };
    return MarkovTriple{slope_trace(t, image(1, 0)),
                        slope_trace(t, image(0, 1)),
                        slope_trace(t, image(1, 1))};
}

// n positive twists about (1,0): (x, y, z) -> (x, z, xz - y) per step.
inline MarkovTriple basic_twist(const MarkovTriple& t, std::int64_t n) {
    MarkovTriple r = t;
    for (std::int64_t k = 0; k < n; ++k) r = MarkovTriple{r.x, r.z, r.x * r.z - r.y};
    for (std::int64_t k = 0; k > n; --k) r = MarkovTriple{r.x, r.x * r.y - r.z, r.y};
    return r;
}
} // namespace detail

/**
 * @brief Re-marking by n positive Dehn twists about alpha; for alpha = (1,0)
 *        and n = 1 this is (x, y, z) -> (x, z, xz - y).
 *
 * General alpha goes through the horizontal chart: conjugating the basic
 * twist by the extended-gcd marking keeps every intermediate slope short,
 * which the direct image-slope walk does not (its word lengths are quadratic
 * in the twisting slope and lose precision to cancellation).
 */
inline MarkovTriple twist_action_triple(const MarkovTriple& t, const Slope& alpha,
                                        std::int64_t n) {
    if (n == 0) return t;
    if (alpha == Slope{1, 0}) return detail::basic_twist(t, n);
    MappingClass m = marking_to_horizontal(alpha);
    return detail::remark(detail::basic_twist(detail::remark(t, m), n), m.inverse());
}

/**
 * @brief Fenchel-Nielsen twist of hyperbolic distance `time` along the
 *        geodesic of slope alpha.
 *
 * Re-marks alpha to (1,0), lifts, replaces B by diag(e^{t/2}, e^{-t/2}) B,
 * reads the new traces, and re-marks back. The twisted curve keeps its
 * length, the cusp relation is preserved for every t, and time
 * ell_alpha(T) equals one positive Dehn twist.
 *
 * Conditioning note: the returned coordinates grow like exp(t/2), so
 * recovering O(1) invariants of the moved structure at a non-basis slope
 * loses relative precision like eps * exp(t); per-sample residuals in flow
 * traces make that loss visible.
 */
inline MarkovTriple eq_twist(const MarkovTriple& t, const Slope& alpha, double time) {
    if (time == 0.0) return t;
    MappingClass m = marking_to_horizontal(alpha);
    MarkovTriple chart = alpha == Slope{1, 0} ? t : detail::remark(t, m);

    long double lam = (chart.x + std::sqrt(chart.x * chart.x - 4.0L)) / 2.0L;
    long double e = (lam * chart.z - chart.y) / (lam * lam - 1.0L);
    long double h = chart.y - e;
    long double u = std::exp((long double)time / 2.0L);
    MarkovTriple twisted{chart.x, e * u + h / u, lam * e * u + h / (lam * u)};

    if (alpha == Slope{1, 0}) return twisted;
    return detail::remark(twisted, m.inverse());
}

/**
 * @brief Thurston-type vector: sup-normalized hyperbolic lengths over a
 *        curve family.
 */
inline ProjectiveVector thurston_vec(const MarkovTriple& t, const CurveFamily& fam) {
    std::vector<double> vals;
    vals.reserve(fam.size());
    for (const Slope& s : fam) vals.push_back(hyp_length(t, s));
    return ProjectiveVector::normalized(fam, std::move(vals));
}

} // namespace teichflow
