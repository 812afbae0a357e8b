#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <queue>
#include <vector>

#include "teichflow/slopes.hpp"

namespace teichflow {

/**
 * @brief Point tau = x + iy of the upper half-plane, encoding the marked
 *        unit-area flat torus with lattice basis (1, tau)/sqrt(y).
 */
struct TorusPoint {
    double x = 0.0;
    double y = 1.0;

    TorusPoint() = default;
    TorusPoint(double x_, double y_) : x(x_), y(y_) {
        if (!(y > 0.0)) throw ConfigError("TorusPoint: imaginary part must be positive");
    }
    std::complex<double> value() const { return {x, y}; }
};

/**
 * @brief Mapping-class action on the half-plane.
 *
 * For M = (a,b;c,d) returns (d*tau + b)/(c*tau + a). The convention is pinned
 * by the equivariance contract with act_slope and by the Dehn-twist
 * calibration of the earthquake flow; it is a right action,
 * act_tau(M, act_tau(N, tau)) = act_tau(N*M, tau).
 */
inline TorusPoint act_tau(const MappingClass& m, const TorusPoint& tau) {
    std::complex<double> t = tau.value();
    std::complex<double> img =
        (double(m.d) * t + double(m.b)) / (double(m.c) * t + double(m.a));
    return TorusPoint(img.real(), img.imag());
}

/// Same action for a real determinant-one matrix (used for irrational-direction charts).
inline TorusPoint act_tau_real(const std::array<double, 4>& m, const TorusPoint& tau) {
    std::complex<double> t = tau.value();
    std::complex<double> img = (m[3] * t + m[1]) / (m[2] * t + m[0]);
    return TorusPoint(img.real(), img.imag());
}

/**
 * @brief Extremal length of a direction class on the unit-area flat torus:
 *        |a + b*tau|^2 / Im(tau).
 *
 * Homogeneous of degree 2 in the direction and continuous in both arguments.
 */
inline double ext_length(const FoliationVector& v, const TorusPoint& tau) {
    double re = v.a + v.b * tau.x;
    double im = v.b * tau.y;
    return (re * re + im * im) / tau.y;
}

inline double ext_length(const Slope& s, const TorusPoint& tau) {
    return ext_length(FoliationVector::of(s), tau);
}

/// Flat (= sqrt of extremal) length of a class on the unit-area torus.
inline double flat_length(const FoliationVector& v, const TorusPoint& tau) {
    return std::sqrt(ext_length(v, tau));
}

inline double flat_length(const Slope& s, const TorusPoint& tau) {
    return std::sqrt(ext_length(s, tau));
}

/**
 * @brief Teichmueller distance, closed form: half the hyperbolic distance of
 *        the half-plane, acosh(1 + |t1-t2|^2 / (2 y1 y2)) / 2.
 */
inline double teich_dist(const TorusPoint& t1, const TorusPoint& t2) {
    double dx = t1.x - t2.x, dy = t1.y - t2.y;
    double u = 1.0 + (dx * dx + dy * dy) / (2.0 * t1.y * t2.y);
    return 0.5 * std::acosh(std::max(1.0, u));
}

namespace detail {

// Positive quadratic form of Ext on direction space: Q(a,b) = Ext_{(a,b)}(tau).
struct ExtForm {
    long double q11, q12, q22; // [[q11,q12],[q12,q22]], det = 1

    explicit ExtForm(const TorusPoint& tau) {
        long double x = tau.x, y = tau.y;
        q11 = 1.0L / y;
        q12 = x / y;
        q22 = (x * x + y * y) / y;
    }
    long double eval(long double a, long double b) const {
        return q11 * a * a + 2.0L * q12 * a * b + q22 * b * b;
    }
    long double bilin(long double a1, long double b1, long double a2, long double b2) const {
        return q11 * a1 * a2 + q12 * (a1 * b2 + b1 * a2) + q22 * b1 * b2;
    }
};

// Supremum of v^T N v / v^T D v over the closed cone spanned by two
// independent directions, via the 2x2 generalized eigenproblem restricted to
// that basis. Exact for the cone: if the top eigendirection leaves the cone
// the supremum sits at an edge.
inline long double cone_sup(const ExtForm& num, const ExtForm& den,
                            long double aL, long double bL,
                            long double aR, long double bR) {
    long double nLL = num.eval(aL, bL), nRR = num.eval(aR, bR);
    long double nLR = num.bilin(aL, bL, aR, bR);
    long double dLL = den.eval(aL, bL), dRR = den.eval(aR, bR);
    long double dLR = den.bilin(aL, bL, aR, bR);

    long double A = dLL * dRR - dLR * dLR; // > 0 for independent directions
    long double B = nLL * dRR + nRR * dLL - 2.0L * nLR * dLR;
    long double C = nLL * nRR - nLR * nLR;
    long double disc = B * B - 4.0L * A * C;
    if (disc < 0.0L) disc = 0.0L;
    long double lam = (B + std::sqrt(disc)) / (2.0L * A);

    // Eigenvector rows of (N - lam*D); pick the better-conditioned one.
    long double r1a = nLL - lam * dLL, r1b = nLR - lam * dLR;
    long double r2a = nLR - lam * dLR, r2b = nRR - lam * dRR;
    long double s, t;
    if (std::fabs(r1a) + std::fabs(r1b) >= std::fabs(r2a) + std::fabs(r2b)) {
        s = -r1b; t = r1a;
    } else {
        s = -r2b; t = r2a;
    }
    long double edge = std::max(nLL / dLL, nRR / dRR);
    if (s == 0.0L && t == 0.0L) return lam; // forms proportional on the cone
    if ((s >= 0.0L && t >= 0.0L) || (s <= 0.0L && t <= 0.0L)) return lam;
    return edge;
}

struct FareyNode {
    std::int64_t pL, qL, pR, qR;
    long double ub;
    bool operator<(const FareyNode& o) const { return ub < o.ub; }
};

} // namespace detail

/**
 * @brief Certified Farey-search route to the Teichmueller distance.
 *
 * Runs a branch-and-bound over the Stern-Brocot tree of slopes, maximizing
 * the extremal-length ratio Ext_s(t1)/Ext_s(t2). Each tree node covers a cone
 * of directions whose supremum is bounded analytically (2x2 pencil), so the
 * returned value encloses the true supremum within `gap` in distance units.
 */
inline double teich_dist_farey(const TorusPoint& t1, const TorusPoint& t2,
                               double gap = 1e-9) {
    if (t1.x == t2.x && t1.y == t2.y) return 0.0;
    detail::ExtForm num(t1), den(t2);

    auto ratio = [&](std::int64_t p, std::int64_t q) {
        return num.eval((long double)p, (long double)q) /
               den.eval((long double)p, (long double)q);
    };
    long double lower = std::max(
        std::max(ratio(1, 0), ratio(0, 1)),
        std::max(ratio(1, 1), ratio(-1, 1)));

    std::priority_queue<detail::FareyNode> frontier;
    auto push = [&](std::int64_t pL, std::int64_t qL, std::int64_t pR, std::int64_t qR) {
        long double ub = detail::cone_sup(num, den, (long double)pL, (long double)qL,
                                          (long double)pR, (long double)qR);
        if (ub > lower) frontier.push({pL, qL, pR, qR, ub});
    };
    push(1, 0, 0, 1);   // nonnegative slopes
    push(-1, 0, 0, 1);  // negative slopes

    long double upper = lower;
    for (int iter = 0; iter < 200000; ++iter) {
        if (frontier.empty()) { upper = lower; break; }
        const detail::FareyNode top = frontier.top();
        upper = std::max(top.ub, lower);
        if (0.5L * (std::log(upper) - std::log(lower)) <= (long double)gap) break;
        frontier.pop();
        std::int64_t pm = top.pL + top.pR, qm = top.qL + top.qR;
        lower = std::max(lower, ratio(pm, qm));
        push(top.pL, top.qL, pm, qm);
        push(pm, qm, top.pR, top.qR);
    }
    long double d_lo = 0.5L * std::log(lower);
    long double d_hi = 0.5L * std::log(upper);
    if (d_hi - d_lo > 2.0L * (long double)gap)
        throw NumericalFailure("teich_dist_farey: search did not certify the requested gap");
    return double(0.5L * (d_lo + d_hi));
}

/**
 * @brief Earthquake flow on the torus along a rational direction c*(p,q).
 *
 * Changes marking so the twisting slope becomes (1,0), shears the chart by
 * t*c*sqrt(Im), and maps back. Time ell_alpha equals one positive Dehn twist.
 */
inline TorusPoint earthquake_tau(const TorusPoint& tau, const Slope& alpha,
                                 double weight, double t) {
    if (weight <= 0.0) throw InvalidFoliation("earthquake_tau: weight must be positive");
    MappingClass m = marking_to_horizontal(alpha);
    TorusPoint chart = act_tau(m, tau);
    TorusPoint sheared(chart.x + t * weight * std::sqrt(chart.y), chart.y);
    return act_tau(m.inverse(), sheared);
}

/**
 * @brief Earthquake flow along an arbitrary (possibly irrational) direction,
 *        weight folded into the magnitude of mu.
 *
 * Uses the rotation chart sending mu to the horizontal direction; the result
 * does not depend on the choice of normalizing matrix, and for rational
 * directions agrees with the integer-marking route.
 */
inline TorusPoint earthquake_tau(const TorusPoint& tau, const FoliationVector& mu,
                                 double t) {
    double n = mu.norm();
    if (!(n > 0.0)) throw InvalidFoliation("earthquake_tau: zero direction");
    double a = mu.a / n, b = mu.b / n;
    // R^{-1} = [[a, b], [-b, a]] sends mu to (n, 0); chart = act_tau(R, tau).
    std::array<double, 4> rot{a, -b, b, a};      // R
    std::array<double, 4> rot_inv{a, b, -b, a};  // R^{-1}
    TorusPoint chart = act_tau_real(rot, tau);
    TorusPoint sheared(chart.x + t * n * std::sqrt(chart.y), chart.y);
    return act_tau_real(rot_inv, sheared);
}

/**
 * @brief Twist-asymptotics ratio Ext_beta(act_tau(twist^n_alpha, tau)) / n^2,
 *        which tends to Ext_alpha(tau) * i(alpha,beta)^2 as n grows.
 */
inline double converge_ratio(const TorusPoint& tau, const Slope& alpha,
                             const Slope& beta, std::int64_t n) {
    if (n <= 0) throw ConfigError("converge_ratio: n must be positive");
    TorusPoint image = act_tau(twist_matrix(alpha, n), tau);
    return ext_length(beta, image) / (double(n) * double(n));
}

/**
 * @brief Distance-vs-extremal-length consistency check: with
 *        d = teich_dist(t1,t2), every family member must satisfy
 *        e^{-2d} Ext_b(t1) <= Ext_b(t2) <= e^{2d} Ext_b(t1).
 *
 * Holds identically for exact inputs; a 1e-9 relative slack absorbs rounding.
 */
inline bool kerckhoff_bound_check(const TorusPoint& t1, const TorusPoint& t2,
                                  const CurveFamily& fam) {
    double d = teich_dist(t1, t2);
    double lo = std::exp(-2.0 * d), hi = std::exp(2.0 * d);
    const double slack = 1e-9;
    for (const Slope& s : fam) {
        double e1 = ext_length(s, t1), e2 = ext_length(s, t2);
        if (e2 < lo * e1 * (1.0 - slack)) return false;
        if (e2 > hi * e1 * (1.0 + slack)) return false;
    }
    return true;
}

} // namespace teichflow
