#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "teichflow/errors.hpp"

namespace teichflow {

/**
 * @brief Primitive integer pair (p,q) encoding an unoriented simple closed
 *        curve class on the torus.
 *
 * Canonical representative of the projective class: q > 0, or (q = 0, p = 1).
 * With that normalization a Slope is usable as a set/map key.
 */
struct Slope {
    std::int64_t p = 1;
    std::int64_t q = 0;

    friend bool operator==(const Slope& a, const Slope& b) {
        return a.p == b.p && a.q == b.q;
    }
    friend bool operator!=(const Slope& a, const Slope& b) { return !(a == b); }
    friend bool operator<(const Slope& a, const Slope& b) {
        return a.p != b.p ? a.p < b.p : a.q < b.q;
    }
};

/// Unique canonical primitive representative of the class of (p,q).
inline Slope canonicalize(std::int64_t p, std::int64_t q) {
    if (p == 0 && q == 0) throw InvalidSlope("canonicalize: zero vector");
    std::int64_t g = std::gcd(p < 0 ? -p : p, q < 0 ? -q : q);
    p /= g;
    q /= g;
    if (q < 0 || (q == 0 && p < 0)) { p = -p; q = -q; }
    return Slope{p, q};
}

inline std::string to_string(const Slope& s) {
    return std::to_string(s.p) + "/" + std::to_string(s.q);
}

/// Parses "p/q" and canonicalizes. Rejects malformed strings.
inline Slope parse_slope(const std::string& text) {
    std::size_t slash = text.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == text.size())
        throw InvalidSlope("parse_slope: expected \"p/q\", got \"" + text + "\"");
    char* end = nullptr;
    long long p = std::strtoll(text.c_str(), &end, 10);
    if (end != text.c_str() + slash)
        throw InvalidSlope("parse_slope: bad numerator in \"" + text + "\"");
    long long q = std::strtoll(text.c_str() + slash + 1, &end, 10);
    if (end != text.c_str() + text.size())
        throw InvalidSlope("parse_slope: bad denominator in \"" + text + "\"");
    return canonicalize(p, q);
}

/**
 * @brief Real direction vector (a,b) with a transverse weight folded into
 *        its magnitude; the torus model of a measured foliation.
 *
 * Rational directions recover weighted simple closed curves c*(p,q).
 */
struct FoliationVector {
    double a = 0.0;
    double b = 0.0;

    FoliationVector() = default;
    FoliationVector(double a_, double b_) : a(a_), b(b_) {
        if (a == 0.0 && b == 0.0)
            throw InvalidFoliation("FoliationVector: zero vector");
    }
    static FoliationVector of(const Slope& s, double weight = 1.0) {
        if (weight <= 0.0) throw InvalidFoliation("FoliationVector: weight must be positive");
        return FoliationVector(weight * double(s.p), weight * double(s.q));
    }
    double norm() const { return std::hypot(a, b); }
};

/// Geometric intersection number of torus classes: |a1*b2 - b1*a2|.
inline double intersection(const FoliationVector& u, const FoliationVector& v) {
    return std::fabs(u.a * v.b - u.b * v.a);
}

/// Exact integer intersection of two slopes, |p*s - q*r|.
inline std::int64_t intersection(const Slope& u, const Slope& v) {
    std::int64_t d = u.p * v.q - u.q * v.p;
    return d < 0 ? -d : d;
}

inline double intersection(const FoliationVector& u, const Slope& v) {
    return std::fabs(u.a * double(v.q) - u.b * double(v.p));
}

/**
 * @brief Mapping class of the (punctured) torus: an integer 2x2 matrix of
 *        determinant one, columns (a,c), (b,d).
 */
struct MappingClass {
    std::int64_t a = 1, b = 0, c = 0, d = 1;

    MappingClass() = default;
    MappingClass(std::int64_t a_, std::int64_t b_, std::int64_t c_, std::int64_t d_)
        : a(a_), b(b_), c(c_), d(d_) {
        if (a * d - b * c != 1)
            throw ConfigError("MappingClass: determinant must be 1");
    }

    static MappingClass identity() { return MappingClass(); }

    MappingClass inverse() const { return MappingClass(d, -b, -c, a); }

    friend MappingClass operator*(const MappingClass& m, const MappingClass& n) {
        return MappingClass(m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
                            m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d);
    }
    friend bool operator==(const MappingClass& m, const MappingClass& n) {
        return m.a == n.a && m.b == n.b && m.c == n.c && m.d == n.d;
    }
};

/**
 * @brief n-th power of the positive Dehn twist about a canonical slope.
 *
 * Returns I + n*(-pq, p^2; -q^2, pq); unipotent, fixes (p,q), and satisfies
 * the group law twist_matrix(s,m)*twist_matrix(s,n) = twist_matrix(s,m+n).
 */
inline MappingClass twist_matrix(const Slope& s, std::int64_t n) {
    return MappingClass(1 - n * s.p * s.q, n * s.p * s.p,
                        -n * s.q * s.q, 1 + n * s.p * s.q);
}

/**
 * @brief Action of a mapping class on curve classes.
 *
 * Acts by the inverse matrix on column vectors: this is the marking action
 * paired with act_tau so that extremal lengths are equivariant,
 * Ext_{act_slope(M,s)}(act_tau(M,tau)) = Ext_s(tau). It preserves
 * intersection numbers.
 */
inline Slope act_slope(const MappingClass& m, const Slope& s) {
    // inverse of (a,b;c,d) is (d,-b;-c,a)
    return canonicalize(m.d * s.p - m.b * s.q, -m.c * s.p + m.a * s.q);
}

/**
 * @brief Marking change with first column alpha, built from the extended
 *        Euclidean algorithm; act_slope of it carries alpha to (1,0).
 */
inline MappingClass marking_to_horizontal(const Slope& alpha) {
    std::int64_t r0 = alpha.p, r1 = alpha.q;
    std::int64_t s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (r1 != 0) {
        std::int64_t k = r0 / r1;
        std::int64_t r2 = r0 - k * r1; r0 = r1; r1 = r2;
        std::int64_t s2 = s0 - k * s1; s0 = s1; s1 = s2;
        std::int64_t t2 = t0 - k * t1; t0 = t1; t1 = t2;
    }
    if (r0 == -1) { s0 = -s0; t0 = -t0; } // s0*p + t0*q = 1
    return MappingClass(alpha.p, -t0, alpha.q, s0);
}

inline FoliationVector act_foliation(const MappingClass& m, const FoliationVector& v) {
    return FoliationVector(double(m.d) * v.a - double(m.b) * v.b,
                           -double(m.c) * v.a + double(m.a) * v.b);
}

/// Ordered list of distinct canonical slopes.
using CurveFamily = std::vector<Slope>;

/**
 * @brief Finite truncation of the curve system by Stern-Brocot mediants.
 *
 * Depth 0 is {(1,0),(0,1),(1,1)}; each further level appends the mediants of
 * the current Farey intervals, breadth-first, left to right (descending
 * slope value p/q). farey_family(d) is a prefix of farey_family(d+1).
 */
inline CurveFamily farey_family(int depth) {
    if (depth < 0) throw ConfigError("farey_family: depth must be >= 0");
    if (depth > 20) throw ConfigError("farey_family: depth too large");
    CurveFamily fam = {Slope{1, 0}, Slope{0, 1}, Slope{1, 1}};
    // Farey intervals as (left, right) endpoint pairs.
    std::vector<std::pair<Slope, Slope>> intervals = {
        {Slope{1, 0}, Slope{1, 1}}, {Slope{1, 1}, Slope{0, 1}}};
    for (int level = 1; level <= depth; ++level) {
        std::vector<std::pair<Slope, Slope>> next;
        next.reserve(intervals.size() * 2);
        for (const auto& [l, r] : intervals) {
            Slope m{l.p + r.p, l.q + r.q};
            fam.push_back(m);
            next.emplace_back(l, m);
            next.emplace_back(m, r);
        }
        intervals = std::move(next);
    }
    return fam;
}

/// Index of a slope in a family, or -1.
inline int family_index(const CurveFamily& fam, const Slope& s) {
    for (std::size_t i = 0; i < fam.size(); ++i)
        if (fam[i] == s) return int(i);
    return -1;
}

} // namespace teichflow
