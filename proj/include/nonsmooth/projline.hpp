#pragma once

// Exact arithmetic on the rational projective line: points [p:q], orientation-preserving
// Moebius maps, the cyclic traversal order, and certified fixed-point brackets.

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "nonsmooth/rat.hpp"

namespace nonsmooth {

/// A point [p:q] of RP^1, normalized so gcd(|p|,|q|) = 1 and q > 0, or [1:0] at infinity.
class ProjPoint {
public:
    ProjPoint() : p_(0), q_(1) {}
    ProjPoint(BigInt p, BigInt q) : p_(std::move(p)), q_(std::move(q)) { normalize(); }
    explicit ProjPoint(const Rat& t) : p_(t.num()), q_(t.den()) {}

    static ProjPoint infinity() { return ProjPoint(BigInt(1), BigInt(0)); }

    const BigInt& p() const { return p_; }
    const BigInt& q() const { return q_; }
    bool is_infinite() const { return q_.is_zero(); }

    /// Affine coordinate; throws on the point at infinity.
    Rat affine() const {
        if (is_infinite()) throw Error(ErrorCode::OutOfDomain, "affine coordinate of infinity");
        return Rat(p_, q_);
    }

    /// "n/d" or "inf".
    std::string str() const { return is_infinite() ? std::string("inf") : affine().str(); }

    static ProjPoint parse(std::string_view s) {
        if (s == "inf" || s == "oo" || s == "infinity") return infinity();
        return ProjPoint(Rat::parse(s));
    }

    friend bool operator==(const ProjPoint&, const ProjPoint&) = default;

private:
    void normalize() {
        if (p_.is_zero() && q_.is_zero()) throw Error(ErrorCode::InvalidArgument, "projective point [0:0]");
        if (q_.is_zero()) {
            p_ = 1;
            return;
        }
        if (q_.sign() < 0) {
            p_ = -p_;
            q_ = -q_;
        }
        BigInt g = boost::multiprecision::gcd(p_, q_);
        if (g != 1) {
            p_ /= g;
            q_ /= g;
        }
    }

    BigInt p_;
    BigInt q_;
};

/// Cyclic traversal order starting at t = 0: [0, inf) increasing, then inf, then (-inf, 0) increasing.
inline std::strong_ordering traversal_cmp(const ProjPoint& u, const ProjPoint& v) {
    auto arc = [](const ProjPoint& x) {
        if (x.is_infinite()) return 1;
        return x.p().sign() >= 0 ? 0 : 2;
    };
    const int au = arc(u);
    const int av = arc(v);
    if (au != av) return au <=> av;
    if (au == 1) return std::strong_ordering::equal;
    // Same finite arc, q > 0 on both: compare p/q by cross-multiplication.
    const BigInt lhs = u.p() * v.q();
    const BigInt rhs = v.p() * u.q();
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

/// t -> (a t + b) / (c t + d) with ad - bc > 0.
class MoebiusMap {
public:
    MoebiusMap() : a_(1), b_(0), c_(0), d_(1) {}
    MoebiusMap(Rat a, Rat b, Rat c, Rat d) : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
        if (det().sign() <= 0)
            throw Error(ErrorCode::InvalidArgument, "Moebius matrix must have positive determinant");
    }
    /// Integral matrix; entries are divided by their content so equal maps get equal matrices.
    static MoebiusMap integral(long long a, long long b, long long c, long long d) {
        BigInt g = boost::multiprecision::gcd(boost::multiprecision::gcd(BigInt(a), BigInt(b)),
                                              boost::multiprecision::gcd(BigInt(c), BigInt(d)));
        if (g.is_zero()) g = 1;
        return MoebiusMap(Rat(BigInt(a) / g), Rat(BigInt(b) / g), Rat(BigInt(c) / g), Rat(BigInt(d) / g));
    }
    static MoebiusMap identity() { return MoebiusMap(); }

    const Rat& a() const { return a_; }
    const Rat& b() const { return b_; }
    const Rat& c() const { return c_; }
    const Rat& d() const { return d_; }

    Rat det() const { return a_ * d_ - b_ * c_; }
    Rat trace() const { return a_ + d_; }

    /// Adjugate; represents the inverse map without dividing by the determinant.
    MoebiusMap inverse() const { return MoebiusMap(d_, -b_, -c_, a_); }

    /// Matrix product: (M * N)(u) = M(N(u)).
    friend MoebiusMap operator*(const MoebiusMap& m, const MoebiusMap& n) {
        return MoebiusMap(m.a_ * n.a_ + m.b_ * n.c_, m.a_ * n.b_ + m.b_ * n.d_,
                          m.c_ * n.a_ + m.d_ * n.c_, m.c_ * n.b_ + m.d_ * n.d_);
    }

    /// Same projective map (matrices agree up to a positive or negative scalar).
    bool same_map(const MoebiusMap& o) const {
        return a_ * o.b_ == b_ * o.a_ && a_ * o.c_ == c_ * o.a_ && a_ * o.d_ == d_ * o.a_ &&
               b_ * o.c_ == c_ * o.b_ && b_ * o.d_ == d_ * o.b_ && c_ * o.d_ == d_ * o.c_;
    }

    friend bool operator==(const MoebiusMap&, const MoebiusMap&) = default;

    std::array<std::array<std::string, 2>, 2> strings() const {
        return {{{a_.str(), b_.str()}, {c_.str(), d_.str()}}};
    }

private:
    Rat a_, b_, c_, d_;
};

inline ProjPoint apply_moebius(const MoebiusMap& m, const ProjPoint& u) {
    const Rat p(u.p());
    const Rat q(u.q());
    const Rat np = m.a() * p + m.b() * q;
    const Rat nq = m.c() * p + m.d() * q;
    // Clear denominators before building the integral point.
    const BigInt l = boost::multiprecision::lcm(np.den(), nq.den());
    return ProjPoint(np.num() * (l / np.den()), nq.num() * (l / nq.den()));
}

/// Coefficients (c2, c1, c0) of c2 t^2 + c1 t + c0.
struct Quadratic {
    Rat c2, c1, c0;

    Rat operator()(const Rat& t) const { return (c2 * t + c1) * t + c0; }
    bool is_zero() const { return c2.is_zero() && c1.is_zero() && c0.is_zero(); }
    Rat discriminant() const { return c1 * c1 - Rat(4) * c2 * c0; }
    friend bool operator==(const Quadratic&, const Quadratic&) = default;
};

/// Finite fixed points of t -> (a t + b)/(c t + d) solve c t^2 + (d - a) t - b = 0.
inline Quadratic fixed_quadratic(const MoebiusMap& m) { return {m.c(), m.d() - m.a(), -m.b()}; }

/// An isolating interval for one real root. When `exact`, lo == hi is the root itself;
/// otherwise the quadratic has strictly opposite signs at lo and hi.
struct RootBracket {
    Rat lo, hi;
    bool exact = false;
    friend bool operator==(const RootBracket&, const RootBracket&) = default;
};

namespace detail {

// Position of x relative to the real roots r1 < r2 (or the single root r1):
// 0 below r1, 1 at r1, 2 between, 3 at r2, 4 above r2.
class RootLocator {
public:
    explicit RootLocator(const Quadratic& f) : f_(f) {
        if (f_.c2.sign() < 0) f_ = {-f_.c2, -f_.c1, -f_.c0};
        if (!f_.c2.is_zero()) vertex_ = -f_.c1 / (Rat(2) * f_.c2);
        else if (f_.c1.sign() < 0) f_ = {f_.c2, -f_.c1, -f_.c0};
    }

    int position(const Rat& x) const {
        const int s = f_(x).sign();
        if (!vertex_) {  // increasing linear
            return s < 0 ? 0 : (s == 0 ? 1 : 4);
        }
        if (s < 0) return 2;
        const bool left = x < *vertex_;
        if (s == 0) return left ? 1 : 3;
        return left ? 0 : 4;
    }

    int roots_inside(const Rat& lo, const Rat& hi) const {
        const int a = position(lo);
        const int b = position(hi);
        int n = 0;
        if (a < 1 && b > 1) ++n;
        if (vertex_ && a < 3 && b > 3) ++n;
        return n;
    }

private:
    Quadratic f_;
    std::optional<Rat> vertex_;
};

inline void isolate(const Quadratic& f, const RootLocator& loc, const Rat& lo, const Rat& hi,
                    std::vector<RootBracket>& out) {
    const int n = loc.roots_inside(lo, hi);
    if (n == 0) return;
    if (n == 1 && f(lo).sign() * f(hi).sign() < 0) {
        out.push_back({lo, hi, false});
        return;
    }
    const Rat mid = midpoint(lo, hi);
    isolate(f, loc, lo, mid, out);
    if (f(mid).is_zero()) out.push_back({mid, mid, true});
    isolate(f, loc, mid, hi, out);
}

}  // namespace detail

/// Isolates every real root of a nonzero quadratic, in increasing order.
///
/// Bisection starts from [-R, R] with R = 1 + max|c_i| / |c_lead| and splits at midpoints
/// until each piece holds one sign change. A double root is rational and is returned exactly,
/// as is any root hit by a midpoint.
inline std::vector<RootBracket> bracket_roots(const Quadratic& f) {
    if (f.is_zero()) throw Error(ErrorCode::DegenerateQuadratic, "every point is fixed");
    std::vector<RootBracket> out;
    if (f.c2.is_zero() && f.c1.is_zero()) return out;  // nonzero constant

    if (!f.c2.is_zero()) {
        const int disc = f.discriminant().sign();
        if (disc < 0) return out;
        if (disc == 0) {
            const Rat r = -f.c1 / (Rat(2) * f.c2);
            out.push_back({r, r, true});
            return out;
        }
    }
    const Rat& lead = f.c2.is_zero() ? f.c1 : f.c2;
    const Rat rest = f.c2.is_zero() ? f.c0.abs() : std::max(f.c1.abs(), f.c0.abs());
    const Rat bound = Rat(1) + rest / lead.abs();
    const BigInt r = bound.is_integer() ? bound.floor() : BigInt(bound.floor() + 1);
    detail::RootLocator loc(f);
    detail::isolate(f, loc, Rat(-r), Rat(r), out);
    return out;
}

/// Bisects a sign-change bracket until `done(lo, hi)` holds or the root is hit exactly.
template <class Pred>
RootBracket refine_bracket(const Quadratic& f, RootBracket b, Pred done) {
    while (!b.exact && !done(b.lo, b.hi)) {
        const Rat mid = midpoint(b.lo, b.hi);
        const int sm = f(mid).sign();
        if (sm == 0) return {mid, mid, true};
        if (sm == f(b.lo).sign()) b.lo = mid;
        else b.hi = mid;
    }
    return b;
}

}  // namespace nonsmooth
