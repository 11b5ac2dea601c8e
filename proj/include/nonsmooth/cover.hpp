#pragma once

// The Z-cover of the projective line. A cover point is a projective point together with a sheet
// index; sheet n is the half-open window [(0, n), (0, n+1)) in traversal order, and the deck
// transformation adds one to the sheet.

#include <algorithm>
#include <compare>
#include <optional>
#include <string>

#include "nonsmooth/projline.hpp"

namespace nonsmooth {

struct CoverPoint {
    ProjPoint base;
    BigInt sheet = 0;

    CoverPoint() = default;
    CoverPoint(ProjPoint b, BigInt s) : base(std::move(b)), sheet(std::move(s)) {}
    CoverPoint(const Rat& t, BigInt s) : base(t), sheet(std::move(s)) {}

    /// Deck translate by k sheets.
    CoverPoint shifted(const BigInt& k) const { return {base, sheet + k}; }
    CoverPoint operator+(long long k) const { return shifted(BigInt(k)); }
    CoverPoint operator-(long long k) const { return shifted(BigInt(-k)); }

    friend bool operator==(const CoverPoint&, const CoverPoint&) = default;
    friend std::strong_ordering operator<=>(const CoverPoint& x, const CoverPoint& y) {
        if (x.sheet < y.sheet) return std::strong_ordering::less;
        if (x.sheet > y.sheet) return std::strong_ordering::greater;
        return traversal_cmp(x.base, y.base);
    }

    /// "t@sheet", e.g. "1/2@0" or "inf@-1".
    std::string str() const { return base.str() + "@" + sheet.str(); }

    /// Accepts "t@sheet", "t" (sheet 0), or "pt" for the basepoint (t = 0, sheet 0).
    static CoverPoint parse(std::string_view s) {
        if (s == "pt") return {};
        const auto at = s.find('@');
        if (at == std::string_view::npos) return {ProjPoint::parse(s), BigInt(0)};
        const Rat sh = Rat::parse(s.substr(at + 1));
        if (!sh.is_integer()) throw Error(ErrorCode::Parse, "sheet must be an integer");
        return {ProjPoint::parse(s.substr(0, at)), sh.num()};
    }
};

inline std::strong_ordering cover_cmp(const CoverPoint& x, const CoverPoint& y) { return x <=> y; }

/// The cover basepoint (t = 0) on sheet k.
inline CoverPoint cover_basepoint(const BigInt& k = 0) { return {ProjPoint(), k}; }

/// The unique point over `base` in the half-open window [start, start + 1).
inline CoverPoint place_in_window(const ProjPoint& base, const CoverPoint& start) {
    if (traversal_cmp(base, start.base) >= 0) return {base, start.sheet};
    return {base, start.sheet + 1};
}

/// An order-preserving, deck-equivariant lift of a Moebius map, pinned by the image of the
/// cover basepoint (t = 0, sheet 0).
class LiftedMap {
public:
    LiftedMap() = default;
    LiftedMap(MoebiusMap m, CoverPoint basepoint_image)
        : moebius_(std::move(m)), image_(std::move(basepoint_image)) {
        if (!(apply_moebius(moebius_, ProjPoint()) == image_.base))
            throw Error(ErrorCode::InvalidArgument, "basepoint image does not lie over M(0)");
    }

    /// The lift sending the basepoint into sheet 0.
    static LiftedMap standard(const MoebiusMap& m) { return {m, {apply_moebius(m, ProjPoint()), BigInt(0)}}; }
    static LiftedMap identity() { return {}; }
    static LiftedMap deck(long long k) { return {MoebiusMap(), cover_basepoint(BigInt(k))}; }

    const MoebiusMap& moebius() const { return moebius_; }
    const CoverPoint& basepoint_image() const { return image_; }

    CoverPoint operator()(const CoverPoint& x) const {
        // x lies in the window of sheet x.sheet, whose start maps to image_ + x.sheet.
        return place_in_window(apply_moebius(moebius_, x.base), image_.shifted(x.sheet));
    }

    /// Post-composition with the deck translation by k.
    LiftedMap deck_shifted(const BigInt& k) const { return {moebius_, image_.shifted(k)}; }

    friend bool operator==(const LiftedMap&, const LiftedMap&) = default;

private:
    MoebiusMap moebius_;
    CoverPoint image_;
};

inline CoverPoint apply_lift(const LiftedMap& f, const CoverPoint& x) { return f(x); }

/// (f o g)(x) = f(g(x)).
inline LiftedMap compose_lifts(const LiftedMap& f, const LiftedMap& g) {
    return {f.moebius() * g.moebius(), f(g.basepoint_image())};
}

inline LiftedMap invert_lift(const LiftedMap& f) {
    const MoebiusMap inv = f.moebius().inverse();
    const CoverPoint guess(apply_moebius(inv, ProjPoint()), BigInt(0));
    // f(guess) lies over t = 0; correct the sheet so it lands on the basepoint.
    const CoverPoint hit = f(guess);
    return {inv, guess.shifted(-hit.sheet)};
}

/// Sign of the displacement f(x) - x in cover order.
inline int displacement_sign(const LiftedMap& f, const CoverPoint& x) {
    const auto c = f(x) <=> x;
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

/// A lift with a fixed point, plus the exact evidence for it: either a cover bracket (lo, hi) with
/// opposite displacement signs at the ends, or an exactly fixed point (lo == hi).
struct FixedPointLift {
    LiftedMap lift;
    CoverPoint lo;
    CoverPoint hi;
    bool exact = false;
    int sign_lo = 0;
    int sign_hi = 0;
    RootBracket affine_bracket;  // unused when the fixed point is at infinity
};

namespace detail {

// Lifts the affine interval (lo, hi) to the cover: lo on sheet 0, hi the next point over hi.
inline std::pair<CoverPoint, CoverPoint> lift_interval(const Rat& lo, const Rat& hi) {
    CoverPoint l(lo, BigInt(0));
    return {l, place_in_window(ProjPoint(hi), l)};
}

// Among the deck powers of `base`, the unique one satisfying `ok`.
template <class Pred>
std::optional<LiftedMap> find_deck_power(const LiftedMap& base, const CoverPoint& probe, Pred ok) {
    const BigInt s = base(probe).sheet - probe.sheet;
    for (long long d = -2; d <= 2; ++d) {
        LiftedMap cand = base.deck_shifted(-s + d);
        if (ok(cand)) return cand;
    }
    return std::nullopt;
}

}  // namespace detail

/// Selects the lift of `m` that has fixed points, certified by exact displacement signs.
///
/// Uses the first finite fixed point in traversal order. Brackets are refined until they avoid
/// t = 0, so they sit strictly inside the sheet-0 window.
inline FixedPointLift fixed_point_lift(const MoebiusMap& m) {
    const LiftedMap base = LiftedMap::standard(m);
    const Quadratic f = fixed_quadratic(m);
    if (f.is_zero()) {  // identity
        return {LiftedMap::identity(), cover_basepoint(), cover_basepoint(), true, 0, 0, {Rat(0), Rat(0), true}};
    }
    std::vector<RootBracket> roots = bracket_roots(f);
    for (auto& r : roots)
        r = refine_bracket(f, r, [](const Rat& lo, const Rat& hi) { return lo.sign() * hi.sign() > 0; });

    auto exact_at = [&](const CoverPoint& x) -> std::optional<FixedPointLift> {
        auto lift = detail::find_deck_power(base, x, [&](const LiftedMap& c) { return c(x) == x; });
        if (!lift) return std::nullopt;
        return FixedPointLift{*lift, x, x, true, 0, 0, {}};
    };

    if (roots.empty()) {
        if (m.c().is_zero()) {  // parabolic at infinity
            if (auto r = exact_at(CoverPoint(ProjPoint::infinity(), BigInt(0)))) return *r;
        }
        throw Error(ErrorCode::NoRealFixedPoint, "Moebius map is elliptic");
    }
    std::sort(roots.begin(), roots.end(), [](const RootBracket& x, const RootBracket& y) {
        return traversal_cmp(ProjPoint(x.lo), ProjPoint(y.lo)) < 0;
    });
    const RootBracket& r = roots.front();
    if (r.exact) {
        auto out = exact_at(CoverPoint(r.lo, BigInt(0)));
        if (!out) throw Error(ErrorCode::NoRealFixedPoint, "no lift fixes the rational root");
        out->affine_bracket = r;
        return *out;
    }
    const auto [lo, hi] = detail::lift_interval(r.lo, r.hi);
    auto lift = detail::find_deck_power(base, lo, [&](const LiftedMap& c) {
        return displacement_sign(c, lo) * displacement_sign(c, hi) < 0;
    });
    if (!lift) throw Error(ErrorCode::NoRealFixedPoint, "no deck power changes displacement sign");
    return {*lift, lo, hi, false, displacement_sign(*lift, lo), displacement_sign(*lift, hi), r};
}

/// Order embedding of the cover line into (0, 1).
///
/// lambda = sheet + w(t), with w(t) = t / (2(1+t)) on [0, inf), w(inf) = 1/2, and
/// w(t) = 1/2 + 1/(2(1-t)) on (-inf, 0); then lambda -> (lambda / (1 + |lambda|) + 1) / 2.
inline Rat cover_coordinate(const CoverPoint& x) {
    Rat w;
    if (x.base.is_infinite()) {
        w = Rat(1, 2);
    } else {
        const Rat t = x.base.affine();
        if (t.sign() >= 0) w = t / (Rat(2) * (Rat(1) + t));
        else w = Rat(1, 2) + Rat(1) / (Rat(2) * (Rat(1) - t));
    }
    return Rat(x.sheet) + w;
}

inline Rat compactify(const CoverPoint& x) {
    const Rat lambda = cover_coordinate(x);
    return (lambda / (Rat(1) + lambda.abs()) + Rat(1)) / Rat(2);
}

/// Inverse of compactify on (0, 1).
inline CoverPoint decompactify(const Rat& u) {
    if (u.sign() <= 0 || u >= Rat(1)) throw Error(ErrorCode::OutOfDomain, "compactified point must lie in (0,1)");
    const Rat y = Rat(2) * u - Rat(1);  // in (-1, 1)
    const Rat lambda = y / (Rat(1) - y.abs());
    const BigInt sheet = lambda.floor();
    const Rat w = lambda - Rat(sheet);
    const Rat half(1, 2);
    if (w < half) return {w * Rat(2) / (Rat(1) - Rat(2) * w), sheet};
    if (w == half) return {ProjPoint::infinity(), sheet};
    return {Rat(1) - Rat(1) / (Rat(2) * w - Rat(1)), sheet};
}

/// Whether f^n(x) > x + (n - 1) in cover order.
inline bool displacement_growth_check(const LiftedMap& f, const CoverPoint& x, long long n) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be positive");
    CoverPoint y = x;
    for (long long i = 0; i < n; ++i) y = f(y);
    return y > x + (n - 1);
}

}  // namespace nonsmooth
