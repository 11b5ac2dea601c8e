#pragma once

// Piecewise-linear homeomorphisms of [0,1].
//
// Two kinds of primitive: PLMap with a finite breakpoint list, and ModelTranslation, a map
// conjugate to t -> t + k through the dyadic chart psi (psi(i) = c_i = 2^i / (2^i + 1), linear
// between integers). A ModelTranslation has breakpoints accumulating at both ends of its support
// and is evaluated by locating the containing chart piece, never by listing breakpoints.
// IntervalMapExpr is a lazy composition of primitives and affinely conjugated sub-expressions.

#include <algorithm>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nonsmooth/rat.hpp"

namespace nonsmooth {

enum class Side { Left, Right };

inline std::string_view to_string(Side s) { return s == Side::Left ? "left" : "right"; }

namespace chart {

/// c_i = 2^i / (2^i + 1).
inline Rat anchor(long i) {
    const Rat p = pow2(i);
    return p / (p + Rat(1));
}

/// The integer i with c_i <= s < c_{i+1}, for s in (0, 1).
inline long piece(const Rat& s) { return floor_log2(s / (Rat(1) - s)); }

/// psi(t) for rational t.
inline Rat psi(const Rat& t) {
    const BigInt fl = t.floor();
    const long i = fl.convert_to<long>();
    const Rat frac = t - Rat(fl);
    const Rat lo = anchor(i);
    return lo + frac * (anchor(i + 1) - lo);
}

/// psi^{-1}(s) for s in (0, 1).
inline Rat psi_inverse(const Rat& s) {
    const long i = piece(s);
    const Rat lo = anchor(i);
    return Rat(i) + (s - lo) / (anchor(i + 1) - lo);
}

/// Slope of piece i under t -> t + k: (c_{i+k+1} - c_{i+k}) / (c_{i+1} - c_i).
inline Rat piece_slope(long i, long long k) {
    return (anchor(i + k + 1) - anchor(i + k)) / (anchor(i + 1) - anchor(i));
}

}  // namespace chart

/// The affine map s -> lo + s (hi - lo) of [0,1] onto [lo, hi].
struct AffineChart {
    Rat lo, hi;

    Rat operator()(const Rat& s) const { return lo + s * (hi - lo); }
    Rat inverse(const Rat& x) const { return (x - lo) / (hi - lo); }
    bool contains_interior(const Rat& x) const { return lo < x && x < hi; }
    friend bool operator==(const AffineChart&, const AffineChart&) = default;
};

/// theta_J for J = [l, r] with 0 < l < r < 1.
inline AffineChart conjugate_into(const Rat& l, const Rat& r) {
    if (!(Rat(0) < l && l < r && r < Rat(1)))
        throw Error(ErrorCode::BadInterval, "need 0 < l < r < 1, got [" + l.str() + ", " + r.str() + "]");
    return {l, r};
}

/// Finite-breakpoint PL homeomorphism of [0,1].
class PLMap {
public:
    using Point = std::pair<Rat, Rat>;

    PLMap() : pts_{{Rat(0), Rat(0)}, {Rat(1), Rat(1)}} {}
    explicit PLMap(std::vector<Point> pts) : pts_(std::move(pts)) {
        if (pts_.size() < 2 || pts_.front() != Point{Rat(0), Rat(0)} || pts_.back() != Point{Rat(1), Rat(1)})
            throw Error(ErrorCode::InvalidArgument, "PL map must run from (0,0) to (1,1)");
        for (std::size_t j = 1; j < pts_.size(); ++j)
            if (!(pts_[j - 1].first < pts_[j].first && pts_[j - 1].second < pts_[j].second))
                throw Error(ErrorCode::InvalidArgument, "PL breakpoints must be strictly increasing");
    }

    const std::vector<Point>& breakpoints() const { return pts_; }

    Rat operator()(const Rat& x) const {
        const std::size_t j = segment(x, Side::Right);
        return pts_[j].second + slope_of(j) * (x - pts_[j].first);
    }

    Rat slope(const Rat& x, Side side) const { return slope_of(segment(x, side)); }

    PLMap inverse() const {
        std::vector<Point> inv;
        inv.reserve(pts_.size());
        for (const auto& [x, y] : pts_) inv.emplace_back(y, x);
        return PLMap(std::move(inv));
    }

    /// (f o g) as a PLMap: breakpoints are g's plus the g-preimages of f's.
    friend PLMap compose(const PLMap& f, const PLMap& g) {
        std::vector<Rat> xs;
        for (const auto& p : g.pts_) xs.push_back(p.first);
        const PLMap ginv = g.inverse();
        for (const auto& p : f.pts_) xs.push_back(ginv(p.first));
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        std::vector<Point> out;
        for (const auto& x : xs) out.emplace_back(x, f(g(x)));
        return PLMap(simplify(std::move(out)));
    }

    friend bool operator==(const PLMap&, const PLMap&) = default;

private:
    // Index j of the segment [x_j, x_{j+1}] adjacent to x on the given side.
    std::size_t segment(const Rat& x, Side side) const {
        if (x < Rat(0) || x > Rat(1)) throw Error(ErrorCode::OutOfDomain, x.str() + " outside [0,1]");
        auto it = std::upper_bound(pts_.begin(), pts_.end(), x,
                                   [](const Rat& v, const Point& p) { return v < p.first; });
        std::size_t j = static_cast<std::size_t>(it - pts_.begin()) - 1;  // x_j <= x < x_{j+1}
        if (side == Side::Left && pts_[j].first == x && j > 0) --j;
        if (j + 1 >= pts_.size()) j = pts_.size() - 2;
        return j;
    }
    Rat slope_of(std::size_t j) const {
        return (pts_[j + 1].second - pts_[j].second) / (pts_[j + 1].first - pts_[j].first);
    }
    // Drops breakpoints where the slope does not change.
    static std::vector<Point> simplify(std::vector<Point> pts) {
        std::vector<Point> out{pts.front()};
        for (std::size_t j = 1; j + 1 < pts.size(); ++j) {
            const Point& a = out.back();
            const Point& b = pts[j];
            const Point& c = pts[j + 1];
            if ((b.second - a.second) * (c.first - b.first) != (c.second - b.second) * (b.first - a.first))
                out.push_back(b);
        }
        out.push_back(pts.back());
        return out;
    }

    std::vector<Point> pts_;
};

/// theta_J o psi o (t -> t + power) o psi^{-1} o theta_J^{-1} on J, identity off J.
class ModelTranslation {
public:
    ModelTranslation(Rat l, Rat r, long long power) : support_{std::move(l), std::move(r)}, power_(power) {
        if (!(Rat(0) <= support_.lo && support_.lo < support_.hi && support_.hi <= Rat(1)))
            throw Error(ErrorCode::BadInterval, "support must satisfy 0 <= l < r <= 1");
    }

    const AffineChart& support() const { return support_; }
    long long power() const { return power_; }

    Rat operator()(const Rat& x) const {
        if (power_ == 0 || !support_.contains_interior(x)) return x;
        const Rat s = support_.inverse(x);
        const long i = chart::piece(s);
        const Rat lo = chart::anchor(i);
        const Rat frac = (s - lo) / (chart::anchor(i + 1) - lo);
        const Rat nlo = chart::anchor(i + power_);
        return support_(nlo + frac * (chart::anchor(i + power_ + 1) - nlo));
    }

    Rat slope(const Rat& x, Side side) const {
        if (power_ == 0) return Rat(1);
        const bool inside_from_side = (x == support_.lo && side == Side::Right) ||
                                      (x == support_.hi && side == Side::Left);
        if (inside_from_side)
            throw Error(ErrorCode::AccumulationPoint, "breakpoints accumulate at " + x.str() + " from the " +
                                                          std::string(to_string(side)));
        if (!support_.contains_interior(x)) return Rat(1);
        const Rat s = support_.inverse(x);
        long i = chart::piece(s);
        if (side == Side::Left && s == chart::anchor(i)) --i;
        return chart::piece_slope(i, power_);
    }

    /// One-sided derivative, including the closed-form limits 2^power at the left end of the
    /// support (approached from the right) and 2^-power at the right end.
    Rat germ_slope(const Rat& x, Side side) const {
        if (power_ != 0 && x == support_.lo && side == Side::Right) return pow2(static_cast<long>(power_));
        if (power_ != 0 && x == support_.hi && side == Side::Left) return pow2(-static_cast<long>(power_));
        return slope(x, side);
    }

    ModelTranslation inverse() const { return {support_.lo, support_.hi, -power_}; }

    friend bool operator==(const ModelTranslation&, const ModelTranslation&) = default;

private:
    AffineChart support_;
    long long power_;
};

class IntervalMapExpr;

/// theta_J o inner o theta_J^{-1} on J, identity off J.
struct Conjugated {
    AffineChart chart;
    std::shared_ptr<const IntervalMapExpr> inner;
};

using MapFactor = std::variant<PLMap, ModelTranslation, Conjugated>;

struct ClosedInterval {
    Rat lo, hi;
    friend bool operator==(const ClosedInterval&, const ClosedInterval&) = default;
};
using FixedSet = std::vector<ClosedInterval>;

/// A lazy composition f_1 o f_2 o ... o f_n; the last factor acts first.
class IntervalMapExpr {
public:
    IntervalMapExpr() = default;
    IntervalMapExpr(MapFactor f) { factors_.push_back(std::move(f)); }  // NOLINT(google-explicit-constructor)
    IntervalMapExpr(PLMap f) : IntervalMapExpr(MapFactor(std::move(f))) {}  // NOLINT
    IntervalMapExpr(ModelTranslation f) : IntervalMapExpr(MapFactor(std::move(f))) {}  // NOLINT
    explicit IntervalMapExpr(std::vector<MapFactor> fs) : factors_(std::move(fs)) {}

    static IntervalMapExpr identity() { return {}; }

    const std::vector<MapFactor>& factors() const { return factors_; }
    bool is_identity_expr() const { return factors_.empty(); }

    Rat operator()(const Rat& x) const {
        check_domain(x);
        return apply(x);
    }

    IntervalMapExpr inverse() const;
    IntervalMapExpr pow(long long n) const;

    friend IntervalMapExpr operator*(const IntervalMapExpr& f, const IntervalMapExpr& g) {
        std::vector<MapFactor> fs = f.factors_;
        fs.insert(fs.end(), g.factors_.begin(), g.factors_.end());
        return IntervalMapExpr(std::move(fs));
    }

    static void check_domain(const Rat& x) {
        if (x < Rat(0) || x > Rat(1)) throw Error(ErrorCode::OutOfDomain, x.str() + " outside [0,1]");
    }

    Rat apply(const Rat& x) const;
    Rat slope_at(const Rat& x, Side side, bool germ) const;

private:
    std::vector<MapFactor> factors_;
};

namespace detail {

inline Rat factor_apply(const MapFactor& f, const Rat& x) {
    return std::visit(
        [&](const auto& m) -> Rat {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Conjugated>) {
                if (!m.chart.contains_interior(x)) return x;
                return m.chart(m.inner->apply(m.chart.inverse(x)));
            } else {
                return m(x);
            }
        },
        f);
}

inline Rat factor_slope(const MapFactor& f, const Rat& x, Side side, bool germ) {
    return std::visit(
        [&](const auto& m) -> Rat {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Conjugated>) {
                const bool inward = (x == m.chart.lo && side == Side::Right) || (x == m.chart.hi && side == Side::Left);
                if (!inward && !m.chart.contains_interior(x)) return Rat(1);
                return m.inner->slope_at(m.chart.inverse(x), side, germ);
            } else if constexpr (std::is_same_v<T, ModelTranslation>) {
                return germ ? m.germ_slope(x, side) : m.slope(x, side);
            } else {
                return m.slope(x, side);
            }
        },
        f);
}

inline MapFactor factor_inverse(const MapFactor& f) {
    return std::visit(
        [](const auto& m) -> MapFactor {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Conjugated>) {
                return Conjugated{m.chart, std::make_shared<const IntervalMapExpr>(m.inner->inverse())};
            } else {
                return m.inverse();
            }
        },
        f);
}

}  // namespace detail

inline Rat IntervalMapExpr::apply(const Rat& x) const {
    Rat y = x;
    for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) y = detail::factor_apply(*it, y);
    return y;
}

inline Rat IntervalMapExpr::slope_at(const Rat& x, Side side, bool germ) const {
    Rat y = x;
    Rat s(1);
    for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) {
        s *= detail::factor_slope(*it, y, side, germ);
        y = detail::factor_apply(*it, y);
    }
    return s;
}

inline IntervalMapExpr IntervalMapExpr::inverse() const {
    std::vector<MapFactor> fs;
    fs.reserve(factors_.size());
    for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) fs.push_back(detail::factor_inverse(*it));
    return IntervalMapExpr(std::move(fs));
}

inline IntervalMapExpr IntervalMapExpr::pow(long long n) const {
    const IntervalMapExpr base = n >= 0 ? *this : inverse();
    IntervalMapExpr out;
    for (long long i = 0; i < (n >= 0 ? n : -n); ++i) out = out * base;
    return out;
}

inline Rat eval(const IntervalMapExpr& m, const Rat& x) { return m(x); }

/// theta_J o m o theta_J^{-1} on J, extended by the identity.
inline IntervalMapExpr conjugate(const AffineChart& j, const IntervalMapExpr& m) {
    return IntervalMapExpr(MapFactor(Conjugated{j, std::make_shared<const IntervalMapExpr>(m)}));
}

/// Slope of the affine piece adjacent to x on the given side (chain rule through the factors).
/// Throws AccumulationPoint where breakpoints of some factor accumulate from that side.
inline Rat one_sided_slope(const IntervalMapExpr& m, const Rat& x, Side side) {
    IntervalMapExpr::check_domain(x);
    if ((x.is_zero() && side == Side::Left) || (x == Rat(1) && side == Side::Right))
        throw Error(ErrorCode::OutOfDomain, "no " + std::string(to_string(side)) + " side at " + x.str());
    return m.slope_at(x, side, false);
}

namespace detail {
inline bool is_model_only(const IntervalMapExpr& m) {
    for (const auto& f : m.factors()) {
        if (std::holds_alternative<PLMap>(f)) return false;
        if (const auto* c = std::get_if<Conjugated>(&f); c && !is_model_only(*c->inner)) return false;
    }
    return true;
}
}  // namespace detail

/// Limit of secant slopes at `p` from `side`, for products of model-translation powers (closed form
/// at accumulation endpoints, chain rule elsewhere).
inline Rat limit_slope(const IntervalMapExpr& m, const Rat& p, Side side) {
    if (!detail::is_model_only(m)) throw Error(ErrorCode::NotModelGerm, "expression contains a PL factor");
    IntervalMapExpr::check_domain(p);
    return m.slope_at(p, side, true);
}

/// One-sided derivative of any expression, accumulation endpoints included.
inline Rat germ_slope(const IntervalMapExpr& m, const Rat& p, Side side) {
    IntervalMapExpr::check_domain(p);
    return m.slope_at(p, side, true);
}

namespace detail {

inline FixedSet normalize_fixed_set(FixedSet in) {
    std::sort(in.begin(), in.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
    FixedSet out;
    for (auto& iv : in) {
        if (!out.empty() && iv.lo <= out.back().hi) {
            if (iv.hi > out.back().hi) out.back().hi = iv.hi;
        } else {
            out.push_back(iv);
        }
    }
    return out;
}

inline FixedSet pl_fixed_set(const PLMap& f) {
    FixedSet out;
    const auto& pts = f.breakpoints();
    for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
        const Rat d0 = pts[j].second - pts[j].first;
        const Rat d1 = pts[j + 1].second - pts[j + 1].first;
        if (d0.is_zero() && d1.is_zero()) {
            out.push_back({pts[j].first, pts[j + 1].first});
        } else if (d0.is_zero()) {
            out.push_back({pts[j].first, pts[j].first});
        } else if (d1.is_zero()) {
            out.push_back({pts[j + 1].first, pts[j + 1].first});
        } else if (d0.sign() != d1.sign()) {
            // displacement is affine on the segment
            const Rat x = pts[j].first + d0 / (d0 - d1) * (pts[j + 1].first - pts[j].first);
            out.push_back({x, x});
        }
    }
    return normalize_fixed_set(std::move(out));
}

}  // namespace detail

/// {x : m(x) = x} for a product of finite PL maps, or a product of model-translation powers whose
/// supports either coincide or have disjoint interiors.
inline FixedSet fixed_set(const IntervalMapExpr& m) {
    const auto& fs = m.factors();
    if (fs.empty()) return {{Rat(0), Rat(1)}};

    const bool all_pl = std::all_of(fs.begin(), fs.end(), [](const auto& f) { return std::holds_alternative<PLMap>(f); });
    if (all_pl) {
        PLMap acc;
        for (const auto& f : fs) acc = compose(acc, std::get<PLMap>(f));
        return detail::pl_fixed_set(acc);
    }

    const bool all_model =
        std::all_of(fs.begin(), fs.end(), [](const auto& f) { return std::holds_alternative<ModelTranslation>(f); });
    if (!all_model) throw Error(ErrorCode::Unsupported, "fixed set of a mixed expression");

    std::vector<std::pair<AffineChart, long long>> supports;
    for (const auto& f : fs) {
        const auto& mt = std::get<ModelTranslation>(f);
        bool merged = false;
        for (auto& [j, k] : supports) {
            if (j == mt.support()) {
                k += mt.power();
                merged = true;
            } else if (j.lo < mt.support().hi && mt.support().lo < j.hi) {
                throw Error(ErrorCode::Unsupported, "model translations with overlapping supports");
            }
        }
        if (!merged) supports.emplace_back(mt.support(), mt.power());
    }
    std::vector<AffineChart> moving;
    for (const auto& [j, k] : supports)
        if (k != 0) moving.push_back(j);
    std::sort(moving.begin(), moving.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });

    FixedSet out;
    Rat cursor(0);
    for (const auto& j : moving) {
        out.push_back({cursor, j.lo});
        cursor = j.hi;
    }
    out.push_back({cursor, Rat(1)});
    return detail::normalize_fixed_set(std::move(out));
}

inline bool fixed_set_contains(const FixedSet& s, const Rat& x) {
    return std::any_of(s.begin(), s.end(), [&](const auto& iv) { return iv.lo <= x && x <= iv.hi; });
}

}  // namespace nonsmooth
