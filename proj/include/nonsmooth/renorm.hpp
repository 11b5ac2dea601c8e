#pragma once

// Exact blow-up windows near a fixed point.
//
// For a base point p_i the hull U_i is the smallest closed interval containing p_i and every
// generator image g(p_i); V_i enlarges U_i about p_i. Rescaling by 1/length(U_i) and moving p_i to
// the origin gives partial maps g^(x) = (g(p_i + L_i x) - p_i) / L_i. For C^1 germs these approach
// translations as i grows; for the obstructed examples some generator keeps a fixed point inside
// every window while the commutator crosses it.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nonsmooth/obstruction.hpp"

namespace nonsmooth {

/// A named partial map on rationals.
struct ProbeMap {
    std::string name;
    std::function<Rat(const Rat&)> f;
};

/// Generators (which define the hull) plus optional extra maps that are rescaled and reported
/// but do not enter the hull, such as a commutator.
struct IntervalProbe {
    std::vector<ProbeMap> generators;
    std::vector<ProbeMap> extras;
};

inline IntervalProbe probe_from(const IntervalAction& act, const std::vector<Word>& extra_words = {}) {
    IntervalProbe p;
    for (std::size_t g = 0; g < act.rank(); ++g) {
        IntervalMapExpr m = act.generator(g);
        p.generators.push_back({act.names()[g], [m](const Rat& x) { return m(x); }});
    }
    for (const auto& w : extra_words) {
        IntervalMapExpr m = act.word_map(w);
        p.extras.push_back({w.str(), [m](const Rat& x) { return m(x); }});
    }
    return p;
}

/// A cover-line map seen through compactify, extended by the identity at 0 and 1.
inline std::function<Rat(const Rat&)> compactified(LiftedMap f) {
    return [f = std::move(f)](const Rat& x) -> Rat {
        if (x.sign() <= 0 || x >= Rat(1)) return x;
        return compactify(f(decompactify(x)));
    };
}

inline IntervalProbe probe_from(const TorusAction& t) {
    IntervalProbe p;
    for (std::size_t g = 0; g < t.action.rank(); ++g)
        p.generators.push_back({t.action.names()[g], compactified(t.action.generator(g))});
    p.extras.push_back({"[a,b]", compactified(t.action.word_map(t.commutator_word))});
    return p;
}

/// x -> x / (1 + x), the parabolic Moebius germ [[1,0],[1,1]] at 0.
inline IntervalProbe parabolic_germ_probe() {
    const MoebiusMap m = MoebiusMap::integral(1, 0, 1, 1);
    return {{{"g", [m](const Rat& x) { return apply_moebius(m, ProjPoint(x)).affine(); }}}, {}};
}

struct Window {
    long index = 0;
    Rat point;       // p_i
    Rat lo, hi;      // U_i
    Rat vlo, vhi;    // V_i, clipped to [0, 1]
    Rat length;      // L_i = hi - lo
};

/// Hulls over the generators; V_i = p + enlargement * (U_i - p), clipped to [0, 1].
inline std::vector<Window> build_windows(const IntervalProbe& probe, const std::vector<std::pair<long, Rat>>& points,
                                         const Rat& enlargement = Rat(3)) {
    if (enlargement < Rat(1)) throw Error(ErrorCode::InvalidArgument, "enlargement must be >= 1");
    std::vector<Window> out;
    out.reserve(points.size());
    for (const auto& [index, p] : points) {
        Window w{index, p, p, p, p, p, Rat(0)};
        for (const auto& g : probe.generators) {
            const Rat y = g.f(p);
            if (y < w.lo) w.lo = y;
            if (y > w.hi) w.hi = y;
        }
        w.length = w.hi - w.lo;
        if (w.length.is_zero())
            throw Error(ErrorCode::EmptyDisplacement, "every generator fixes p_" + std::to_string(index) + " = " + p.str());
        w.vlo = std::max(Rat(0), p - enlargement * (p - w.lo));
        w.vhi = std::min(Rat(1), p + enlargement * (w.hi - p));
        out.push_back(std::move(w));
    }
    return out;
}

struct RescaledMap {
    std::string name;
    bool generator = true;
    std::function<Rat(const Rat&)> f;  // g^
};

struct RescaledSystem {
    Window window;
    Rat domain_lo, domain_hi;  // rescaled V_i
    std::vector<RescaledMap> maps;

    Rat to_original(const Rat& x) const { return window.point + window.length * x; }
    Rat to_rescaled(const Rat& y) const { return (y - window.point) / window.length; }
};

inline RescaledSystem rescale(const Window& w, const IntervalProbe& probe) {
    RescaledSystem rs;
    rs.window = w;
    rs.domain_lo = (w.vlo - w.point) / w.length;
    rs.domain_hi = (w.vhi - w.point) / w.length;
    auto wrap = [&](const ProbeMap& g, bool gen) {
        const Rat p = w.point;
        const Rat len = w.length;
        rs.maps.push_back({g.name, gen, [f = g.f, p, len](const Rat& x) { return (f(p + len * x) - p) / len; }});
    };
    for (const auto& g : probe.generators) wrap(g, true);
    for (const auto& g : probe.extras) wrap(g, false);
    return rs;
}

struct GridDomain {
    Rat lo, hi;
    std::size_t grid;
    Rat at(std::size_t k) const { return lo + (hi - lo) * Rat(static_cast<long long>(k)) / Rat(static_cast<long long>(grid)); }
};

inline GridDomain grid_domain(const RescaledSystem& rs, const Rat& radius, std::size_t grid) {
    if (grid < 2) throw Error(ErrorCode::InvalidArgument, "grid must be >= 2");
    const Rat lo = std::max(-radius, rs.domain_lo);
    const Rat hi = std::min(radius, rs.domain_hi);
    if (!(lo < hi)) throw Error(ErrorCode::EmptyGridDomain, "window too small for radius " + radius.str());
    return {lo, hi, grid};
}

/// max over the map's grid points x in [-radius, radius] ∩ domain of |g^(x) - x - g^(0)|.
inline Rat translation_deviation(const RescaledMap& m, const GridDomain& d) {
    const Rat at0 = m.f(Rat(0));
    Rat worst(0);
    for (std::size_t k = 0; k <= d.grid; ++k) {
        const Rat x = d.at(k);
        const Rat dev = (m.f(x) - x - at0).abs();
        if (dev > worst) worst = dev;
    }
    return worst;
}

/// Grid deviation, maximized over the generators.
inline Rat translation_deviation(const RescaledSystem& rs, const Rat& radius, std::size_t grid) {
    const GridDomain d = grid_domain(rs, radius, grid);
    Rat worst(0);
    for (const auto& m : rs.maps)
        if (m.generator) worst = std::max(worst, translation_deviation(m, d));
    return worst;
}

struct WindowBracket {
    Rat lo, hi;  // rescaled coordinates
    bool exact = false;
};

/// A bracket in the open rescaled window where g^(x) - x changes sign exactly, located on a grid
/// and refined by `refine` bisection steps.
inline std::optional<WindowBracket> fixed_point_in_window(const RescaledMap& m, const RescaledSystem& rs,
                                                          std::size_t grid = 64, int refine = 8) {
    const GridDomain d{rs.domain_lo, rs.domain_hi, grid};
    auto disp = [&](const Rat& x) { return (m.f(x) - x).sign(); };
    std::vector<int> signs;
    signs.reserve(grid + 1);
    for (std::size_t k = 0; k <= grid; ++k) signs.push_back(disp(d.at(k)));
    if (std::all_of(signs.begin(), signs.end(), [](int s) { return s == 0; }))
        throw Error(ErrorCode::Degenerate, m.name + " is the identity on the window");
    for (std::size_t k = 0; k < grid; ++k) {
        if (k > 0 && signs[k] == 0) return WindowBracket{d.at(k), d.at(k), true};
        if (signs[k] * signs[k + 1] < 0) {
            Rat lo = d.at(k), hi = d.at(k + 1);
            const int slo = signs[k];
            for (int r = 0; r < refine; ++r) {
                const Rat mid = midpoint(lo, hi);
                const int s = disp(mid);
                if (s == 0) return WindowBracket{mid, mid, true};
                (s == slo ? lo : hi) = mid;
            }
            return WindowBracket{lo, hi, false};
        }
    }
    return std::nullopt;
}

/// One row per rescaled map: the CSV record of a window.
struct WindowStats {
    long window_index = 0;
    std::string map;
    Rat displacement_at_0;
    Rat grid_deviation;
    std::optional<WindowBracket> bracket;
};

inline std::vector<WindowStats> window_statistics(const RescaledSystem& rs, const Rat& radius, std::size_t grid) {
    const GridDomain d = grid_domain(rs, radius, grid);
    std::vector<WindowStats> out;
    for (const auto& m : rs.maps) {
        WindowStats s{rs.window.index, m.name, m.f(Rat(0)), translation_deviation(m, d), std::nullopt};
        s.bracket = fixed_point_in_window(m, rs, grid);
        out.push_back(std::move(s));
    }
    return out;
}

// Base point sequences.
namespace sequences {

/// p_i = 1/i for i = first, first+1, ...
inline std::vector<std::pair<long, Rat>> reciprocal(long first, std::size_t count) {
    std::vector<std::pair<long, Rat>> out;
    for (std::size_t k = 0; k < count; ++k) {
        const long i = first + static_cast<long>(k);
        out.emplace_back(i, Rat(BigInt(1), BigInt(i)));
    }
    return out;
}

/// p_i = 2^-i for i = first, first+1, ...
inline std::vector<std::pair<long, Rat>> dyadic(long first, std::size_t count) {
    std::vector<std::pair<long, Rat>> out;
    for (std::size_t k = 0; k < count; ++k) {
        const long i = first + static_cast<long>(k);
        out.emplace_back(i, pow2(-i));
    }
    return out;
}

/// p_n = compactify(p̃ + n), n = first, first+1, ...
inline std::vector<std::pair<long, Rat>> deck(long first, std::size_t count) {
    std::vector<std::pair<long, Rat>> out;
    for (std::size_t k = 0; k < count; ++k) {
        const long n = first + static_cast<long>(k);
        out.emplace_back(n, compactify(cover_basepoint(BigInt(n))));
    }
    return out;
}

/// theta_J(c_{-i}): anchors of a model translation approaching the left end of its support.
inline std::vector<std::pair<long, Rat>> anchors_left(const AffineChart& j, long first, std::size_t count) {
    std::vector<std::pair<long, Rat>> out;
    for (std::size_t k = 0; k < count; ++k) {
        const long i = first + static_cast<long>(k);
        out.emplace_back(i, j(chart::anchor(-i)));
    }
    return out;
}

/// Midpoints p_i of I_i.
inline std::vector<std::pair<long, Rat>> midpoints(long first, std::size_t count) {
    std::vector<std::pair<long, Rat>> out;
    for (std::size_t k = 0; k < count; ++k) {
        const long i = first + static_cast<long>(k);
        out.emplace_back(i, zz::midpoint(i));
    }
    return out;
}

}  // namespace sequences

}  // namespace nonsmooth
