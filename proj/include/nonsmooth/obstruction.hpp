#pragma once

// Order-structure obstructions to C^1 conjugacy.
//
// A point p orders group elements by a <_p b iff a(p) < b(p). If an action were C^1, then along
// any sequence p_m approaching the frontier of fix(H) some generator h_k^{+-1} would eventually
// exceed each fixed h in [H,H] at p_m. A DominationCertificate records the opposite: h beats every
// generator and inverse at every checked p_m. For the lifted punctured-torus action the finite
// table is extended to all m by deck periodicity and the fixed-point interleaving certificate.

#include <cmath>
#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nonsmooth/groupact.hpp"

namespace nonsmooth {

enum class Ordering { Less, Equal, Greater };

inline std::string_view to_string(Ordering o) {
    switch (o) {
        case Ordering::Less: return "Less";
        case Ordering::Equal: return "Equal";
        case Ordering::Greater: return "Greater";
    }
    return "?";
}

inline Ordering to_ordering(std::strong_ordering c) {
    if (c < 0) return Ordering::Less;
    if (c > 0) return Ordering::Greater;
    return Ordering::Equal;
}

template <class Point>
struct OrderResult {
    Ordering ordering;
    Point lhs;  // w1(p)
    Point rhs;  // w2(p)
};

/// Compares w1 and w2 in the order <_p. Equal means w1^-1 w2 lies in the stabilizer of p.
template <ActionMap Map>
OrderResult<typename MarkedAction<Map>::Point> order_cmp(const MarkedAction<Map>& act, const Word& w1, const Word& w2,
                                                         const typename MarkedAction<Map>::Point& p) {
    auto a = act.eval(w1, p);
    auto b = act.eval(w2, p);
    const Ordering o = to_ordering(a <=> b);
    return {o, std::move(a), std::move(b)};
}

template <class Point>
struct DominationEntry {
    std::size_t m = 0;
    int generator = 0;
    int sign = 1;
    Point point;      // p_m
    Point challenger; // g^sign(p_m)
    Point dominator;  // h(p_m)
    Ordering ordering = Ordering::Equal;  // challenger vs dominator
};

template <class Point>
struct DominationCertificate {
    Word dominating;
    Word advancing;
    Point base;
    std::size_t depth = 0;
    std::vector<DominationEntry<Point>> table;  // ordered by (m, generator, sign)
    bool valid = false;
    bool shallow = false;     // depth 0: one row only
    bool structural = false;  // validity extends to every m
    std::vector<std::string> notes;

    /// Validity of the first `d` + 1 rows.
    bool valid_through(std::size_t d) const {
        for (const auto& e : table)
            if (e.m <= d && e.ordering != Ordering::Less) return false;
        return !table.empty();
    }
};

/// Compares h(p_m) against g^{+-1}(p_m) for every generator g and m in [0, depth], where
/// p_m = advancing^m(base). Strict inequalities only.
template <ActionMap Map>
DominationCertificate<typename MarkedAction<Map>::Point> certify_domination(
    const MarkedAction<Map>& act, const Word& h, const typename MarkedAction<Map>::Point& base, const Word& advancing,
    std::size_t depth) {
    using Point = typename MarkedAction<Map>::Point;
    if (!is_commutator_class_trivial(h))
        throw Error(ErrorCode::NotCommutatorClass, "'" + h.str() + "' is not in the commutator subgroup");
    if (act.eval(advancing, base) == base)
        throw Error(ErrorCode::DegenerateSequence, "advancing word '" + advancing.str() + "' fixes the base point");

    DominationCertificate<Point> cert;
    cert.dominating = h;
    cert.advancing = advancing;
    cert.base = base;
    cert.depth = depth;
    cert.shallow = depth == 0;
    const Map hmap = act.word_map(h);

    Point p = base;
    for (std::size_t m = 0; m <= depth; ++m) {
        const Point hp = MapTraits<Map>::apply(hmap, p);
        for (std::size_t g = 0; g < act.rank(); ++g) {
            for (int sign : {1, -1}) {
                const Map& gm = sign > 0 ? act.generator(g) : act.generator_inverse(g);
                Point gp = MapTraits<Map>::apply(gm, p);
                const Ordering o = to_ordering(gp <=> hp);
                cert.table.push_back({m, static_cast<int>(g), sign, p, std::move(gp), hp, o});
            }
        }
        if (m < depth) p = act.eval(advancing, p);
    }
    cert.valid = cert.valid_through(depth);
    if (cert.shallow) cert.notes.emplace_back("ShallowDepth: only the base point was checked");
    return cert;
}

// ---------------------------------------------------------------------------------------------
// The lifted punctured-torus action.

/// ã, b̃: the fixed-point lifts of A = [[1,1],[1,2]] and B = [[1,-1],[-1,2]] acting on the cover line.
struct TorusAction {
    CoverAction action;
    std::vector<FixedPointLift> lifts;  // per generator, in action order
    std::vector<MoebiusMap> matrices;   // per generator
    std::string normalization;          // "none" or the applied orientation fix
    Word commutator_word = Word::parse("[a,b]");
};

inline MoebiusMap torus_matrix_a() { return MoebiusMap::integral(1, 1, 1, 2); }
inline MoebiusMap torus_matrix_b() { return MoebiusMap::integral(1, -1, -1, 2); }

/// Builds the action, normalizing orientation so that [a,b] moves the basepoint by +1.
inline TorusAction make_punctured_torus() {
    std::vector<MoebiusMap> ms{torus_matrix_a(), torus_matrix_b()};
    auto build = [](const std::vector<MoebiusMap>& mats) {
        TorusAction t;
        t.matrices = mats;
        std::vector<LiftedMap> maps;
        for (const auto& m : mats) {
            t.lifts.push_back(fixed_point_lift(m));
            maps.push_back(t.lifts.back().lift);
        }
        t.action = CoverAction({"a", "b"}, std::move(maps));
        return t;
    };
    TorusAction t = build(ms);
    const CoverPoint pt = cover_basepoint();
    const CoverPoint img = t.action.eval(t.commutator_word, pt);
    if (img == pt + 1) {
        t.normalization = "none";
    } else if (img == pt - 1) {
        // [b,a] = [a,b]^-1, so exchanging the generators flips the displacement.
        t = build({ms[1], ms[0]});
        t.normalization = "swapped generators a <-> b";
        if (t.action.eval(t.commutator_word, pt) != pt + 1)
            throw Error(ErrorCode::Degenerate, "commutator displacement not +-1 after normalization");
    } else {
        throw Error(ErrorCode::Degenerate, "commutator displaces the basepoint to " + img.str());
    }
    return t;
}

struct InterleavingEntry {
    std::string generator;
    CoverPoint lo, hi;
    int sign_lo = 0, sign_hi = 0;
    bool exact = false;
};

struct InterleavingCertificate {
    CoverPoint window_start;  // p̃
    std::vector<InterleavingEntry> entries;
    std::string periodicity_note;
};

/// Places each generator's fixed-point bracket strictly inside (p̃, p̃ + 1).
inline InterleavingCertificate certify_interleaving(const TorusAction& t) {
    InterleavingCertificate cert;
    cert.window_start = cover_basepoint();
    const CoverPoint end = cert.window_start + 1;
    for (std::size_t g = 0; g < t.lifts.size(); ++g) {
        const FixedPointLift& f = t.lifts[g];
        if (!(cert.window_start < f.lo && f.hi < end))
            throw Error(ErrorCode::BracketOutsideWindow, "bracket [" + f.lo.str() + ", " + f.hi.str() + "] for " +
                                                             t.action.names()[g] + " not inside (p, p+1)");
        // Re-verify the displacement signs against the bound map.
        const LiftedMap& m = t.action.generator(g);
        const int slo = displacement_sign(m, f.lo);
        const int shi = displacement_sign(m, f.hi);
        if (f.exact ? (slo != 0) : (slo * shi >= 0))
            throw Error(ErrorCode::BracketOutsideWindow, "displacement signs do not certify a fixed point");
        cert.entries.push_back({t.action.names()[g], f.lo, f.hi, slo, shi, f.exact});
    }
    cert.periodicity_note =
        "each lift commutes with the deck translation x -> x+1, so a fixed point q in (p, p+1) gives fixed points "
        "q+n in (p+n, p+n+1) for every integer n";
    return cert;
}

struct TorusCertificate {
    DominationCertificate<CoverPoint> domination;
    InterleavingCertificate interleaving;
    std::vector<bool> routes_agree;  // per m: interleaving route matches the direct table
    std::string normalization;
};

/// Interleaving route at index m: p_m < lo_g + m and hi_g + m <= h(p_m) for every generator g,
/// which forces g^{+-1}(p_m) < q_g + m < h(p_m).
inline bool domination_via_interleaving(const InterleavingCertificate& il, const CoverPoint& pm,
                                        const CoverPoint& hpm, long long m) {
    for (const auto& e : il.entries) {
        if (!(pm < e.lo + m)) return false;
        if (!(e.hi + m <= hpm)) return false;
    }
    return true;
}

/// Domination of h = [a,b]^2 along p_m = [a,b]^m(p̃), extended structurally to every m.
inline TorusCertificate certify_torus(const TorusAction& t, std::size_t depth, const Word& h = Word::parse("[a,b]^2")) {
    TorusCertificate out;
    out.normalization = t.normalization;
    const CoverPoint pt = cover_basepoint();
    out.domination = certify_domination(t.action, h, pt, t.commutator_word, depth);
    out.interleaving = certify_interleaving(t);

    const LiftedMap hmap = t.action.word_map(h);
    for (std::size_t m = 0; m <= depth; ++m) {
        const CoverPoint& pm = out.domination.table.at(m * 2 * t.action.rank()).point;
        const bool route2 = domination_via_interleaving(out.interleaving, pm, hmap(pm), static_cast<long long>(m));
        bool direct = true;
        for (const auto& e : out.domination.table)
            if (e.m == m && e.ordering != Ordering::Less) direct = false;
        out.routes_agree.push_back(route2 == direct);
    }

    // Structural extension: the advancing word moves p̃ by exactly one deck unit, every map commutes
    // with the deck, and the interleaving bound holds at m = 0.
    const bool unit_step = t.action.eval(t.commutator_word, pt) == pt + 1;
    const bool base_case = domination_via_interleaving(out.interleaving, pt, hmap(pt), 0);
    out.domination.structural = out.domination.valid && unit_step && base_case;
    if (out.domination.structural) {
        out.domination.notes.emplace_back(
            "p_m = p + m for every m since [a,b](p) = p + 1 and lifts commute with the deck translation");
        out.domination.notes.emplace_back(
            "for every m: g^{+-1}(p_m) < q_g + m < p_m + 1 <= h(p_m), by order preservation and the interleaving "
            "brackets translated by the deck");
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// Slope character sigma(h) = h'(p), stored multiplicatively.

struct SlopeCharacter {
    Rat point;
    Side side = Side::Right;
    std::vector<std::pair<std::string, Rat>> table;  // generator -> sigma

    /// log sigma, for display only.
    static double log_value(const Rat& sigma) { return std::log(sigma.to_double()); }
};

/// sigma(w) for any word, by the chain rule on the composed germ.
inline Rat slope_of_word(const IntervalAction& act, const Word& w, const Rat& p, Side side) {
    return germ_slope(act.word_map(w), p, side);
}

/// Requires every generator to fix p.
inline SlopeCharacter slope_character(const IntervalAction& act, const Rat& p, Side side) {
    SlopeCharacter sc;
    sc.point = p;
    sc.side = side;
    for (std::size_t g = 0; g < act.rank(); ++g) {
        if (act.generator(g)(p) != p)
            throw Error(ErrorCode::NotFixed, "generator " + act.names()[g] + " moves " + p.str());
        sc.table.emplace_back(act.names()[g], germ_slope(act.generator(g), p, side));
    }
    return sc;
}

// ---------------------------------------------------------------------------------------------
// The Z^Z derivative witness.

struct ZZWitnessEntry {
    long index = 0;
    long long n = 0;
    Rat midpoint;
    OneSidedPair slope;
};

struct ZZWitness {
    long radius = 0;
    long long cap = 0;
    std::vector<ZZWitnessEntry> entries;
    ZZAction f_action;                              // Z_F for the truncated F
    std::vector<std::pair<long, Rat>> anchors;      // (j, c_j), each verified fixed by Z_F
    bool anchors_fixed = false;
    bool uniform = false;  // every n_i and slope pair agree (T^i is affine on I_0)
    std::vector<std::string> narrative;
};

/// For each |i| <= radius, the least n <= cap with both one-sided slopes of S_i^n at p_i below 1/2.
inline ZZWitness zz_witness(long radius, long long cap) {
    if (radius < 0) throw Error(ErrorCode::InvalidArgument, "truncation radius must be >= 0");
    if (cap < 1) throw Error(ErrorCode::InvalidArgument, "search cap must be >= 1");
    ZZWitness w;
    w.radius = radius;
    w.cap = cap;
    const Rat half(1, 2);
    std::map<long, long long> f;
    for (long i = -radius; i <= radius; ++i) {
        std::optional<ZZWitnessEntry> hit;
        for (long long n = 1; n <= cap && !hit; ++n) {
            const OneSidedPair s = ZZAction({{i, n}}).slope_mid(i);
            if (s.upper() < half) hit = ZZWitnessEntry{i, n, zz::midpoint(i), s};
        }
        if (!hit)
            throw Error(ErrorCode::SearchExhausted,
                        "no n <= " + std::to_string(cap) + " gives slope < 1/2 at p_" + std::to_string(i));
        f[i] = hit->n;
        w.entries.push_back(*hit);
    }
    w.f_action = ZZAction(f);
    w.anchors_fixed = true;
    for (long j = -radius - 2; j <= radius + 2; ++j) {
        const Rat c = chart::anchor(j);
        w.anchors.emplace_back(j, c);
        if (w.f_action(c) != c) w.anchors_fixed = false;
    }
    w.uniform = std::all_of(w.entries.begin(), w.entries.end(), [&](const ZZWitnessEntry& e) {
        return e.n == w.entries.front().n && e.slope.left == w.entries.front().slope.left &&
               e.slope.right == w.entries.front().slope.right;
    });
    w.narrative = {
        "F(i) = n_i makes the slope of Z_F at each midpoint p_i at most 1/2 from both sides",
        "Z_F fixes every anchor c_j, and c_j -> 1 as j -> infinity",
        "the midpoints p_i also tend to 1, so a C^1 conjugate of Z_F would need derivative <= 1/2 at 1",
        "fixed points accumulating at 1 force derivative exactly 1 there, a contradiction",
        "only the finite truncation |i| <= radius is represented; the full group is Z^Z",
    };
    return w;
}

}  // namespace nonsmooth
