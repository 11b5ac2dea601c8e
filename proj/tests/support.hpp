#pragma once

// Seeded generators shared by the property tests.

#include <random>

#include "nonsmooth/obstruction.hpp"

namespace testing_support {

using namespace nonsmooth;

inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(0x5eed1e55u);
    return gen;
}

inline long long uniform(long long lo, long long hi) { return std::uniform_int_distribution<long long>(lo, hi)(rng()); }

/// n/d with |n| <= span * d.
inline Rat random_rat(long long span = 10, long long max_den = 50) {
    const long long d = uniform(1, max_den);
    return Rat(BigInt(uniform(-span * d, span * d)), BigInt(d));
}

/// A rational strictly inside (0, 1).
inline Rat random_unit(long long max_den = 1000) {
    const long long d = uniform(2, max_den);
    return Rat(BigInt(uniform(1, d - 1)), BigInt(d));
}

inline ProjPoint random_proj() {
    if (uniform(0, 30) == 0) return ProjPoint::infinity();
    return ProjPoint(random_rat());
}

inline CoverPoint random_cover(long long sheets = 5) { return {random_proj(), BigInt(uniform(-sheets, sheets))}; }

/// Random integral matrix with determinant 1.
inline MoebiusMap random_sl2(int steps = 6) {
    long long a = 1, b = 0, c = 0, d = 1;
    for (int s = 0; s < steps; ++s) {
        const long long k = uniform(-3, 3);
        if (uniform(0, 1)) {
            b += k * a;  // right-multiply by [[1,k],[0,1]]
            d += k * c;
        } else {
            a += k * b;  // right-multiply by [[1,0],[k,1]]
            c += k * d;
        }
    }
    return MoebiusMap::integral(a, b, c, d);
}

inline LiftedMap random_lift() {
    const MoebiusMap m = random_sl2();
    return LiftedMap::standard(m).deck_shifted(BigInt(uniform(-3, 3)));
}

inline Word random_word(int rank = 2, int max_len = 8) {
    std::vector<Letter> ls;
    const int len = static_cast<int>(uniform(0, max_len));
    for (int k = 0; k < len; ++k) ls.push_back({static_cast<int>(uniform(0, rank - 1)), uniform(0, 1) ? 1 : -1});
    return Word(std::move(ls));
}

/// Strictly increasing PL homeomorphism with up to `k` interior breakpoints.
inline PLMap random_pl(int k = 4) {
    std::vector<Rat> xs{Rat(0), Rat(1)}, ys{Rat(0), Rat(1)};
    const int n = static_cast<int>(uniform(0, k));
    for (int j = 0; j < n; ++j) {
        xs.push_back(random_unit(64));
        ys.push_back(random_unit(64));
    }
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    const std::size_t m = std::min(xs.size(), ys.size());
    std::vector<PLMap::Point> pts;
    for (std::size_t j = 0; j + 1 < m; ++j) pts.emplace_back(xs[j], ys[j]);
    pts.emplace_back(Rat(1), Rat(1));
    return PLMap(std::move(pts));
}

inline ModelTranslation random_model_translation() {
    Rat l = random_unit(32), r = random_unit(32);
    while (l == r) r = random_unit(32);
    if (r < l) std::swap(l, r);
    if (uniform(0, 3) == 0) l = Rat(0);
    if (uniform(0, 3) == 0) r = Rat(1);
    return {l, r, uniform(-3, 3)};
}

/// A product of one to three random factors.
inline IntervalMapExpr random_expr() {
    std::vector<MapFactor> fs;
    const int n = static_cast<int>(uniform(1, 3));
    for (int j = 0; j < n; ++j) {
        if (uniform(0, 1)) fs.emplace_back(random_pl());
        else fs.emplace_back(random_model_translation());
    }
    return IntervalMapExpr(std::move(fs));
}

inline std::map<long, long long> random_support(long radius = 6) {
    std::map<long, long long> s;
    const int n = static_cast<int>(uniform(0, 5));
    for (int j = 0; j < n; ++j) s[uniform(-radius, radius)] = uniform(-4, 4);
    return s;
}

}  // namespace testing_support
