#include <gtest/gtest.h>

#include "support.hpp"

using namespace nonsmooth;
using namespace testing_support;

namespace {

Rat r(long long n, long long d = 1) { return Rat(BigInt(n), BigInt(d)); }

// The dyadic chart by linear search over integer pieces.
Rat oracle_anchor(long i) {
    Rat p(1);
    for (long k = 0; k < std::labs(i); ++k) p = i > 0 ? p * Rat(2) : p / Rat(2);
    return p / (p + Rat(1));
}

Rat oracle_psi_inverse(const Rat& s) {
    long i = 0;
    while (s < oracle_anchor(i)) --i;
    while (!(s < oracle_anchor(i + 1))) ++i;
    return Rat(i) + (s - oracle_anchor(i)) / (oracle_anchor(i + 1) - oracle_anchor(i));
}

Rat oracle_psi(const Rat& t) {
    const long i = t.floor().convert_to<long>();
    const Rat f = t - Rat(i);
    return oracle_anchor(i) + f * (oracle_anchor(i + 1) - oracle_anchor(i));
}

Rat oracle_model(Rat l, Rat rr, long long k, const Rat& x) {
    if (!(l < x && x < rr)) return x;
    const Rat s = (x - l) / (rr - l);
    return l + oracle_psi(oracle_psi_inverse(s) + Rat(k)) * (rr - l);
}

const ModelTranslation kT(Rat(0), Rat(1), 1);
const ModelTranslation kS(r(1, 2), r(2, 3), 1);

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Degenerate;  // sentinel: nothing thrown
}

}  // namespace

TEST(Chart, AnchorsAndPieces) {
    EXPECT_EQ(chart::anchor(0), r(1, 2));
    EXPECT_EQ(chart::anchor(1), r(2, 3));
    EXPECT_EQ(chart::anchor(2), r(4, 5));
    EXPECT_EQ(chart::anchor(-1), r(1, 3));
    for (long i = -30; i <= 30; ++i) {
        EXPECT_EQ(chart::anchor(i), oracle_anchor(i));
        EXPECT_EQ(chart::piece(chart::anchor(i)), i);
        EXPECT_EQ(chart::piece(midpoint(chart::anchor(i), chart::anchor(i + 1))), i);
    }
}

TEST(Chart, PsiMatchesOracle) {
    for (int k = 0; k < 1000; ++k) {
        const Rat t = random_rat(12, 40);
        EXPECT_EQ(chart::psi(t), oracle_psi(t));
        EXPECT_EQ(chart::psi_inverse(chart::psi(t)), t);
    }
}

TEST(PLMap, Validation) {
    EXPECT_THROW(PLMap({{r(0), r(0)}, {r(1, 2), r(1, 2)}}), Error);
    EXPECT_THROW(PLMap({{r(0), r(0)}, {r(1, 2), r(0)}, {r(1), r(1)}}), Error);
    const PLMap f({{r(0), r(0)}, {r(1, 2), r(1, 4)}, {r(1), r(1)}});
    EXPECT_EQ(f(r(1, 4)), r(1, 8));
    EXPECT_EQ(f.slope(r(1, 2), Side::Left), r(1, 2));
    EXPECT_EQ(f.slope(r(1, 2), Side::Right), r(3, 2));
    EXPECT_EQ(f.inverse()(r(1, 8)), r(1, 4));
}

TEST(PLMapProperty, CompositionAndInversionExact) {
    for (int k = 0; k < 1000; ++k) {
        const PLMap f = random_pl(), g = random_pl();
        const Rat x = random_unit();
        EXPECT_EQ(compose(f, g)(x), f(g(x)));
        EXPECT_EQ(f.inverse()(f(x)), x);
        EXPECT_EQ(f(f.inverse()(x)), x);
        const PLMap fg = compose(f, g);
        for (const auto& [bx, by] : fg.breakpoints()) EXPECT_EQ(f(g(bx)), by);
    }
}

TEST(ModelTranslation, Evaluation) {
    EXPECT_EQ(IntervalMapExpr(kT)(r(1, 2)), r(2, 3));
    EXPECT_EQ(IntervalMapExpr(kS)(r(7, 12)), r(11, 18));
    EXPECT_EQ(IntervalMapExpr(kS)(r(1, 3)), r(1, 3));
    EXPECT_EQ(IntervalMapExpr::identity()(r(3, 7)), r(3, 7));
    EXPECT_EQ(code_of([] { (void)IntervalMapExpr(kT)(r(3, 2)); }), ErrorCode::OutOfDomain);
    EXPECT_EQ(code_of([] { (void)ModelTranslation(r(1, 2), r(1, 3), 1); }), ErrorCode::BadInterval);
}

TEST(ModelTranslation, AnchorIdentity) {
    const IntervalMapExpr t(kT);
    for (long i = -20; i <= 20; ++i) EXPECT_EQ(t(chart::anchor(i)), chart::anchor(i + 1));
}

TEST(ModelTranslation, ChartIdentity) {
    const IntervalMapExpr t(kT);
    for (int k = 0; k < 100; ++k) {
        const Rat s = random_rat(10, 60);
        EXPECT_EQ(chart::psi(s + Rat(1)), t(chart::psi(s)));
    }
}

TEST(ModelTranslationProperty, MatchesOracle) {
    for (int k = 0; k < 1000; ++k) {
        const ModelTranslation m = random_model_translation();
        const Rat x = random_unit();
        EXPECT_EQ(IntervalMapExpr(m)(x), oracle_model(m.support().lo, m.support().hi, m.power(), x));
    }
}

TEST(Slopes, OneSided) {
    const IntervalMapExpr t(kT);
    EXPECT_EQ(one_sided_slope(t, r(7, 12), Side::Left), r(4, 5));
    EXPECT_EQ(one_sided_slope(t, r(7, 12), Side::Right), r(4, 5));
    EXPECT_EQ(one_sided_slope(IntervalMapExpr(), r(1, 3), Side::Right), Rat(1));
    const IntervalMapExpr s(kS);
    EXPECT_EQ(one_sided_slope(s, r(1, 2), Side::Left), Rat(1));
    EXPECT_EQ(code_of([&] { one_sided_slope(s, r(1, 2), Side::Right); }), ErrorCode::AccumulationPoint);
    EXPECT_EQ(code_of([&] { one_sided_slope(s, r(2, 3), Side::Left); }), ErrorCode::AccumulationPoint);
    EXPECT_EQ(code_of([&] { one_sided_slope(t, Rat(0), Side::Left); }), ErrorCode::OutOfDomain);
}

TEST(SlopesProperty, ChainRule) {
    const IntervalMapExpr t(kT);
    const IntervalMapExpr tt = t * t;
    for (int k = 0; k < 500; ++k) {
        const Rat x = random_unit();
        for (Side side : {Side::Left, Side::Right})
            EXPECT_EQ(one_sided_slope(tt, x, side), one_sided_slope(t, t(x), side) * one_sided_slope(t, x, side));
    }
}

TEST(SlopesProperty, PieceSlopesMatchSecants) {
    for (int k = 0; k < 500; ++k) {
        const IntervalMapExpr m = random_expr();
        const Rat x = random_unit(400);
        const Rat h = r(1, 1000000);
        if (!(x + h < Rat(1))) continue;
        // Far from breakpoints the right slope is the secant over a tiny step; compare loosely.
        Rat right;
        try {
            right = one_sided_slope(m, x, Side::Right);
        } catch (const Error&) {
            continue;
        }
        const double secant = ((m(x + h) - m(x)) / h).to_double();
        if (std::fabs(secant - right.to_double()) > 1e-3 * std::max(1.0, right.to_double())) {
            // A breakpoint inside (x, x+h) is the only admissible explanation.
            const Rat h2 = h / Rat(1000);
            EXPECT_NEAR(((m(x + h2) - m(x)) / h2).to_double(), right.to_double(), 1e-3 * std::max(1.0, right.to_double()));
        }
    }
}

TEST(LimitSlope, Endpoints) {
    EXPECT_EQ(limit_slope(IntervalMapExpr(kS), r(1, 2), Side::Right), Rat(2));
    EXPECT_EQ(limit_slope(IntervalMapExpr(kS), r(2, 3), Side::Left), r(1, 2));
    EXPECT_EQ(limit_slope(IntervalMapExpr(kS.inverse()), r(1, 2), Side::Right), r(1, 2));
    EXPECT_EQ(limit_slope(IntervalMapExpr(ModelTranslation(r(1, 2), r(2, 3), 0)), r(1, 2), Side::Right), Rat(1));
    EXPECT_EQ(limit_slope(IntervalMapExpr(ModelTranslation(r(1, 2), r(2, 3), 3)), r(1, 2), Side::Right), Rat(8));
    EXPECT_EQ(code_of([] { limit_slope(IntervalMapExpr(PLMap()), r(1, 2), Side::Right); }), ErrorCode::NotModelGerm);
}

TEST(LimitSlope, SecantsConverge) {
    // Secants of S at 1/2 through the anchors theta(c_{-i}) approach the closed form.
    const IntervalMapExpr s(kS);
    const AffineChart j{r(1, 2), r(2, 3)};
    double prev_gap = 1e9;
    for (long i = 2; i <= 40; i += 2) {
        const Rat y = j(chart::anchor(-i));
        const Rat secant = (s(y) - j.lo) / (y - j.lo);
        const double gap = std::fabs(secant.to_double() - 2.0);
        EXPECT_LT(gap, prev_gap);
        prev_gap = gap;
    }
    EXPECT_LT(prev_gap, 1e-9);
}

TEST(FixedSet, Examples) {
    const FixedSet fs = fixed_set(IntervalMapExpr(kS));
    ASSERT_EQ(fs.size(), 2u);
    EXPECT_EQ(fs[0], (ClosedInterval{r(0), r(1, 2)}));
    EXPECT_EQ(fs[1], (ClosedInterval{r(2, 3), r(1)}));
    EXPECT_EQ(fixed_set(IntervalMapExpr()), (FixedSet{{r(0), r(1)}}));

    const IntervalMapExpr zf = ZZAction({{0, 2}, {1, -1}}).as_expr();
    EXPECT_EQ(fixed_set(zf), (FixedSet{{r(0), r(1, 2)}, {r(2, 3), r(2, 3)}, {r(4, 5), r(1)}}));

    const IntervalMapExpr overlap = IntervalMapExpr(kS) * IntervalMapExpr(ModelTranslation(r(3, 5), r(3, 4), 1));
    EXPECT_EQ(code_of([&] { fixed_set(overlap); }), ErrorCode::Unsupported);
    EXPECT_EQ(code_of([] { fixed_set(IntervalMapExpr(kS) * IntervalMapExpr(PLMap())); }), ErrorCode::Unsupported);
    // Cancelling powers on one support leave everything fixed.
    EXPECT_EQ(fixed_set(IntervalMapExpr(kS) * IntervalMapExpr(kS.inverse())), (FixedSet{{r(0), r(1)}}));
}

TEST(FixedSetProperty, PLMatchesPointwise) {
    for (int k = 0; k < 300; ++k) {
        // Mix in an identity stretch so that intervals of fixed points occur.
        const PLMap f = random_pl(3);
        const Rat a = random_unit(16);
        std::vector<PLMap::Point> pts;
        for (const auto& p : f.breakpoints())
            if (p.first < a && p.second < a) pts.push_back(p);
        pts.emplace_back(a, a);
        pts.emplace_back(Rat(1), Rat(1));
        const PLMap g(pts);
        const FixedSet fs = fixed_set(IntervalMapExpr(g));
        for (int s = 0; s < 20; ++s) {
            const Rat x = random_unit(64);
            EXPECT_EQ(fixed_set_contains(fs, x), g(x) == x) << x.str();
        }
        for (const auto& iv : fs) {
            EXPECT_EQ(g(iv.lo), iv.lo);
            EXPECT_EQ(g(iv.hi), iv.hi);
        }
    }
}

TEST(ConjugateInto, ChartAndSupport) {
    const AffineChart j = conjugate_into(r(1, 2), r(2, 3));
    EXPECT_EQ(j(Rat(0)), r(1, 2));
    EXPECT_EQ(j(Rat(1)), r(2, 3));
    EXPECT_EQ(code_of([] { conjugate_into(Rat(0), r(1, 2)); }), ErrorCode::BadInterval);
    EXPECT_EQ(code_of([] { conjugate_into(r(2, 3), r(1, 2)); }), ErrorCode::BadInterval);
    const IntervalMapExpr c = conjugate(j, IntervalMapExpr(kT));
    for (int k = 0; k < 200; ++k) {
        const Rat x = random_unit();
        if (!j.contains_interior(x)) EXPECT_EQ(c(x), x);
        else EXPECT_EQ(c(x), IntervalMapExpr(kS)(x));
    }
    EXPECT_EQ(c.inverse()(c(r(3, 5))), r(3, 5));
}

TEST(ExprProperty, CompositionMonotonicityInverse) {
    for (int k = 0; k < 1000; ++k) {
        const IntervalMapExpr f = random_expr(), g = random_expr();
        Rat x = random_unit(), y = random_unit();
        EXPECT_EQ((f * g)(x), f(g(x)));
        EXPECT_EQ(f.inverse()(f(x)), x);
        EXPECT_EQ(f(f.inverse()(x)), x);
        if (x == y) continue;
        if (y < x) std::swap(x, y);
        EXPECT_LT(f(x), f(y));
        EXPECT_EQ(f(Rat(0)), Rat(0));
        EXPECT_EQ(f(Rat(1)), Rat(1));
    }
}

TEST(ExprProperty, PowersAdd) {
    for (int k = 0; k < 200; ++k) {
        const IntervalMapExpr f = random_expr();
        const long long a = uniform(-3, 3), b = uniform(-3, 3);
        const Rat x = random_unit();
        EXPECT_EQ(f.pow(a)(f.pow(b)(x)), f.pow(a + b)(x));
    }
}
