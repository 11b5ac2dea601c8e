#pragma once

// Free-group words and marked actions: a generating set bound to maps on one domain (the cover
// line or the unit interval), evaluated letter by letter. Also the truncated Z^Z action
// Z_f = prod_i S_i^{f(i)} with S_i = T^i S T^{-i}.

#include <concepts>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "nonsmooth/cover.hpp"
#include "nonsmooth/plmaps.hpp"

namespace nonsmooth {

struct Letter {
    int gen = 0;
    int exp = 1;  // +1 or -1
    friend bool operator==(const Letter&, const Letter&) = default;
};

/// A freely reduced word in generators 0, 1, ... (written a, b, ...; capitals are inverses).
class Word {
public:
    Word() = default;
    explicit Word(std::vector<Letter> letters) {
        for (const auto& l : letters) push(l);
    }
    static Word generator(int g, int exp = 1) { return Word({{g, exp}}); }

    const std::vector<Letter>& letters() const { return letters_; }
    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }

    Word inverse() const {
        Word w;
        for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back({it->gen, -it->exp});
        return w;
    }

    friend Word operator*(const Word& u, const Word& v) {
        Word w = u;
        for (const auto& l : v.letters_) w.push(l);
        return w;
    }

    Word pow(long long n) const {
        const Word base = n >= 0 ? *this : inverse();
        Word out;
        for (long long i = 0; i < (n >= 0 ? n : -n); ++i) out = out * base;
        return out;
    }

    /// Exponent sum of each generator (the image in the abelianization).
    std::map<int, long long> exponent_sums() const {
        std::map<int, long long> s;
        for (const auto& l : letters_) s[l.gen] += l.exp;
        return s;
    }

    int max_generator() const {
        int m = -1;
        for (const auto& l : letters_) m = std::max(m, l.gen);
        return m;
    }

    std::string str() const {
        if (letters_.empty()) return "1";
        std::string s;
        for (const auto& l : letters_) s += static_cast<char>((l.exp > 0 ? 'a' : 'A') + l.gen);
        return s;
    }

    /// Letters a-z (capitals invert), "^n" powers (n may be negative), "[x,y]" commutators,
    /// parentheses, and "1" for the empty word. Whitespace is ignored.
    static Word parse(std::string_view text);

    friend bool operator==(const Word&, const Word&) = default;

private:
    void push(const Letter& l) {
        if (l.exp != 1 && l.exp != -1) throw Error(ErrorCode::InvalidArgument, "letter exponent must be +-1");
        if (!letters_.empty() && letters_.back().gen == l.gen && letters_.back().exp == -l.exp) letters_.pop_back();
        else letters_.push_back(l);
    }

    std::vector<Letter> letters_;
};

/// u v u^-1 v^-1, freely reduced.
inline Word commutator(const Word& u, const Word& v) { return u * v * u.inverse() * v.inverse(); }

namespace detail {

class WordParser {
public:
    explicit WordParser(std::string_view s) {
        for (char c : s)
            if (c != ' ' && c != '\t' && c != '\n') text_ += c;
    }

    Word run() {
        Word w = sequence();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return w;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw Error(ErrorCode::Parse, "word '" + text_ + "': " + why);
    }
    bool at(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

    Word sequence() {
        Word w;
        while (pos_ < text_.size() && !at(',') && !at(']') && !at(')')) w = w * power();
        return w;
    }

    Word power() {
        Word base = atom();
        if (at('^')) {
            ++pos_;
            const std::size_t start = pos_;
            if (at('-') || at('+')) ++pos_;
            while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
            const std::string digits = text_.substr(start, pos_ - start);
            if (digits.empty() || digits == "-" || digits == "+") fail("missing exponent");
            base = base.pow(std::stoll(digits));
        }
        return base;
    }

    Word atom() {
        if (pos_ >= text_.size()) fail("unexpected end");
        const char c = text_[pos_++];
        if (c >= 'a' && c <= 'z') return Word::generator(c - 'a', 1);
        if (c >= 'A' && c <= 'Z') return Word::generator(c - 'A', -1);
        if (c == '1') return {};
        if (c == '(') {
            Word w = sequence();
            if (!at(')')) fail("expected ')'");
            ++pos_;
            return w;
        }
        if (c == '[') {
            Word u = sequence();
            if (!at(',')) fail("expected ','");
            ++pos_;
            Word v = sequence();
            if (!at(']')) fail("expected ']'");
            ++pos_;
            return commutator(u, v);
        }
        --pos_;
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string text_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline Word Word::parse(std::string_view text) { return detail::WordParser(text).run(); }

/// True iff w is trivial in the abelianization (every exponent sum vanishes).
inline bool is_commutator_class_trivial(const Word& w) {
    for (const auto& [g, s] : w.exponent_sums())
        if (s != 0) return false;
    return true;
}

enum class DomainTag { CoverLine, UnitInterval };

inline std::string_view to_string(DomainTag t) { return t == DomainTag::CoverLine ? "cover-line" : "unit-interval"; }

/// How a map type acts: its point type, evaluation, inversion and composition.
template <class Map>
struct MapTraits;

template <>
struct MapTraits<LiftedMap> {
    using Point = CoverPoint;
    static constexpr DomainTag tag = DomainTag::CoverLine;
    static Point apply(const LiftedMap& f, const Point& x) { return f(x); }
    static LiftedMap inverse(const LiftedMap& f) { return invert_lift(f); }
    static LiftedMap compose(const LiftedMap& f, const LiftedMap& g) { return compose_lifts(f, g); }
    static LiftedMap identity() { return LiftedMap::identity(); }
    static void check_domain(const Point&) {}
    static std::string str(const Point& x) { return x.str(); }
};

template <>
struct MapTraits<IntervalMapExpr> {
    using Point = Rat;
    static constexpr DomainTag tag = DomainTag::UnitInterval;
    static Point apply(const IntervalMapExpr& f, const Point& x) { return f.apply(x); }
    static IntervalMapExpr inverse(const IntervalMapExpr& f) { return f.inverse(); }
    static IntervalMapExpr compose(const IntervalMapExpr& f, const IntervalMapExpr& g) { return f * g; }
    static IntervalMapExpr identity() { return {}; }
    static void check_domain(const Point& x) { IntervalMapExpr::check_domain(x); }
    static std::string str(const Point& x) { return x.str(); }
};

template <class Map>
concept ActionMap = requires(const Map& f, const typename MapTraits<Map>::Point& x) {
    { MapTraits<Map>::apply(f, x) } -> std::convertible_to<typename MapTraits<Map>::Point>;
    { MapTraits<Map>::inverse(f) } -> std::convertible_to<Map>;
    { MapTraits<Map>::compose(f, f) } -> std::convertible_to<Map>;
};

/// Generators bound to invertible maps sharing one domain.
template <ActionMap Map>
class MarkedAction {
public:
    using Traits = MapTraits<Map>;
    using Point = typename Traits::Point;

    MarkedAction() = default;
    MarkedAction(std::vector<std::string> names, std::vector<Map> maps) : names_(std::move(names)), maps_(std::move(maps)) {
        if (names_.size() != maps_.size()) throw Error(ErrorCode::InvalidArgument, "one name per generator");
        inverses_.reserve(maps_.size());
        for (const auto& m : maps_) inverses_.push_back(Traits::inverse(m));
    }

    static constexpr DomainTag domain() { return Traits::tag; }
    std::size_t rank() const { return maps_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const Map& generator(std::size_t i) const { return maps_.at(i); }
    const Map& generator_inverse(std::size_t i) const { return inverses_.at(i); }

    const Map& letter_map(const Letter& l) const {
        check_letter(l);
        return l.exp > 0 ? maps_[static_cast<std::size_t>(l.gen)] : inverses_[static_cast<std::size_t>(l.gen)];
    }

    /// w(x): the rightmost letter acts first.
    Point eval(const Word& w, const Point& x) const {
        Traits::check_domain(x);
        Point y = x;
        const auto& ls = w.letters();
        for (auto it = ls.rbegin(); it != ls.rend(); ++it) y = Traits::apply(letter_map(*it), y);
        return y;
    }

    /// The map of w as a single object.
    Map word_map(const Word& w) const {
        Map acc = Traits::identity();
        for (const auto& l : w.letters()) acc = Traits::compose(acc, letter_map(l));
        return acc;
    }

    /// Letter name for generator g, for reports.
    std::string letter_name(const Letter& l) const {
        check_letter(l);
        return names_[static_cast<std::size_t>(l.gen)] + (l.exp < 0 ? "^-1" : "");
    }

private:
    void check_letter(const Letter& l) const {
        if (l.gen < 0 || static_cast<std::size_t>(l.gen) >= maps_.size())
            throw Error(ErrorCode::InvalidArgument, "word uses generator " + std::to_string(l.gen) +
                                                        " but the action has " + std::to_string(maps_.size()));
    }

    std::vector<std::string> names_;
    std::vector<Map> maps_;
    std::vector<Map> inverses_;
};

template <ActionMap Map>
typename MarkedAction<Map>::Point word_eval(const MarkedAction<Map>& act, const Word& w,
                                            const typename MarkedAction<Map>::Point& x) {
    return act.eval(w, x);
}

/// [x0, w(x0), ..., w^n(x0)].
template <ActionMap Map>
std::vector<typename MarkedAction<Map>::Point> orbit_sequence(const MarkedAction<Map>& act, const Word& w,
                                                              const typename MarkedAction<Map>::Point& x0,
                                                              std::size_t n) {
    std::vector<typename MarkedAction<Map>::Point> out;
    out.reserve(n + 1);
    out.push_back(x0);
    for (std::size_t i = 0; i < n; ++i) out.push_back(act.eval(w, out.back()));
    return out;
}

using CoverAction = MarkedAction<LiftedMap>;
using IntervalAction = MarkedAction<IntervalMapExpr>;

// ---------------------------------------------------------------------------------------------
// The truncated Z^Z action.

namespace zz {

/// I_i = [c_i, c_{i+1}] = T^i(I_0).
inline AffineChart interval(long i) { return {chart::anchor(i), chart::anchor(i + 1)}; }
/// p_i, the midpoint of I_i.
inline Rat midpoint(long i) { return nonsmooth::midpoint(chart::anchor(i), chart::anchor(i + 1)); }
/// T^k, the model translation of [0,1] along the whole chart.
inline ModelTranslation translation(long long k = 1) { return {Rat(0), Rat(1), k}; }
/// S^k, supported on I_0.
inline ModelTranslation base_map(long long k = 1) { return {chart::anchor(0), chart::anchor(1), k}; }

}  // namespace zz

/// Left and right slopes at a point of a PL map; `upper` bounds both.
struct OneSidedPair {
    Rat left, right;
    Rat upper() const { return std::max(left, right); }
};

/// Z_f for finitely supported f : Z -> Z. Identity outside the listed intervals.
class ZZAction {
public:
    ZZAction() = default;
    explicit ZZAction(std::map<long, long long> support) {
        for (auto& [i, e] : support)
            if (e != 0) support_.emplace(i, e);
    }

    const std::map<long, long long>& support() const { return support_; }

    /// S_i^{f(i)} written as a model translation on I_i (T^i is affine from I_0 onto I_i).
    static ModelTranslation factor(long i, long long e) {
        const AffineChart j = zz::interval(i);
        return {j.lo, j.hi, e};
    }

    /// S_i^e as the lazy conjugate T^i S^e T^{-i}.
    static IntervalMapExpr conjugate_form(long i, long long e) {
        return IntervalMapExpr(zz::translation(i)) * IntervalMapExpr(zz::base_map(e)) *
               IntervalMapExpr(zz::translation(-i));
    }

    Rat operator()(const Rat& x) const {
        IntervalMapExpr::check_domain(x);
        if (x.is_zero() || x == Rat(1)) return x;
        const long i = chart::piece(x);
        const auto it = support_.find(i);
        if (it == support_.end()) return x;
        return factor(i, it->second)(x);
    }

    /// Slopes of Z_f at p_i, by the chain rule through T^{-i}, S^{f(i)}, T^i.
    OneSidedPair slope_mid(long i) const {
        const auto it = support_.find(i);
        const long long e = it == support_.end() ? 0 : it->second;
        const IntervalMapExpr m = conjugate_form(i, e);
        const Rat p = zz::midpoint(i);
        return {one_sided_slope(m, p, Side::Left), one_sided_slope(m, p, Side::Right)};
    }

    IntervalMapExpr as_expr() const {
        std::vector<MapFactor> fs;
        for (const auto& [i, e] : support_) fs.emplace_back(factor(i, e));
        return IntervalMapExpr(std::move(fs));
    }

    /// Z_f o Z_g = Z_{f+g}.
    friend ZZAction operator*(const ZZAction& f, const ZZAction& g) {
        std::map<long, long long> s = f.support_;
        for (const auto& [i, e] : g.support_) s[i] += e;
        return ZZAction(std::move(s));
    }

    friend bool operator==(const ZZAction&, const ZZAction&) = default;

private:
    std::map<long, long long> support_;
};

inline ZZAction zz_build(std::map<long, long long> support) { return ZZAction(std::move(support)); }
inline Rat zz_apply(const ZZAction& z, const Rat& x) { return z(x); }
inline OneSidedPair zz_slope_mid(const ZZAction& z, long i) { return z.slope_mid(i); }

}  // namespace nonsmooth
