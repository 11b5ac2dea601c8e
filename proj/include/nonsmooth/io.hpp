#pragma once

// JSON forms of the library's values. Every number that is not a small integer index is written as
// an exact rational string "n/d" ("n" when d = 1).

#include <json.hpp>

#include <limits>

#include "nonsmooth/obstruction.hpp"

namespace nonsmooth::io {

using Json = nlohmann::ordered_json;

inline Json to_json(const Rat& r) { return r.str(); }

inline Rat rat_from_json(const Json& j) {
    if (j.is_string()) return Rat::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rat(j.get<long long>());
    throw Error(ErrorCode::Parse, "expected a rational string, got " + j.dump());
}

inline Json to_json(const ProjPoint& u) { return Json{{"t", u.str()}}; }

inline long long small_int(const BigInt& v) {
    if (v > BigInt(std::numeric_limits<long long>::max()) || v < BigInt(std::numeric_limits<long long>::min()))
        throw Error(ErrorCode::OutOfDomain, "integer too large for JSON: " + v.str());
    return v.convert_to<long long>();
}

inline Json to_json(const CoverPoint& x) { return Json{{"t", x.base.str()}, {"sheet", small_int(x.sheet)}}; }

inline CoverPoint cover_point_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("t")) throw Error(ErrorCode::Parse, "cover point needs a \"t\" field");
    const BigInt sheet = j.contains("sheet") ? BigInt(j.at("sheet").get<long long>()) : BigInt(0);
    return {ProjPoint::parse(j.at("t").get<std::string>()), sheet};
}

inline Json to_json(const MoebiusMap& m) {
    return Json::array({Json::array({m.a().str(), m.b().str()}), Json::array({m.c().str(), m.d().str()})});
}

inline MoebiusMap moebius_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2 || j[0].size() != 2 || j[1].size() != 2)
        throw Error(ErrorCode::Parse, "matrix must be [[a,b],[c,d]]");
    return {rat_from_json(j[0][0]), rat_from_json(j[0][1]), rat_from_json(j[1][0]), rat_from_json(j[1][1])};
}

inline Json to_json(const LiftedMap& f) {
    return Json{{"matrix", to_json(f.moebius())}, {"basepoint_image", to_json(f.basepoint_image())}};
}

inline LiftedMap lifted_map_from_json(const Json& j) {
    return {moebius_from_json(j.at("matrix")), cover_point_from_json(j.at("basepoint_image"))};
}

inline Json to_json(const PLMap& f) {
    Json pts = Json::array();
    for (const auto& [x, y] : f.breakpoints()) pts.push_back(Json::array({x.str(), y.str()}));
    return Json{{"breakpoints", pts}};
}

inline PLMap pl_map_from_json(const Json& j) {
    std::vector<PLMap::Point> pts;
    for (const auto& p : j.at("breakpoints")) {
        if (!p.is_array() || p.size() != 2) throw Error(ErrorCode::Parse, "breakpoint must be [x, y]");
        pts.emplace_back(rat_from_json(p[0]), rat_from_json(p[1]));
    }
    return PLMap(std::move(pts));
}

inline Json to_json(const ModelTranslation& m) {
    return Json{{"support", Json::array({m.support().lo.str(), m.support().hi.str()})}, {"power", m.power()}};
}

inline ModelTranslation model_translation_from_json(const Json& j) {
    const Json& s = j.at("support");
    if (!s.is_array() || s.size() != 2) throw Error(ErrorCode::Parse, "support must be [l, r]");
    return {rat_from_json(s[0]), rat_from_json(s[1]), j.at("power").get<long long>()};
}

inline Json to_json(const IntervalMapExpr& m);
inline IntervalMapExpr expr_from_json(const Json& j);

/// Composition array, leftmost factor first (the last factor acts first).
inline Json to_json(const IntervalMapExpr& m) {
    Json arr = Json::array();
    for (const auto& f : m.factors()) {
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, PLMap>) arr.push_back(Json{{"pl", to_json(x)}});
                else if constexpr (std::is_same_v<T, ModelTranslation>) arr.push_back(Json{{"model_translation", to_json(x)}});
                else
                    arr.push_back(Json{{"conjugated",
                                        {{"support", Json::array({x.chart.lo.str(), x.chart.hi.str()})},
                                         {"expr", to_json(*x.inner)}}}});
            },
            f);
    }
    return arr;
}

inline IntervalMapExpr expr_from_json(const Json& j) {
    if (!j.is_array()) throw Error(ErrorCode::Parse, "expression must be a composition array");
    std::vector<MapFactor> fs;
    for (const auto& f : j) {
        if (f.contains("pl")) fs.emplace_back(pl_map_from_json(f.at("pl")));
        else if (f.contains("model_translation")) fs.emplace_back(model_translation_from_json(f.at("model_translation")));
        else if (f.contains("conjugated")) {
            const Json& c = f.at("conjugated");
            const AffineChart chart = conjugate_into(rat_from_json(c.at("support")[0]), rat_from_json(c.at("support")[1]));
            fs.emplace_back(Conjugated{chart, std::make_shared<const IntervalMapExpr>(expr_from_json(c.at("expr")))});
        } else {
            throw Error(ErrorCode::Parse, "unknown factor " + f.dump());
        }
    }
    return IntervalMapExpr(std::move(fs));
}

/// Words serialize as letter strings (two-generator case) or [[index, exp], ...] arrays.
inline Json to_json(const Word& w) { return w.str(); }

inline Json word_to_pairs(const Word& w) {
    Json arr = Json::array();
    for (const auto& l : w.letters()) arr.push_back(Json::array({l.gen, l.exp}));
    return arr;
}

inline Word word_from_json(const Json& j) {
    if (j.is_string()) return Word::parse(j.get<std::string>());
    std::vector<Letter> ls;
    for (const auto& p : j) ls.push_back({p.at(0).get<int>(), p.at(1).get<int>()});
    return Word(std::move(ls));
}

inline Json to_json(const ZZAction& z) {
    Json s = Json::object();
    for (const auto& [i, e] : z.support()) s[std::to_string(i)] = e;
    return s;
}

inline ZZAction zz_from_json(const Json& j) {
    std::map<long, long long> s;
    for (const auto& [k, v] : j.items()) {
        const Rat i = Rat::parse(k);
        if (!i.is_integer()) throw Error(ErrorCode::Parse, "support keys must be integers");
        s[i.num().convert_to<long>()] = v.get<long long>();
    }
    return ZZAction(std::move(s));
}

}  // namespace nonsmooth::io
