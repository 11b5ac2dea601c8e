#pragma once

// Action specs, versioned certificate reports, renormalization CSV traces and SVG plots.

#include <chrono>
#include <ctime>
#include <sstream>
#include <string>
#include <variant>

#include "nonsmooth/io.hpp"
#include "nonsmooth/renorm.hpp"

namespace nonsmooth {

inline constexpr const char* kReportFormat = "nonsmooth-certificate";
inline constexpr int kReportVersion = 1;

// ---------------------------------------------------------------------------------------------
// Action specs

struct ParabolicGerm {};

/// {"type": "punctured-torus"} | {"type": "zz", "truncation": N} | {"type": "pl", "breakpoints": [...]}
/// | {"type": "model-translation", "support": [l, r], "power": k} | {"type": "parabolic-germ"}
struct ActionSpec {
    io::Json raw;

    std::string type() const { return raw.at("type").get<std::string>(); }

    /// A bare type name or an inline JSON object.
    static ActionSpec parse(const std::string& text, long truncation = 4) {
        ActionSpec s;
        if (!text.empty() && text.front() == '{') {
            try {
                s.raw = io::Json::parse(text);
            } catch (const io::Json::parse_error& e) {
                throw Error(ErrorCode::Parse, std::string("action spec is not valid JSON: ") + e.what());
            }
        } else {
            s.raw = io::Json{{"type", text}};
            if (text == "zz") s.raw["truncation"] = truncation;
        }
        s.validate();
        return s;
    }

    void validate() const {
        if (!raw.is_object() || !raw.contains("type") || !raw.at("type").is_string())
            throw Error(ErrorCode::Parse, "action spec needs a string \"type\"");
        const std::string t = type();
        try {
            if (t == "punctured-torus" || t == "parabolic-germ") return;
            if (t == "zz") {
                if (!raw.contains("truncation") || !raw.at("truncation").is_number_integer() ||
                    raw.at("truncation").get<long long>() < 0)
                    throw Error(ErrorCode::Parse, "zz spec needs a non-negative integer \"truncation\"");
                return;
            }
            if (t == "pl") {
                (void)io::pl_map_from_json(raw);
                return;
            }
            if (t == "model-translation") {
                (void)io::model_translation_from_json(raw);
                return;
            }
        } catch (const io::Json::exception& e) {
            throw Error(ErrorCode::Parse, std::string("malformed action spec: ") + e.what());
        }
        throw Error(ErrorCode::Parse, "unknown action type '" + t + "'");
    }
};

using ResolvedAction = std::variant<TorusAction, IntervalAction, ParabolicGerm>;

/// zz resolves to the two-generator action a = T, b = S (so S_i = a^i b a^-i).
inline ResolvedAction resolve(const ActionSpec& spec) {
    const std::string t = spec.type();
    if (t == "punctured-torus") return make_punctured_torus();
    if (t == "parabolic-germ") return ParabolicGerm{};
    if (t == "zz")
        return IntervalAction({"a", "b"}, {IntervalMapExpr(zz::translation(1)), IntervalMapExpr(zz::base_map(1))});
    if (t == "pl") return IntervalAction({"a"}, {IntervalMapExpr(io::pl_map_from_json(spec.raw))});
    return IntervalAction({"a"}, {IntervalMapExpr(io::model_translation_from_json(spec.raw))});
}

// ---------------------------------------------------------------------------------------------
// Certificate reports

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline std::string_view ordering_name(Ordering o) { return to_string(o); }

inline io::Json torus_payload(std::size_t depth) {
    using io::to_json;
    const TorusAction t = make_punctured_torus();
    const TorusCertificate c = certify_torus(t, depth);
    const auto& dom = c.domination;

    io::Json gens = io::Json::array();
    for (std::size_t g = 0; g < t.action.rank(); ++g) {
        const FixedPointLift& f = t.lifts[g];
        gens.push_back({{"name", t.action.names()[g]},
                        {"matrix", to_json(t.matrices[g])},
                        {"lift", to_json(f.lift)},
                        {"fixed_point_bracket",
                         {{"lo", to_json(f.lo)}, {"hi", to_json(f.hi)}, {"exact", f.exact},
                          {"displacement_signs", io::Json::array({f.sign_lo, f.sign_hi})}}}});
    }

    const LiftedMap comm = t.action.word_map(t.commutator_word);
    io::Json table = io::Json::array();
    for (const auto& e : dom.table) {
        table.push_back({{"m", e.m},
                         {"generator", t.action.names()[static_cast<std::size_t>(e.generator)]},
                         {"sign", e.sign},
                         {"p_m", to_json(e.point)},
                         {"challenger", to_json(e.challenger)},
                         {"dominator", to_json(e.dominator)},
                         {"ordering", ordering_name(e.ordering)}});
    }
    io::Json inter = io::Json::array();
    for (const auto& e : c.interleaving.entries) {
        inter.push_back({{"generator", e.generator},
                         {"lo", to_json(e.lo)},
                         {"hi", to_json(e.hi)},
                         {"exact", e.exact},
                         {"displacement_signs", io::Json::array({e.sign_lo, e.sign_hi})}});
    }
    const bool routes = std::all_of(c.routes_agree.begin(), c.routes_agree.end(), [](bool b) { return b; });

    std::string verdict = "invalid";
    if (dom.valid && routes) verdict = dom.structural ? "certified" : "checked-range-only";

    return {
        {"target", "punctured-torus"},
        {"action", {{"type", "punctured-torus"}}},
        {"parameters", {{"depth", depth}}},
        {"orientation_normalization", c.normalization},
        {"generators", gens},
        {"commutator",
         {{"word", to_json(t.commutator_word)},
          {"matrix", to_json(comm.moebius())},
          {"trace", comm.moebius().trace().str()},
          {"lift", to_json(comm)},
          {"base_point", to_json(cover_basepoint())},
          {"image_of_base_point", to_json(comm(cover_basepoint()))}}},
        {"domination",
         {{"dominating_word", to_json(dom.dominating)},
          {"advancing_word", to_json(dom.advancing)},
          {"base_point", to_json(dom.base)},
          {"depth", dom.depth},
          {"checked_range", io::Json::array({0, dom.depth})},
          {"comparisons", dom.table.size()},
          {"valid", dom.valid},
          {"shallow", dom.shallow},
          {"structurally_extended", dom.structural},
          {"notes", dom.notes},
          {"table", table}}},
        {"interleaving",
         {{"window", io::Json::array({to_json(c.interleaving.window_start), to_json(c.interleaving.window_start + 1)})},
          {"brackets", inter},
          {"periodicity_note", c.interleaving.periodicity_note}}},
        {"route_agreement", routes},
        {"verdict", verdict},
    };
}

inline io::Json zz_payload(long truncation, long long cap) {
    using io::to_json;
    const ZZWitness w = zz_witness(truncation, cap);
    const Rat half(1, 2);
    io::Json entries = io::Json::array();
    bool all_below = true;
    for (const auto& e : w.entries) {
        const bool below = e.slope.upper() < half;
        all_below = all_below && below;
        entries.push_back({{"i", e.index},
                           {"n_i", e.n},
                           {"p_i", to_json(e.midpoint)},
                           {"slope_left", to_json(e.slope.left)},
                           {"slope_right", to_json(e.slope.right)},
                           {"below_half", below}});
    }
    io::Json anchors = io::Json::array();
    for (const auto& [j, c] : w.anchors)
        anchors.push_back({{"j", j}, {"c_j", to_json(c)}, {"image", to_json(w.f_action(c))}});

    std::string verdict = "invalid";
    if (all_below && w.anchors_fixed) verdict = w.uniform ? "certified" : "checked-range-only";

    return {
        {"target", "zz"},
        {"action", {{"type", "zz"}, {"truncation", truncation}}},
        {"parameters", {{"truncation", truncation}, {"cap", cap}}},
        {"orientation_normalization", "not applicable"},
        {"witness",
         {{"slope_bound", "1/2"},
          {"entries", entries},
          {"F", to_json(w.f_action)},
          {"anchors", anchors},
          {"anchors_fixed", w.anchors_fixed},
          {"uniform_in_i", w.uniform},
          {"structural_note",
           "T^i maps I_0 affinely onto I_i, so S_i^n at p_i has the slopes of S^n at p_0 for every i"},
          {"narrative", w.narrative}}},
        {"truncation_note", "the group is Z^Z; only f supported in |i| <= truncation is represented"},
        {"verdict", verdict},
    };
}

/// Full report: format tag, header (the only non-deterministic field), then the payload.
inline io::Json wrap_report(const io::Json& payload, bool timestamp = true) {
    io::Json r{{"format", kReportFormat}, {"version", kReportVersion}};
    r["header"] = timestamp ? io::Json{{"generated_at", utc_timestamp()}} : io::Json::object();
    for (const auto& [k, v] : payload.items()) r[k] = v;
    return r;
}

/// The report minus its header, for byte-level comparison.
inline io::Json strip_header(io::Json r) {
    r.erase("header");
    return r;
}

/// Re-derives a report from its echoed parameters and checks the payload is identical.
inline bool revalidate_report(const io::Json& report) {
    if (report.value("format", "") != kReportFormat || report.value("version", 0) != kReportVersion) return false;
    const std::string target = report.at("target").get<std::string>();
    io::Json fresh;
    if (target == "punctured-torus") {
        fresh = torus_payload(report.at("parameters").at("depth").get<std::size_t>());
    } else if (target == "zz") {
        const auto& p = report.at("parameters");
        fresh = zz_payload(p.at("truncation").get<long>(), p.at("cap").get<long long>());
    } else {
        return false;
    }
    return strip_header(report).dump() == strip_header(wrap_report(fresh, false)).dump();
}

// ---------------------------------------------------------------------------------------------
// Renormalization traces

struct RenormOptions {
    std::size_t windows = 50;
    std::size_t grid = 64;
    Rat radius = Rat(2);
    Rat enlargement = Rat(3);
    std::string sequence;  // empty: the action's default
    long start = -1;       // -1: the sequence's default first index
    long long cap = 64;    // zz only
};

/// Probe and base points for an action spec.
inline std::pair<IntervalProbe, std::vector<std::pair<long, Rat>>> renorm_setup(const ActionSpec& spec,
                                                                                 const RenormOptions& opt) {
    const std::string t = spec.type();
    IntervalProbe probe;
    std::string seq = opt.sequence;
    if (t == "parabolic-germ") {
        probe = parabolic_germ_probe();
        if (seq.empty()) seq = "reciprocal";
    } else if (t == "punctured-torus") {
        probe = probe_from(make_punctured_torus());
        if (seq.empty()) seq = "deck";
    } else if (t == "zz") {
        const ZZWitness w = zz_witness(spec.raw.at("truncation").get<long>(), opt.cap);
        const IntervalMapExpr zf = w.f_action.as_expr();
        probe.generators.push_back({"Z_F", [zf](const Rat& x) { return zf(x); }});
        if (seq.empty()) seq = "midpoints";
    } else {
        probe = probe_from(std::get<IntervalAction>(resolve(spec)));
        if (seq.empty()) seq = t == "model-translation" ? "anchors-left" : "dyadic";
    }

    const long first = opt.start >= 0 ? opt.start : (seq == "deck" || seq == "midpoints" ? 0 : 1);
    std::vector<std::pair<long, Rat>> pts;
    if (seq == "reciprocal") {
        if (first < 1) throw Error(ErrorCode::Parse, "reciprocal sequence starts at i >= 1");
        pts = sequences::reciprocal(first, opt.windows);
    } else if (seq == "dyadic") {
        pts = sequences::dyadic(first, opt.windows);
    } else if (seq == "deck") {
        pts = sequences::deck(first, opt.windows);
    } else if (seq == "midpoints") {
        pts = sequences::midpoints(first, opt.windows);
    } else if (seq == "anchors-left") {
        AffineChart j{Rat(0), Rat(1)};
        if (t == "model-translation") j = io::model_translation_from_json(spec.raw).support();
        pts = sequences::anchors_left(j, first, opt.windows);
    } else {
        throw Error(ErrorCode::Parse, "unknown sequence '" + seq + "'");
    }
    return {std::move(probe), std::move(pts)};
}

inline std::vector<WindowStats> run_renorm(const ActionSpec& spec, const RenormOptions& opt) {
    const auto [probe, pts] = renorm_setup(spec, opt);
    std::vector<WindowStats> rows;
    for (const Window& w : build_windows(probe, pts, opt.enlargement)) {
        const RescaledSystem rs = rescale(w, probe);
        for (auto& s : window_statistics(rs, opt.radius, opt.grid)) rows.push_back(std::move(s));
    }
    return rows;
}

inline constexpr const char* kCsvHeader =
    "window_index,generator,displacement_at_0,grid_deviation,fixed_point_bracket_lo,fixed_point_bracket_hi,"
    "grid_deviation_decimal";

namespace detail {
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}
}  // namespace detail

inline std::string to_csv(const std::vector<WindowStats>& rows) {
    std::ostringstream os;
    os << kCsvHeader << "\n";
    for (const auto& r : rows) {
        os << r.window_index << "," << detail::csv_field(r.map) << "," << r.displacement_at_0.str() << ","
           << r.grid_deviation.str() << ",";
        if (r.bracket) os << r.bracket->lo.str() << "," << r.bracket->hi.str();
        else os << ",";
        os << "," << r.grid_deviation.decimal(12) << "\n";
    }
    return os.str();
}

/// Splits one CSV line, honoring double quotes.
inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                out.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                out.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.emplace_back();
        } else if (c != '\r') {
            out.back() += c;
        }
    }
    return out;
}

struct PlotSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;  // (window_index, grid_deviation)
};

inline std::vector<PlotSeries> read_trace(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::Parse, "empty CSV");
    const auto header = split_csv_line(line);
    auto col = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw Error(ErrorCode::Parse, "CSV lacks column " + name);
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t ci = col("window_index"), cg = col("generator"), cd = col("grid_deviation_decimal");
    std::vector<PlotSeries> series;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != header.size()) throw Error(ErrorCode::Parse, "CSV row has wrong field count: " + line);
        auto it = std::find_if(series.begin(), series.end(), [&](const auto& s) { return s.name == f[cg]; });
        if (it == series.end()) {
            series.push_back({f[cg], {}});
            it = series.end() - 1;
        }
        try {
            it->points.emplace_back(std::stod(f[ci]), std::stod(f[cd]));
        } catch (const std::exception&) {
            throw Error(ErrorCode::Parse, "non-numeric CSV value in: " + line);
        }
    }
    if (series.empty()) throw Error(ErrorCode::Parse, "CSV has no data rows");
    return series;
}

/// One polyline per series: grid deviation against window index.
inline std::string render_svg(const std::vector<PlotSeries>& series) {
    constexpr double W = 640, H = 400, ml = 70, mr = 20, mt = 30, mb = 50;
    double xmin = 1e300, xmax = -1e300, ymin = 0, ymax = -1e300;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymax = std::max(ymax, y);
        }
    if (xmax <= xmin) xmax = xmin + 1;
    if (ymax <= ymin) ymax = ymin + 1;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };
    static constexpr const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << W << " " << H << "\" width=\"" << W
       << "\" height=\"" << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\"" << H - mb
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">window index</text>\n";
    os << "<text x=\"16\" y=\"" << (mt + H - mb) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << (mt + H - mb) / 2 << ")\">grid deviation</text>\n";
    auto label = [&](double v) {
        std::ostringstream l;
        l.precision(4);
        l << v;
        return l.str();
    };
    os << "<text x=\"" << ml << "\" y=\"" << H - mb + 16 << "\" text-anchor=\"middle\">" << label(xmin) << "</text>\n";
    os << "<text x=\"" << W - mr << "\" y=\"" << H - mb + 16 << "\" text-anchor=\"middle\">" << label(xmax)
       << "</text>\n";
    os << "<text x=\"" << ml - 6 << "\" y=\"" << H - mb << "\" text-anchor=\"end\">" << label(ymin) << "</text>\n";
    os << "<text x=\"" << ml - 6 << "\" y=\"" << mt + 4 << "\" text-anchor=\"end\">" << label(ymax) << "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const char* color = colors[k % std::size(colors)];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : series[k].points) os << px(x) << "," << py(y) << " ";
        os << "\"/>\n";
        os << "<text x=\"" << W - mr - 4 << "\" y=\"" << mt + 14 * static_cast<double>(k + 1)
           << "\" text-anchor=\"end\" fill=\"" << color << "\">" << series[k].name << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace nonsmooth
