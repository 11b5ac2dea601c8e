#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "nonsmooth/report.hpp"

using namespace nonsmooth;

namespace {

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Unsupported;
}

bool no_floats(const io::Json& j) {
    if (j.is_number_float()) return false;
    if (j.is_structured())
        for (const auto& v : j) if (!no_floats(v)) return false;
    return true;
}

std::string golden_path(const std::string& name) { return std::string(NONSMOOTH_GOLDEN_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Set NONSMOOTH_UPDATE_GOLDEN=1 to rewrite the golden files from the current build.
void check_golden(const std::string& name, const io::Json& report) {
    const std::string text = strip_header(report).dump(2) + "\n";
    if (const char* u = std::getenv("NONSMOOTH_UPDATE_GOLDEN"); u && std::string(u) == "1") {
        std::ofstream(golden_path(name), std::ios::binary) << text;
    }
    EXPECT_EQ(text, slurp(golden_path(name))) << name;
}

}  // namespace

TEST(ActionSpec, NamesAndJson) {
    EXPECT_EQ(ActionSpec::parse("punctured-torus").type(), "punctured-torus");
    EXPECT_EQ(ActionSpec::parse("zz", 7).raw.at("truncation"), 7);
    const ActionSpec pl = ActionSpec::parse(R"({"type":"pl","breakpoints":[["0","0"],["1/2","1/3"],["1","1"]]})");
    const auto act = std::get<IntervalAction>(resolve(pl));
    EXPECT_EQ(act.generator(0)(Rat(BigInt(1), BigInt(2))), Rat(BigInt(1), BigInt(3)));
    const ActionSpec mt = ActionSpec::parse(R"({"type":"model-translation","support":["1/2","2/3"],"power":1})");
    EXPECT_EQ(std::get<IntervalAction>(resolve(mt)).generator(0)(Rat(BigInt(7), BigInt(12))), Rat(BigInt(11), BigInt(18)));
    EXPECT_TRUE(std::holds_alternative<ParabolicGerm>(resolve(ActionSpec::parse("parabolic-germ"))));
    EXPECT_TRUE(std::holds_alternative<TorusAction>(resolve(ActionSpec::parse("punctured-torus"))));
}

TEST(ActionSpec, Rejections) {
    for (const char* bad : {"klein-bottle", "{", R"({"type":3})", R"({"type":"zz"})", R"({"type":"zz","truncation":-1})",
                            R"({"type":"pl","breakpoints":[["0","0"],["1/2","x"],["1","1"]]})",
                            R"({"type":"model-translation","support":["1/2"],"power":1})"})
        EXPECT_EQ(code_of([&] { ActionSpec::parse(bad); }), ErrorCode::Parse) << bad;
    EXPECT_NE(code_of([] { ActionSpec::parse(R"({"type":"pl","breakpoints":[["0","0"],["1","1/2"]]})"); }),
              ErrorCode::Unsupported);
}

TEST(Report, TorusContents) {
    const io::Json r = wrap_report(torus_payload(50));
    EXPECT_EQ(r.at("format"), kReportFormat);
    EXPECT_EQ(r.at("version"), kReportVersion);
    EXPECT_TRUE(r.at("header").contains("generated_at"));
    EXPECT_EQ(r.at("verdict"), "certified");
    EXPECT_EQ(r.at("orientation_normalization"), "none");
    EXPECT_EQ(r.at("domination").at("table").size(), 51u * 4u);
    EXPECT_TRUE(r.at("domination").at("structurally_extended").get<bool>());
    EXPECT_EQ(r.at("commutator").at("trace"), "-2");
    EXPECT_EQ(r.at("commutator").at("image_of_base_point").dump(), R"({"t":"0","sheet":1})");
    EXPECT_TRUE(r.at("route_agreement").get<bool>());
    EXPECT_TRUE(no_floats(r));
}

TEST(Report, ZZContents) {
    const io::Json r = wrap_report(zz_payload(16, 64));
    EXPECT_EQ(r.at("verdict"), "certified");
    EXPECT_EQ(r.at("witness").at("entries").size(), 33u);
    for (const auto& e : r.at("witness").at("entries")) EXPECT_TRUE(e.at("below_half").get<bool>());
    EXPECT_EQ(r.at("witness").at("anchors").size(), 37u);
    EXPECT_TRUE(no_floats(r));
}

TEST(Report, ShallowTorusIsCheckedRangeOnlyOrCertified) {
    const io::Json r = torus_payload(0);
    EXPECT_TRUE(r.at("domination").at("shallow").get<bool>());
    const std::string v = r.at("verdict");
    EXPECT_TRUE(v == "certified" || v == "checked-range-only");
}

TEST(Report, Determinism) {
    EXPECT_EQ(torus_payload(20).dump(), torus_payload(20).dump());
    EXPECT_EQ(zz_payload(5, 64).dump(), zz_payload(5, 64).dump());
    EXPECT_EQ(strip_header(wrap_report(torus_payload(3))).dump(), strip_header(wrap_report(torus_payload(3), false)).dump());
}

TEST(Report, Revalidation) {
    io::Json r = wrap_report(torus_payload(12));
    EXPECT_TRUE(revalidate_report(r));
    r["header"]["generated_at"] = "1970-01-01T00:00:00Z";
    EXPECT_TRUE(revalidate_report(r));
    io::Json tampered = r;
    tampered["domination"]["table"][5]["ordering"] = "Greater";
    EXPECT_FALSE(revalidate_report(tampered));
    io::Json z = wrap_report(zz_payload(3, 64));
    EXPECT_TRUE(revalidate_report(z));
    z["verdict"] = "invalid";
    EXPECT_FALSE(revalidate_report(z));
    io::Json wrong = r;
    wrong["version"] = 2;
    EXPECT_FALSE(revalidate_report(wrong));
}

TEST(Golden, CertifyReports) {
    check_golden("certify_punctured_torus_depth50.json", wrap_report(torus_payload(50)));
    check_golden("certify_zz_truncation16.json", wrap_report(zz_payload(16, 64)));
}

TEST(Csv, ParabolicRows) {
    RenormOptions opt;
    const auto rows = run_renorm(ActionSpec::parse("parabolic-germ"), opt);
    ASSERT_EQ(rows.size(), 50u);
    const std::string csv = to_csv(rows);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, kCsvHeader);
    std::getline(in, line);
    EXPECT_EQ(line, "1,g,-1,1,,,1.000000000000");
    EXPECT_EQ(to_csv(rows), to_csv(run_renorm(ActionSpec::parse("parabolic-germ"), opt)));
}

TEST(Csv, QuotingAndReadBack) {
    RenormOptions opt;
    opt.windows = 5;
    const auto rows = run_renorm(ActionSpec::parse("punctured-torus"), opt);
    ASSERT_EQ(rows.size(), 15u);
    const std::string csv = to_csv(rows);
    EXPECT_NE(csv.find("\"[a,b]\""), std::string::npos);
    std::istringstream in(csv);
    const auto series = read_trace(in);
    ASSERT_EQ(series.size(), 3u);
    EXPECT_EQ(series[2].name, "[a,b]");
    EXPECT_EQ(series[0].points.size(), 5u);
    EXPECT_EQ(split_csv_line(R"(1,"x,""y""",3)"), (std::vector<std::string>{"1", "x,\"y\"", "3"}));
}

TEST(Csv, BadInput) {
    std::istringstream empty("");
    EXPECT_EQ(code_of([&] { read_trace(empty); }), ErrorCode::Parse);
    std::istringstream header_only(std::string(kCsvHeader) + "\n");
    EXPECT_EQ(code_of([&] { read_trace(header_only); }), ErrorCode::Parse);
    std::istringstream ragged(std::string(kCsvHeader) + "\n1,g,2\n");
    EXPECT_EQ(code_of([&] { read_trace(ragged); }), ErrorCode::Parse);
}

TEST(Csv, OtherActions) {
    RenormOptions opt;
    opt.windows = 4;
    EXPECT_EQ(run_renorm(ActionSpec::parse("zz", 3), opt).size(), 4u);
    // Past the truncation radius every represented factor fixes the midpoint.
    EXPECT_EQ(code_of([&] { run_renorm(ActionSpec::parse("zz", 2), opt); }), ErrorCode::EmptyDisplacement);
    EXPECT_EQ(run_renorm(ActionSpec::parse(R"({"type":"model-translation","support":["0","1"],"power":1})"), opt).size(), 4u);
    EXPECT_EQ(code_of([&] { run_renorm(ActionSpec::parse(R"({"type":"pl","breakpoints":[["0","0"],["1","1"]]})"), opt); }),
              ErrorCode::EmptyDisplacement);
    opt.sequence = "spiral";
    EXPECT_EQ(code_of([&] { run_renorm(ActionSpec::parse("parabolic-germ"), opt); }), ErrorCode::Parse);
}

TEST(Svg, OnePolylinePerSeries) {
    RenormOptions opt;
    opt.windows = 6;
    std::istringstream in(to_csv(run_renorm(ActionSpec::parse("punctured-torus"), opt)));
    const std::string svg = render_svg(read_trace(in));
    std::size_t polylines = 0;
    for (std::size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos; ++pos) ++polylines;
    EXPECT_EQ(polylines, 3u);
    EXPECT_NE(svg.find("window index"), std::string::npos);
    EXPECT_NE(svg.find("grid deviation"), std::string::npos);
    EXPECT_NE(svg.find("viewBox"), std::string::npos);
}
