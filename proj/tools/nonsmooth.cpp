// nonsmooth: certificates, blow-up traces and orbit queries from the command line.
//
// Exit codes: 0 success, 1 negative verdict or domain error, 2 usage or spec error,
// 3 I/O error, 64 unknown subcommand.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "nonsmooth/report.hpp"

namespace ns = nonsmooth;

namespace {

constexpr int kOk = 0, kNegative = 1, kUsage = 2, kIo = 3, kUnknownCommand = 64;

struct IoFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_output(const std::optional<std::string>& path, const std::string& text) {
    if (!path) {
        std::cout << text;
        return;
    }
    std::ofstream out(*path, std::ios::binary);
    if (!out) throw IoFailure("cannot open " + *path + " for writing");
    out << text;
    if (!out.flush()) throw IoFailure("write to " + *path + " failed");
}

std::string read_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Splits "a,[a,b]^2" at commas that are not inside brackets or parentheses.
std::vector<std::string> split_words(const std::string& s) {
    std::vector<std::string> out(1);
    int depth = 0;
    for (char c : s) {
        if (c == '[' || c == '(') ++depth;
        if (c == ']' || c == ')') --depth;
        if (c == ',' && depth == 0) out.emplace_back();
        else out.back() += c;
    }
    return out;
}

// Domain errors from the library map to exit 1; malformed input maps to exit 2.
int exit_code_for(const ns::Error& e) {
    switch (e.code()) {
        case ns::ErrorCode::Parse:
        case ns::ErrorCode::InvalidArgument:
            return kUsage;
        default:
            return kNegative;
    }
}

int verdict_exit(const ns::io::Json& report) { return report.at("verdict") == "invalid" ? kNegative : kOk; }

struct Options {
    // certify
    std::string target;
    long long depth = -2;
    long long truncation = -2;
    long long cap = 64;
    // renorm
    std::string action = "punctured-torus";
    ns::RenormOptions renorm;
    std::string radius = "2", enlargement = "3";
    // orbit / order
    std::string word = "[a,b]";
    std::string words;
    std::string point = "pt";
    std::size_t count = 5;
    bool images = false;
    bool no_timestamp = false;
    // io
    std::optional<std::string> out;
    std::string in;
};

int run_certify(const Options& o) {
    ns::io::Json payload;
    if (o.target == "punctured-torus") {
        if (o.depth < 0) throw CLI::ValidationError("--depth", "punctured-torus needs --depth N with N >= 0");
        payload = ns::torus_payload(static_cast<std::size_t>(o.depth));
    } else {
        if (o.truncation < 0) throw CLI::ValidationError("--truncation", "zz needs --truncation N with N >= 0");
        if (o.cap < 1) throw CLI::ValidationError("--cap", "--cap must be >= 1");
        payload = ns::zz_payload(static_cast<long>(o.truncation), o.cap);
    }
    const ns::io::Json report = ns::wrap_report(payload, !o.no_timestamp);
    write_output(o.out, report.dump(2) + "\n");
    std::cerr << "verdict: " << report.at("verdict").get<std::string>() << "\n";
    return verdict_exit(report);
}

int run_renorm(const Options& o) {
    const ns::ActionSpec spec = ns::ActionSpec::parse(o.action);
    ns::RenormOptions opt = o.renorm;
    opt.radius = ns::Rat::parse(o.radius);
    opt.enlargement = ns::Rat::parse(o.enlargement);
    if (opt.radius.sign() <= 0) throw CLI::ValidationError("--radius", "must be positive");
    write_output(o.out, ns::to_csv(ns::run_renorm(spec, opt)));
    return kOk;
}

int run_plot(const Options& o) {
    std::istringstream in(read_input(o.in));
    write_output(o.out, ns::render_svg(ns::read_trace(in)));
    return kOk;
}

int run_orbit(const Options& o) {
    const ns::ActionSpec spec = ns::ActionSpec::parse(o.action);
    const ns::Word w = ns::Word::parse(o.word);
    const ns::ResolvedAction act = ns::resolve(spec);
    std::ostringstream os;
    if (const auto* t = std::get_if<ns::TorusAction>(&act)) {
        const auto orbit = ns::orbit_sequence(t->action, w, ns::CoverPoint::parse(o.point), o.count);
        for (std::size_t k = 0; k < orbit.size(); ++k)
            os << k << "\t" << orbit[k].base.str() << "\t" << orbit[k].sheet.str() << "\n";
    } else if (const auto* a = std::get_if<ns::IntervalAction>(&act)) {
        if (w.max_generator() >= static_cast<int>(a->rank()))
            throw ns::Error(ns::ErrorCode::Parse, "word uses a generator the action does not have");
        const auto orbit = ns::orbit_sequence(*a, w, ns::Rat::parse(o.point), o.count);
        for (std::size_t k = 0; k < orbit.size(); ++k) os << k << "\t" << orbit[k].str() << "\n";
    } else {
        throw ns::Error(ns::ErrorCode::Parse, "orbit needs a group action, not a germ");
    }
    write_output(o.out, os.str());
    return kOk;
}

int run_order(const Options& o) {
    const ns::ActionSpec spec = ns::ActionSpec::parse(o.action);
    const auto parts = split_words(o.words);
    if (parts.size() != 2) throw CLI::ValidationError("--words", "expected exactly two comma-separated words");
    const ns::Word w1 = ns::Word::parse(parts[0]), w2 = ns::Word::parse(parts[1]);
    const ns::ResolvedAction act = ns::resolve(spec);
    std::ostringstream os;
    if (const auto* t = std::get_if<ns::TorusAction>(&act)) {
        const auto r = ns::order_cmp(t->action, w1, w2, ns::CoverPoint::parse(o.point));
        os << ns::to_string(r.ordering);
        if (o.images) os << "\t" << r.lhs.str() << "\t" << r.rhs.str();
    } else if (const auto* a = std::get_if<ns::IntervalAction>(&act)) {
        const int top = std::max(w1.max_generator(), w2.max_generator());
        if (top >= static_cast<int>(a->rank()))
            throw ns::Error(ns::ErrorCode::Parse, "word uses a generator the action does not have");
        const auto r = ns::order_cmp(*a, w1, w2, ns::Rat::parse(o.point));
        os << ns::to_string(r.ordering);
        if (o.images) os << "\t" << r.lhs.str() << "\t" << r.rhs.str();
    } else {
        throw ns::Error(ns::ErrorCode::Parse, "order needs a group action, not a germ");
    }
    write_output(o.out, os.str() + "\n");
    return kOk;
}

int run_verify(const Options& o) {
    ns::io::Json report;
    try {
        report = ns::io::Json::parse(read_input(o.in));
    } catch (const ns::io::Json::parse_error& e) {
        throw ns::Error(ns::ErrorCode::Parse, std::string("report is not valid JSON: ") + e.what());
    }
    bool ok = false;
    try {
        ok = ns::revalidate_report(report);
    } catch (const ns::io::Json::exception& e) {
        throw ns::Error(ns::ErrorCode::Parse, std::string("malformed report: ") + e.what());
    }
    std::cout << (ok ? "ok" : "mismatch") << "\t" << report.value("verdict", "?") << "\n";
    return ok ? verdict_exit(report) : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact certificates for nonsmoothable group actions on the interval", "nonsmooth"};
    app.require_subcommand(1);
    Options o;

    auto* certify = app.add_subcommand("certify", "Build a certificate report (JSON)");
    certify->add_option("target", o.target, "punctured-torus or zz")
        ->required()
        ->check(CLI::IsMember({"punctured-torus", "zz"}));
    certify->add_option("--depth", o.depth, "Domination depth (punctured-torus)");
    certify->add_option("--truncation", o.truncation, "Truncation radius N for |i| <= N (zz)");
    certify->add_option("--cap", o.cap, "Search cap for n_i (zz)")->capture_default_str();
    certify->add_flag("--no-timestamp", o.no_timestamp, "Leave the header empty");
    certify->add_option("--out", o.out, "Output path (default: stdout)");

    auto* renorm = app.add_subcommand("renorm", "Blow-up window statistics (CSV)");
    renorm->add_option("--action", o.action, "Action name or inline JSON spec")->capture_default_str();
    renorm->add_option("--sequence", o.renorm.sequence,
                       "reciprocal, dyadic, deck, midpoints or anchors-left (default depends on action)");
    renorm->add_option("--start", o.renorm.start, "First sequence index");
    renorm->add_option("--windows", o.renorm.windows, "Number of windows")->capture_default_str();
    renorm->add_option("--grid", o.renorm.grid, "Grid resolution")->capture_default_str();
    renorm->add_option("--radius", o.radius, "Deviation radius (rational)")->capture_default_str();
    renorm->add_option("--enlargement", o.enlargement, "V_i enlargement factor (rational)")->capture_default_str();
    renorm->add_option("--cap", o.renorm.cap, "Search cap for the zz witness")->capture_default_str();
    renorm->add_option("--out", o.out, "Output path (default: stdout)");

    auto* plot = app.add_subcommand("plot", "Plot a renorm CSV as SVG");
    plot->add_option("--in", o.in, "CSV trace")->required();
    plot->add_option("--out", o.out, "Output path (default: stdout)");

    auto* orbit = app.add_subcommand("orbit", "Print x, w(x), ..., w^n(x)");
    orbit->add_option("--action", o.action, "Action name or inline JSON spec")->capture_default_str();
    orbit->add_option("--word", o.word, "Word")->capture_default_str();
    orbit->add_option("--point", o.point, "Start point (\"pt\", \"t@sheet\" or a rational)")->capture_default_str();
    orbit->add_option("--count", o.count, "Number of steps")->capture_default_str();
    orbit->add_option("--out", o.out, "Output path (default: stdout)");

    auto* order = app.add_subcommand("order", "Compare w1(x) with w2(x)");
    order->add_option("--action", o.action, "Action name or inline JSON spec")->capture_default_str();
    order->add_option("--point", o.point, "Base point")->capture_default_str();
    order->add_option("--words", o.words, "Two words, comma separated")->required();
    order->add_flag("--images", o.images, "Also print both images");
    order->add_option("--out", o.out, "Output path (default: stdout)");

    auto* verify = app.add_subcommand("verify", "Re-derive a report and compare");
    verify->add_option("report", o.in, "Report JSON")->required();

    if (argc > 1 && argv[1][0] != '-') {
        static const std::set<std::string> known{"certify", "renorm", "plot", "orbit", "order", "verify"};
        if (!known.count(argv[1])) {
            std::cerr << "unknown subcommand '" << argv[1] << "'\n\n" << app.help();
            return kUnknownCommand;
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*certify) return run_certify(o);
        if (*renorm) return run_renorm(o);
        if (*plot) return run_plot(o);
        if (*orbit) return run_orbit(o);
        if (*order) return run_order(o);
        if (*verify) return run_verify(o);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const IoFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    } catch (const ns::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return kUsage;
}
