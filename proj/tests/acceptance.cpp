// Acceptance criteria 1-10. One PASS/FAIL line per criterion; the exit code
// is the number of failures.
//
// usage: acceptance <path to tsol> <scratch dir>

#include "tsol/builder.hpp"
#include "tsol/classifier.hpp"
#include "tsol/hyperbolic.hpp"
#include "tsol/io.hpp"
#include "tsol/singular_launcher.hpp"

#include "oracles.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace tsol;
namespace fs = std::filesystem;

namespace {

constexpr Signature kPP{Sign::plus, Sign::plus};
constexpr double kHalfPi = std::numbers::pi / 2;

struct Check {
    bool ok = true;
    std::string detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double max_abs_w_error(const Trajectory& t, double value) {
    double worst = 0.0;
    for (const ProfileState& p : t.samples) worst = std::max(worst, std::fabs(p.w - value));
    return worst;
}

// 1: axis slope of the bowl is 1/n
Check paraboloid_slope() {
    Check c;
    for (int n : {2, 3, 4, 5}) {
        const GeometrySpec g = make_preset("euclidean", n);
        const Trajectory t = launch_left(g, kPP, {.delta = {}, .s_target = 1.0});
        const double measured = endpoint_slope(t, 0.0, Side::left, 1e-5);
        const double shot = oracle::bowl_axis_slope(n);
        c.expect(std::fabs(measured - 1.0 / n) < 1e-4, "n=" + std::to_string(n) + " launcher slope " + num(measured));
        c.expect(std::fabs(shot - 1.0 / n) < 1e-4, "n=" + std::to_string(n) + " shooting slope " + num(shot));
        c.expect(std::fabs(measured - shot) < 1e-4, "n=" + std::to_string(n) + " launcher vs shooting");
    }
    return c;
}

// 2: the constant horosphere solution stays put
Check horosphere_constant() {
    Check c;
    for (int n : {2, 3, 4}) {
        const GeometrySpec g = make_preset("horosphere", n);
        const double w0 = -1.0 / (n - 1);
        const Trajectory t = integrate(kPP, g.h, 0.0, w0, 0.0, 10.0);
        c.expect(std::holds_alternative<stop::ReachedEnd>(t.stop), "n=" + std::to_string(n) + " did not reach 10");
        const double err = max_abs_w_error(t, w0);
        c.expect(err < 1e-10, "n=" + std::to_string(n) + " drift " + num(err));
    }
    return c;
}

// 3: F(w(s)) - s is constant along horosphere trajectories
Check first_integral() {
    Check c;
    double worst = 0.0;
    for (int n : {2, 3, 4}) {
        const GeometrySpec g = make_preset("horosphere", n);
        for (double w0 : {-4.0, -2.0, -0.2, 0.0, 0.5, 2.0}) {
            const Trajectory t = integrate(kPP, g.h, 0.0, w0, 0.0, 5.0);
            const double c0 = hyperbolic::first_integral(w0, n);
            for (const ProfileState& p : t.samples)
                worst = std::max(worst, std::fabs(hyperbolic::first_integral(p.w, n) - p.s - c0));
        }
    }
    c.expect(worst < 1e-8, "max deviation " + num(worst));
    if (c.ok) c.detail = "max deviation " + num(worst);
    return c;
}

// 4: blow-up at pi/4 for n=2 from (0, 0)
Check blowup_location() {
    Check c;
    const GeometrySpec g = make_preset("horosphere", 2);
    const Trajectory t = integrate(kPP, g.h, 0.0, 0.0, 0.0, 2.0);
    const auto* b = std::get_if<stop::BlowUp>(&t.stop);
    c.expect(b != nullptr, std::string("integrator stop ") + stop_name(t.stop));
    if (b) c.expect(std::fabs(b->s_star - std::numbers::pi / 4) < 1e-4, "integrator s_star " + num(b->s_star));
    const hyperbolic::HyperbolicCase pc = hyperbolic::predict(2, 0.0, 0.0);
    c.expect(pc.K.has_value() && std::fabs(*pc.K - std::numbers::pi / 4) < 1e-12, "predicted K off");
    return c;
}

// 5: bound suite on the lambda grids with constant witnesses
Check bound_suite() {
    Check c;
    double worst = INFINITY;
    for (BoundId id : kVerifiableBounds) {
        const bool coth = id == BoundId::B1 || id == BoundId::B2 || id == BoundId::E2 || id == BoundId::E3;
        const std::vector<double> grid = coth ? std::vector{1.5, 2.0, 4.0, 8.0} : std::vector{0.5, 1.0, 2.0, 4.0};
        for (double lambda : grid) {
            const double hv = default_witness(id, lambda);
            const BoundVerification v =
                verify_bound(make_bound_case(id, lambda, 0.0), [hv](double) { return hv; });
            worst = std::min(worst, v.margin);
            c.expect(v.margin >= -1e-6, std::string(bound_name(id)) + " lambda " + num(lambda) + " margin " + num(v.margin));
            if (id == BoundId::B1) {
                c.expect(hv == 0.0, "B1 witness is not h = 0");
                c.expect(std::fabs(v.margin) < 1e-6, "B1 sharp case margin " + num(v.margin));
                c.expect(std::fabs(v.s_star - oracle::coth_blowup(lambda)) < 1e-6, "B1 s_star vs closed form");
            }
        }
    }
    if (c.ok) c.detail = "smallest margin " + num(worst);
    return c;
}

// 6: h w -> 1 along the bowl
Check asymptotics() {
    Check c;
    for (auto [n, s_end] : {std::pair{2, 100.0}, std::pair{5, 200.0}}) {
        const GeometrySpec g = make_preset("euclidean", n);
        const Trajectory t = launch_left(g, kPP, {.delta = {}, .s_target = s_end});
        c.expect(std::holds_alternative<stop::ReachedEnd>(t.stop), "n=" + std::to_string(n) + " stopped early");
        const double r = asymptotic_ratio(t, g.h);
        c.expect(std::fabs(r - 1.0) < 0.02, "n=" + std::to_string(n) + " h*w = " + num(r));
        c.detail += (c.detail.empty() ? "" : ", ") + ("n=" + std::to_string(n) + " h*w=" + num(r));
    }
    return c;
}

// 7: sphere endpoint slope against (n-1)/n, and interior starts crossing the
// whole open interval
Check sphere() {
    Check c;
    for (int n : {2, 3}) {
        const GeometrySpec g = make_preset("sphere", n);
        const Trajectory t = launch_right(g, kPP, {});
        const double delta = detail::resolve_delta(g, {});
        const double slope = endpoint_slope(t, kHalfPi, Side::right, delta);
        const double expected = (n - 1.0) / n;
        c.expect(std::fabs(slope - expected) < 1e-3,
                 "n=" + std::to_string(n) + " endpoint slope " + num(slope) + " vs " + num(expected));
    }
    const std::string slope_part = c.detail;
    c.detail.clear();
    const double delta = 1e-6;
    for (int n : {2, 3})
        for (double w0 : {-3.0, -0.5, 0.0, 0.5, 3.0}) {
            const GeometrySpec g = make_preset("sphere", n);
            const Trajectory fwd = integrate(kPP, g.h, 0.0, w0, 0.0, kHalfPi - delta);
            const Trajectory bwd = integrate(kPP, g.h, 0.0, w0, 0.0, -kHalfPi + delta);
            const std::string tag = "n=" + std::to_string(n) + " w0=" + num(w0);
            c.expect(std::holds_alternative<stop::ReachedEnd>(fwd.stop), tag + " forward " + stop_name(fwd.stop));
            c.expect(std::holds_alternative<stop::ReachedEnd>(bwd.stop), tag + " backward " + stop_name(bwd.stop));
        }
    const std::string interior = c.detail.empty() ? "interior starts cross the interval" : c.detail;
    c.detail = slope_part.empty() ? interior : slope_part + "; " + interior;
    return c;
}

// 8: |w| < 1 is invariant for eps = 1, eps_tilde = -1
Check barrier() {
    Check c;
    const Signature sig{Sign::plus, Sign::minus};
    PresetParams cone;
    cone.x_expr = "0.6*s";
    cone.z_expr = "0.8*s";
    struct Piece {
        GeometrySpec g;
        double a, b;
    };
    const std::vector<Piece> pieces{{make_preset("euclidean", 2), 0.5, 5.0},
                                    {make_preset("euclidean", 4), 0.2, 3.0},
                                    {make_preset("horosphere", 3), -2.0, 2.0},
                                    {make_preset("sphere", 2), -1.2, 1.2},
                                    {make_preset("sphere", 3), -1.5, 1.5},
                                    {make_preset("revolution", 2, cone), 0.5, 3.0}};
    double worst = 0.0;
    for (const Piece& p : pieces)
        for (double w0 : {-0.9, 0.0, 0.9}) {
            const Trajectory t = integrate(sig, p.g.h, p.a, w0, 0.0, p.b);
            c.expect(std::holds_alternative<stop::ReachedEnd>(t.stop),
                     p.g.description + " w0=" + num(w0) + " " + stop_name(t.stop));
            for (const ProfileState& s : t.samples) worst = std::max(worst, std::fabs(s.w));
        }
    c.expect(worst < 1.0 + 1e-9, "max |w| " + num(worst));
    if (c.ok) c.detail = "max |w| " + num(worst);
    return c;
}

// 9: built bowls satisfy the rotational soliton equation
Check residual() {
    Check c;
    double worst = 0.0;
    for (int n : {2, 3}) {
        const GeometrySpec g = make_preset("euclidean", n);
        const SolitonProfile p = build_profile(launch_left(g, kPP, {.delta = {}, .s_target = 20.0}), 0.0, g, kPP);
        for (double s = 0.01; s < 20.0; s += 0.0137)
            worst = std::max(worst, std::fabs(mean_curvature_residual(p.trajectory, n, s)));
    }
    c.expect(worst < 1e-9, "max residual " + num(worst));
    if (c.ok) c.detail = "max residual " + num(worst);
    return c;
}

// 10: repeated CLI runs are byte-identical and the outputs are well formed

int run(const std::string& cmd) {
    const int rc = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

void check_csv(Check& c, const std::string& text, const std::string& tag) {
    c.expect(text.rfind("s,w,f\n", 0) == 0, tag + " header");
    c.expect(text.find('\r') == std::string::npos, tag + " has CR");
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    std::size_t rows = 0;
    double prev = NAN;
    int direction = 0;
    while (std::getline(in, line)) {
        ++rows;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
        if (cells.size() != 3) {
            c.expect(false, tag + " row " + std::to_string(rows) + " has " + std::to_string(cells.size()) + " fields");
            return;
        }
        for (const std::string& cell : cells) {
            try {
                const double v = io::parse_double(cell);
                // shortest round trip means re-formatting gives the same text
                c.expect(io::format_double(v) == cell, tag + " non-canonical number " + cell);
            } catch (const Error&) {
                c.expect(false, tag + " bad number " + cell);
                return;
            }
        }
        const double s = io::parse_double(cells[0]);
        if (!std::isnan(prev)) {
            const int d = s > prev ? 1 : -1;
            c.expect(s != prev && (direction == 0 || d == direction), tag + " s not strictly monotone");
            direction = d;
        }
        prev = s;
    }
    c.expect(rows >= 2, tag + " too few rows");
}

void check_json(Check& c, const std::string& text, const std::string& tag) {
    io::json j;
    try {
        j = io::json::parse(text);
    } catch (const std::exception& e) {
        c.expect(false, tag + " invalid JSON");
        return;
    }
    c.expect(j.is_object(), tag + " not an object");
    for (const char* key : {"tool", "version", "command", "flags", "geometry", "signature", "config", "start",
                            "stop", "outcome", "assumptions", "reproducibility_hash"})
        c.expect(j.contains(key), tag + " missing " + key);
    if (!c.ok) return;
    c.expect(j["assumptions"].is_array(), tag + " assumptions not an array");
    c.expect(j["outcome"].contains("kind"), tag + " outcome without kind");
    c.expect(!j.contains("wall_clock_seconds"), tag + " timing inside a deterministic record");
    // the hash covers everything except itself
    io::json body = j;
    body.erase("reproducibility_hash");
    c.expect(io::fnv1a_hex(body.dump()) == j["reproducibility_hash"], tag + " hash mismatch");
}

void check_obj(Check& c, const std::string& text, std::size_t expected_vertices) {
    std::istringstream in(text);
    std::size_t vertices = 0, faces = 0;
    std::vector<std::string> face_lines;
    for (std::string line; std::getline(in, line);) {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "v") {
            std::vector<double> xs;
            for (double x; ls >> x;) xs.push_back(x);
            c.expect(xs.size() == 3 || xs.size() == 6, "OBJ vertex with " + std::to_string(xs.size()) + " numbers");
            ++vertices;
        } else if (tag == "f") {
            face_lines.push_back(line);
            ++faces;
        } else if (!tag.empty() && tag[0] != '#') {
            c.expect(false, "OBJ unknown record " + tag);
        }
    }
    for (const std::string& line : face_lines) {
        std::istringstream ls(line.substr(2));
        std::size_t k = 0;
        for (long idx; ls >> idx; ++k) c.expect(idx >= 1 && static_cast<std::size_t>(idx) <= vertices, "OBJ index out of range");
        c.expect(k == 3 || k == 4, "OBJ face arity " + std::to_string(k));
    }
    c.expect(vertices == expected_vertices, "OBJ has " + std::to_string(vertices) + " vertices");
    c.expect(faces > 0, "OBJ has no faces");
}

Check determinism(const std::string& tsol, const fs::path& work) {
    Check c;
    fs::remove_all(work);
    fs::create_directories(work);
    const fs::path csv = work / "bowl.csv", json = work / "bowl.json", obj = work / "bowl.obj";
    const fs::path sphere_json = work / "sphere.json";

    const std::string solve = quote(tsol) + " solve --eps 1 --epst 1 --preset euclidean --n 2 --start-left --target 10" +
                              " --grid 100 --out " + quote(csv) + " --json " + quote(json);
    std::string first_csv, first_json;
    for (int round = 0; round < 2; ++round) {
        const int rc = run(solve);
        c.expect(rc == 0, "solve exit " + std::to_string(rc));
        if (rc != 0) return c;
        const std::string a = io::read_file(csv), b = io::read_file(json);
        if (round == 0) {
            first_csv = a;
            first_json = b;
        } else {
            c.expect(a == first_csv, "CSV differs between runs");
            c.expect(b == first_json, "JSON differs between runs");
        }
    }
    check_csv(c, first_csv, "CSV");
    check_json(c, first_json, "run record");

    // the sphere sign convention must be recorded when the sphere is used
    const int rc_s = run(quote(tsol) + " solve --preset sphere --n 2 --start-interior 0 0.5 0 --target 1 --json " +
                         quote(sphere_json) + " --out " + quote(work / "sphere.csv"));
    c.expect(rc_s == 0, "sphere solve exit " + std::to_string(rc_s));
    if (rc_s == 0) {
        const std::string text = io::read_file(sphere_json);
        check_json(c, text, "sphere record");
        const io::json j = io::json::parse(text);
        c.expect(j["assumptions"].size() == 1 && j["assumptions"][0] == assumption::sphere_sign,
                 "sphere assumption missing");
    }

    const int rc_m = run(quote(tsol) + " mesh --profile " + quote(csv) + " --preset euclidean --n 2 --angles 64 --out " +
                         quote(obj));
    c.expect(rc_m == 0, "mesh exit " + std::to_string(rc_m));
    if (rc_m == 0) check_obj(c, io::read_file(obj), 6400);

    // failures leave no files behind
    const fs::path none = work / "none.csv";
    const int rc_f = run(quote(tsol) + " solve --preset euclidean --n 2 --start-right --out " + quote(none));
    c.expect(rc_f == 4, "hypothesis failure exit " + std::to_string(rc_f));
    c.expect(!fs::exists(none), "output written on failure");
    return c;
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::fprintf(stderr, "usage: acceptance <tsol> <scratch dir>\n");
        return 2;
    }
    const std::string tsol = argv[1];
    const fs::path work = argv[2];

    const std::vector<std::pair<const char*, std::function<Check()>>> criteria{
        {"paraboloid axis slope 1/n", paraboloid_slope},
        {"horosphere constant solution", horosphere_constant},
        {"first integral conservation", first_integral},
        {"horosphere blow-up at pi/4", blowup_location},
        {"blow-up bound suite", bound_suite},
        {"bowl asymptotics h*w -> 1", asymptotics},
        {"sphere endpoint slope and interior extension", sphere},
        {"barrier |w| < 1", barrier},
        {"soliton equation residual", residual},
        {"determinism and formats", [&] { return determinism(tsol, work); }},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check c;
        try {
            c = criteria[i].second();
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail = std::string("exception: ") + e.what();
        }
        failures += c.ok ? 0 : 1;
        std::printf("criterion %2zu %s: %s%s%s\n", i + 1, c.ok ? "PASS" : "FAIL", criteria[i].first,
                    c.detail.empty() ? "" : " -- ", c.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures;
}
