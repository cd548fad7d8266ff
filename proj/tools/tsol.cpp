// Command-line front end: solve, classify, verify-bounds, hyperbolic predict, mesh.
//
// Exit codes: 0 success, 2 bad flags or input, 3 numeric failure,
// 4 hypothesis violation or violated bound. Output files are written only
// on success.

#include "tsol/builder.hpp"
#include "tsol/classifier.hpp"
#include "tsol/expr.hpp"
#include "tsol/geometry.hpp"
#include "tsol/hyperbolic.hpp"
#include "tsol/integrator.hpp"
#include "tsol/io.hpp"
#include "tsol/singular_launcher.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <future>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

using namespace tsol;
using io::json;

namespace {

enum ExitCode { kOk = 0, kUsage = 2, kNumeric = 3, kHypothesis = 4 };

/// Numeric failure reported through the stop reason rather than an exception.
struct NumericStop : Error {
    using Error::Error;
};

/// Real-valued flag text: a constant expression (pi allowed) or +-inf.
double parse_real(const std::string& text, const std::string& flag) {
    if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    try {
        const expr::Expression e = expr::parse(text);
        if (!e.parameters().empty()) throw InputError("unknown identifier " + *e.parameters().begin());
        // s is NaN here, so any use of it trips the non-finite check
        return e.eval(expr::EvalContext{std::numeric_limits<double>::quiet_NaN(), {}});
    } catch (const EvalError&) {
        throw InputError(flag + ": '" + text + "' must be a constant");
    } catch (const InputError& e) {
        throw InputError(flag + ": " + e.what());
    }
}

Sign parse_sign(const std::string& text, const std::string& flag) {
    const double v = parse_real(text, flag);
    if (v == 1.0) return Sign::plus;
    if (v == -1.0) return Sign::minus;
    throw InputError(flag + " must be +1 or -1");
}

json real_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

/// Flags that were given, in declaration order, as strings.
json flags_of(const CLI::App* app) {
    json out = json::object();
    for (const CLI::Option* opt : app->get_options()) {
        if (opt->count() == 0 || opt->get_name() == "--help") continue;
        const std::vector<std::string>& r = opt->results();
        if (opt->get_type_size() == 0)
            out[opt->get_name()] = true;
        else if (r.size() == 1)
            out[opt->get_name()] = r.front();
        else
            out[opt->get_name()] = r;
    }
    return out;
}

// ---------------------------------------------------------------------------
// shared flag groups

struct GeometryFlags {
    std::string preset;
    int n = 2;
    std::string h;
    std::vector<std::string> domain;
    std::string x_expr;
    std::string z_expr;
};

void add_geometry_flags(CLI::App* sub, GeometryFlags& g, bool allow_expression = true) {
    CLI::Option* preset = sub->add_option("--preset", g.preset, "euclidean, horosphere, sphere or revolution")
                              ->check(CLI::IsMember({"euclidean", "horosphere", "sphere", "revolution"}));
    sub->add_option("--n", g.n, "dimension parameter")->check(CLI::Range(1, 1000));
    sub->add_option("--x", g.x_expr, "revolution profile x(s)");
    sub->add_option("--z", g.z_expr, "revolution profile z(s)");
    if (allow_expression) {
        CLI::Option* h = sub->add_option("--h", g.h, "orbit mean curvature h(s); may use n");
        CLI::Option* dom = sub->add_option("--domain", g.domain, "open interval A B (inf allowed)")->expected(2);
        preset->excludes(h);
        h->needs(dom);
        dom->needs(h);
    }
}

struct Geometry {
    GeometrySpec spec;
    std::vector<HypothesisReport> reports;
};

Geometry make_geometry(const GeometryFlags& f, SingularHints hints) {
    Geometry g;
    if (!f.preset.empty()) {
        PresetParams p;
        if (!f.x_expr.empty()) p.x_expr = f.x_expr;
        if (!f.z_expr.empty()) p.z_expr = f.z_expr;
        g.spec = make_preset(f.preset, f.n, p);
        return g;
    }
    if (f.h.empty()) throw InputError("give --preset or --h with --domain");
    ExpressionGeometry eg =
        from_expression(f.h, parse_real(f.domain.at(0), "--domain"), parse_real(f.domain.at(1), "--domain"), f.n, hints);
    g.spec = std::move(eg.geometry);
    g.reports = std::move(eg.reports);
    return g;
}

json geometry_json(const Geometry& g) {
    json j;
    j["name"] = g.spec.name;
    j["description"] = g.spec.description;
    j["n"] = g.spec.n;
    j["domain"] = json::array({real_or_null(g.spec.a), real_or_null(g.spec.b)});
    auto endpoint = [](const std::optional<SingularEndpointData>& e) -> json {
        if (!e) return nullptr;
        return json{{"location", e->location}, {"q_prime", e->q_prime}, {"h1", e->h1}};
    };
    j["left_singular"] = endpoint(g.spec.left_singular);
    j["right_singular"] = endpoint(g.spec.right_singular);
    return j;
}

struct ToleranceFlags {
    std::string rel_tol = "1e-10";
    std::string abs_tol = "1e-12";
    std::string w_max = "1e8";
    std::size_t max_steps = 10'000'000;
};

void add_tolerance_flags(CLI::App* sub, ToleranceFlags& t) {
    sub->add_option("--rel-tol", t.rel_tol, "relative tolerance");
    sub->add_option("--abs-tol", t.abs_tol, "absolute tolerance");
    sub->add_option("--w-max", t.w_max, "blow-up threshold on |w|");
    sub->add_option("--max-steps", t.max_steps, "step budget");
}

IntegratorConfig make_config(const ToleranceFlags& t) {
    IntegratorConfig c;
    c.rel_tol = parse_real(t.rel_tol, "--rel-tol");
    c.abs_tol = parse_real(t.abs_tol, "--abs-tol");
    c.w_max = parse_real(t.w_max, "--w-max");
    c.max_steps = t.max_steps;
    c.validate();
    return c;
}

json config_json(const IntegratorConfig& c) {
    return json{{"rel_tol", c.rel_tol}, {"abs_tol", c.abs_tol}, {"w_max", c.w_max}, {"max_steps", c.max_steps}};
}

// ---------------------------------------------------------------------------
// solve / classify

struct SolveFlags {
    GeometryFlags geom;
    ToleranceFlags tol;
    std::string eps = "1";
    std::string epst = "1";
    std::vector<std::string> interior;
    bool left = false;
    bool right = false;
    std::string target;
    std::string delta;
    std::string f1 = "0";
    std::size_t grid = 0;
    std::string out;
    std::string json_path;
    std::string svg;
    bool timing = false;
    std::string profile;  // classify only
};

void add_solve_flags(CLI::App* sub, SolveFlags& f, bool is_classify) {
    sub->add_option("--eps", f.eps, "sign of the vertical metric term (+1 or -1)");
    sub->add_option("--epst", f.epst, "sign eps_tilde (+1 or -1)");
    add_geometry_flags(sub, f.geom);
    auto* interior = sub->add_option("--start-interior", f.interior, "S0 W0 F0")->expected(3);
    auto* left = sub->add_flag("--start-left", f.left, "launch from the singular left endpoint");
    auto* right = sub->add_flag("--start-right", f.right, "launch from the singular right endpoint");
    interior->excludes(left)->excludes(right);
    left->excludes(right);
    sub->add_option("--target", f.target, "where to stop integrating");
    sub->add_option("--delta", f.delta, "seed offset for endpoint launches, or inset of an endpoint --target");
    sub->add_option("--f1", f.f1, "height at the launch endpoint");
    add_tolerance_flags(sub, f.tol);
    sub->add_option("--json", f.json_path, "run record (JSON)");
    if (is_classify) {
        auto* prof = sub->add_option("--profile", f.profile, "classify an existing s,w,f CSV instead of solving");
        prof->excludes(interior)->excludes(left)->excludes(right);
        return;
    }
    sub->add_option("--grid", f.grid, "resample to N uniform points")->check(CLI::Range(std::size_t{2}, std::size_t{100'000'000}));
    sub->add_option("--out", f.out, "profile CSV (stdout when absent)");
    sub->add_option("--svg", f.svg, "SVG chart of w and f");
    sub->add_flag("--record-timing", f.timing, "add wall-clock time to the run record");
}

struct SolveResult {
    Geometry geom;
    Signature sig;
    IntegratorConfig cfg;
    Trajectory traj;
    SolitonProfile profile;
    json start;
};

SolveResult run_solve(const SolveFlags& f) {
    SolveResult r;
    r.sig = Signature{parse_sign(f.eps, "--eps"), parse_sign(f.epst, "--epst")};
    r.cfg = make_config(f.tol);
    if (f.interior.empty() && !f.left && !f.right)
        throw InputError("choose --start-interior, --start-left or --start-right");
    r.geom = make_geometry(f.geom, SingularHints{f.left, f.right});
    const GeometrySpec& g = r.geom.spec;

    double f1 = 0.0;
    if (!f.interior.empty()) {
        const double s0 = parse_real(f.interior[0], "--start-interior");
        const double w0 = parse_real(f.interior[1], "--start-interior");
        f1 = parse_real(f.interior[2], "--start-interior");
        if (!g.contains(s0)) throw InputError("start point lies outside the domain");
        if (f.target.empty()) throw InputError("--start-interior needs --target");
        double target = parse_real(f.target, "--target");
        if (!(g.contains(target) || target == g.a || target == g.b) || !std::isfinite(target))
            throw InputError("--target must lie in the closed domain and be finite");
        // h is undefined on the boundary, so stop just short of it
        const double pull = f.delta.empty() ? 1e-9 : parse_real(f.delta, "--delta");
        if (!(pull > 0.0)) throw InputError("--delta must be positive");
        if (target == g.a) target += pull;
        if (target == g.b) target -= pull;
        if (!g.contains(target)) throw InputError("--delta is too large for the domain");
        r.traj = integrate(r.sig, g.h, s0, w0, f1, target, r.cfg);
        r.start = json{{"kind", "interior"}, {"s0", s0}, {"w0", w0}, {"f0", f1}};
    } else {
        f1 = parse_real(f.f1, "--f1");
        LaunchOptions opt;
        if (!f.delta.empty()) opt.delta = parse_real(f.delta, "--delta");
        if (!f.target.empty()) opt.s_target = parse_real(f.target, "--target");
        r.traj = f.left ? launch_left(g, r.sig, opt, r.cfg) : launch_right(g, r.sig, opt, r.cfg);
        r.start = json{{"kind", f.left ? "left" : "right"},
                       {"anchor_s", r.traj.anchor->s},
                       {"f1", f1},
                       {"delta", detail::resolve_delta(g, opt)}};
    }
    if (is_numeric_failure(r.traj.stop)) {
        std::string msg = std::string("integration stopped: ") + stop_name(r.traj.stop);
        if (const auto* e = std::get_if<stop::EvalError>(&r.traj.stop)) msg += " (" + e->message + ")";
        std::visit([&](const auto& v) {
            if constexpr (requires { v.s; }) msg += " at s = " + io::format_double(v.s);
        }, r.traj.stop);
        throw NumericStop(msg);
    }
    r.profile = build_profile(r.traj, f1, g, r.sig);
    return r;
}

json run_record(const std::string& command, const CLI::App* sub, const SolveResult& r) {
    json j;
    j["tool"] = "tsol";
    j["version"] = TSOL_VERSION;
    j["command"] = command;
    j["flags"] = flags_of(sub);
    j["geometry"] = geometry_json(r.geom);
    j["signature"] = json{{"eps", value(r.sig.epsilon)}, {"eps_tilde", value(r.sig.epsilon_tilde)}};
    j["config"] = config_json(r.cfg);
    j["start"] = r.start;
    json reports = json::array();
    for (const HypothesisReport& rep : r.geom.reports) reports.push_back(io::to_json(rep));
    j["hypothesis_reports"] = reports;
    j["stop"] = io::to_json(r.traj.stop);
    j["outcome"] = io::to_json(r.profile.outcome);
    j["samples"] = r.traj.samples.size();
    j["accepted_steps"] = r.traj.accepted_steps;
    j["rejected_steps"] = r.traj.rejected_steps;
    j["assumptions"] = r.geom.spec.assumptions;
    return j;
}

void seal(json& record) { record["reproducibility_hash"] = io::fnv1a_hex(record.dump()); }

int cmd_solve(const CLI::App* sub, const SolveFlags& f) {
    const auto t0 = std::chrono::steady_clock::now();
    const SolveResult r = run_solve(f);

    std::vector<ProfileState> rows = r.profile.trajectory.samples;
    if (f.grid > 0 && !rows.empty()) {
        std::vector<double> grid(f.grid);
        const double a = rows.front().s, b = rows.back().s;
        for (std::size_t i = 0; i < f.grid; ++i)
            grid[i] = i + 1 == f.grid ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(f.grid - 1);
        rows = resample(r.profile.trajectory, grid);
    }
    const std::string csv = io::profile_csv(rows);

    json record = run_record("solve", sub, r);
    record["rows"] = rows.size();
    record["csv_fnv1a"] = io::fnv1a_hex(csv);
    seal(record);
    if (f.timing)
        record["wall_clock_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    io::StagedFiles files;
    if (!f.out.empty()) files.stage(f.out, csv);
    if (!f.json_path.empty()) files.stage(f.json_path, io::dump(record));
    if (!f.svg.empty()) files.stage(f.svg, io::profile_svg(rows));
    files.commit();
    if (f.out.empty()) std::cout << csv;
    return kOk;
}

int cmd_classify(const CLI::App* sub, const SolveFlags& f) {
    json record;
    if (f.profile.empty()) {
        record = run_record("classify", sub, run_solve(f));
    } else {
        SolveResult r;
        r.sig = Signature{parse_sign(f.eps, "--eps"), parse_sign(f.epst, "--epst")};
        r.cfg = make_config(f.tol);
        r.geom = make_geometry(f.geom, {});
        const std::vector<ProfileState> rows = io::parse_profile_csv(io::read_file(f.profile));
        if (rows.empty()) throw InputError("profile CSV has no rows");
        Trajectory t;
        t.samples = rows;
        t.direction = rows.size() > 1 && rows[1].s < rows[0].s ? Direction::backward : Direction::forward;
        for (const ProfileState& p : rows) t.slopes.push_back(rhs_reduced(r.sig, r.geom.spec.h(p.s), p.w));
        if (std::fabs(rows.back().w) >= r.cfg.w_max)
            t.stop = stop::BlowUp{rows.back().s, sign_of(rows.back().w)};
        else
            t.stop = stop::ReachedEnd{rows.back().s};
        r.traj = t;
        r.profile = build_profile(t, rows.front().f, r.geom.spec, r.sig);
        r.start = json{{"kind", "profile"}, {"rows", rows.size()}};
        record = run_record("classify", sub, r);
    }
    seal(record);
    const std::string text = io::dump(record);
    io::StagedFiles files;
    if (!f.json_path.empty()) files.stage(f.json_path, text);
    files.commit();
    std::cout << text;
    return kOk;
}

// ---------------------------------------------------------------------------
// verify-bounds

struct BoundFlags {
    std::vector<std::string> cases;
    std::vector<std::string> lambdas;
    std::string c = "0";
    std::string h;
    std::string json_path;
    ToleranceFlags tol;
};

int cmd_verify_bounds(const CLI::App* sub, const BoundFlags& f) {
    const IntegratorConfig cfg = make_config(f.tol);
    const double c = parse_real(f.c, "--c");
    std::optional<expr::Expression> h_expr;
    if (!f.h.empty()) {
        h_expr = expr::parse(f.h);
        if (!h_expr->parameters().empty()) throw InputError("--h may only use s");
    }

    // validate everything before integrating anything
    std::vector<BoundCase> cases;
    for (const std::string& name : f.cases)
        for (const std::string& l : f.lambdas) cases.push_back(make_bound_case(parse_bound_id(name), parse_real(l, "--lambda"), c));

    struct Row {
        json j;
        bool holds = false;
        bool hypothesis_failed = false;
    };
    std::vector<std::future<Row>> jobs;
    for (const BoundCase& bc : cases) {
        jobs.push_back(std::async(std::launch::async, [bc, &h_expr, &cfg]() {
            Row row;
            HFunction h;
            std::string h_text;
            if (h_expr) {
                h = [e = *h_expr](double s) { return e(s); };
                h_text = h_expr->source();
            } else {
                const double v = default_witness(bc.id, bc.lambda);
                h = [v](double) { return v; };
                h_text = io::format_double(v);
            }
            try {
                const BoundVerification v = verify_bound(bc, h, cfg);
                row.j = io::to_json(v);
                row.holds = v.holds();
            } catch (const HypothesisError& e) {
                row.hypothesis_failed = true;
                row.j = json{{"case", std::string(bound_name(bc.id))}, {"lambda", bc.lambda}, {"c", bc.c},
                             {"bound_a", bc.bound_a}, {"s_star", nullptr}, {"margin", nullptr}, {"holds", false},
                             {"h_condition", bc.h_condition}, {"error", e.what()}};
            } catch (const NumericError& e) {
                row.j = json{{"case", std::string(bound_name(bc.id))}, {"lambda", bc.lambda}, {"c", bc.c},
                             {"bound_a", bc.bound_a}, {"s_star", nullptr}, {"margin", nullptr}, {"holds", false},
                             {"h_condition", bc.h_condition}, {"error", e.what()}};
            }
            row.j["h"] = h_text;
            return row;
        }));
    }

    json rows = json::array();
    json assumptions = json::array();
    bool all_hold = true;
    bool hypothesis_failed = false;
    for (auto& job : jobs) {
        Row row = job.get();
        all_hold = all_hold && row.holds;
        hypothesis_failed = hypothesis_failed || row.hypothesis_failed;
        if (row.j.contains("assumptions"))
            for (const auto& a : row.j["assumptions"])
                if (std::find(assumptions.begin(), assumptions.end(), a) == assumptions.end()) assumptions.push_back(a);
        rows.push_back(std::move(row.j));
    }

    json record;
    record["tool"] = "tsol";
    record["version"] = TSOL_VERSION;
    record["command"] = "verify-bounds";
    record["flags"] = flags_of(sub);
    record["config"] = config_json(cfg);
    record["rows"] = rows;
    record["all_hold"] = all_hold;
    record["assumptions"] = assumptions;
    seal(record);
    const std::string text = io::dump(record);
    // the table is the result even when a bound fails, so it is always written
    io::StagedFiles files;
    if (!f.json_path.empty()) files.stage(f.json_path, text);
    files.commit();
    std::cout << text;
    if (hypothesis_failed) std::cerr << "error: h violates the clause condition for at least one case\n";
    return all_hold ? kOk : kHypothesis;
}

// ---------------------------------------------------------------------------
// hyperbolic predict

struct PredictFlags {
    int n = 2;
    std::string s0 = "0";
    std::string f0;
    bool constant = false;
    std::string json_path;
};

int cmd_predict(const CLI::App* sub, const PredictFlags& f) {
    if (f.f0.empty() && !f.constant) throw InputError("give --f0 or --constant");
    const double s0 = parse_real(f.s0, "--s0");
    const double f0 = f.f0.empty() ? hyperbolic::equilibrium(f.n) : parse_real(f.f0, "--f0");
    json j = io::to_json(hyperbolic::predict(f.n, s0, f0, f.constant));
    json record;
    record["tool"] = "tsol";
    record["version"] = TSOL_VERSION;
    record["command"] = "hyperbolic predict";
    record["flags"] = flags_of(sub);
    for (auto& [k, v] : j.items()) record[k] = v;
    seal(record);
    const std::string text = io::dump(record);
    io::StagedFiles files;
    if (!f.json_path.empty()) files.stage(f.json_path, text);
    files.commit();
    std::cout << text;
    return kOk;
}

// ---------------------------------------------------------------------------
// mesh

struct MeshFlags {
    GeometryFlags geom;
    std::string profile;
    std::size_t angles = 64;
    std::size_t stride = 1;
    std::string out;
};

int cmd_mesh(const MeshFlags& f) {
    if (f.geom.preset == "revolution" && (f.geom.x_expr.empty() || f.geom.z_expr.empty()))
        throw HypothesisError("revolution preset has no embedding without --x and --z");
    const std::vector<ProfileState> rows = io::parse_profile_csv(io::read_file(f.profile));
    const Geometry g = make_geometry(f.geom, {});
    SolitonProfile p;
    p.geometry = g.spec.name;
    p.n = g.spec.n;
    p.trajectory.samples = rows;
    p.trajectory.slopes.assign(rows.size(), 0.0);
    for (const ProfileState& r : rows)
        if (!g.spec.contains(r.s)) throw InputError("profile s = " + io::format_double(r.s) + " outside the domain");
    const SurfaceMesh m = build_mesh(p, g.spec, f.angles, f.stride);
    io::StagedFiles files;
    files.stage(f.out, io::mesh_obj(m));
    files.commit();
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rotationally symmetric translating solitons: profile ODE toolkit"};
    // --h is the curvature flag, so help keeps only its long form
    app.set_help_flag("--help", "print this help and exit");
    app.set_version_flag("--version", std::string(TSOL_VERSION));
    app.require_subcommand(1);

    SolveFlags solve_flags;
    CLI::App* solve = app.add_subcommand("solve", "integrate a profile and write CSV/JSON/SVG");
    add_solve_flags(solve, solve_flags, false);

    SolveFlags classify_flags;
    CLI::App* classify_cmd = app.add_subcommand("classify", "report the fate of a profile as JSON");
    add_solve_flags(classify_cmd, classify_flags, true);

    BoundFlags bound_flags;
    CLI::App* bounds = app.add_subcommand("verify-bounds", "check blow-up bounds numerically");
    bounds->add_option("--case", bound_flags.cases, "B1 B2 C1 C2 D1 E1a E1b E2 E3")->required();
    bounds->add_option("--lambda", bound_flags.lambdas, "initial slope magnitude(s)")->required();
    bounds->add_option("--c", bound_flags.c, "initial parameter");
    bounds->add_option("--h", bound_flags.h, "h(s); default is a constant satisfying the clause");
    bounds->add_option("--json", bound_flags.json_path, "result table (JSON)");
    add_tolerance_flags(bounds, bound_flags.tol);

    PredictFlags predict_flags;
    CLI::App* hyper = app.add_subcommand("hyperbolic", "closed-form horosphere analysis");
    hyper->require_subcommand(1);
    CLI::App* predict_cmd = hyper->add_subcommand("predict", "classify initial data and predict the blow-up");
    predict_cmd->add_option("--n", predict_flags.n, "dimension")->required()->check(CLI::Range(2, 1000));
    predict_cmd->add_option("--s0", predict_flags.s0, "initial parameter");
    predict_cmd->add_option("--f0", predict_flags.f0, "initial slope");
    predict_cmd->add_flag("--constant", predict_flags.constant, "take f0 = -1/(n-1) exactly");
    predict_cmd->add_option("--json", predict_flags.json_path, "result (JSON)");

    MeshFlags mesh_flags;
    CLI::App* mesh = app.add_subcommand("mesh", "surface mesh (OBJ) from a profile CSV");
    mesh->add_option("--profile", mesh_flags.profile, "s,w,f CSV")->required();
    add_geometry_flags(mesh, mesh_flags.geom, false);
    mesh->get_option("--preset")->required();
    mesh->add_option("--angles", mesh_flags.angles, "points per ring");
    mesh->add_option("--stride", mesh_flags.stride, "use every k-th profile sample");
    mesh->add_option("--out", mesh_flags.out, "OBJ file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (solve->parsed()) return cmd_solve(solve, solve_flags);
        if (classify_cmd->parsed()) return cmd_classify(classify_cmd, classify_flags);
        if (bounds->parsed()) return cmd_verify_bounds(bounds, bound_flags);
        if (predict_cmd->parsed()) return cmd_predict(predict_cmd, predict_flags);
        if (mesh->parsed()) return cmd_mesh(mesh_flags);
    } catch (const HypothesisError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kHypothesis;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const NumericStop& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumeric;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumeric;
    } catch (const EvalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumeric;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
