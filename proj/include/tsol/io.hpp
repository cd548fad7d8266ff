#pragma once

/// File formats: profile CSV (s,w,f), Wavefront OBJ meshes, SVG charts and the
/// JSON forms of outcomes and stop reasons. Everything is written with LF line
/// endings and locale-independent number formatting.

#include "tsol/builder.hpp"
#include "tsol/classifier.hpp"
#include "tsol/errors.hpp"
#include "tsol/hyperbolic.hpp"
#include "tsol/integrator.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <locale>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <variant>
#include <vector>

namespace tsol::io {

using json = nlohmann::ordered_json;

/// Shortest round-trip decimal form (at most 17 significant digits).
inline std::string format_double(double v) {
    if (!std::isfinite(v)) throw InputError("cannot format a non-finite number");
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty())
        throw InputError("not a number: '" + std::string(text) + "'");
    return v;
}

// ---------------------------------------------------------------------------
// CSV

inline std::string profile_csv(const std::vector<ProfileState>& rows) {
    std::string out = "s,w,f\n";
    for (const ProfileState& p : rows) {
        out += format_double(p.s);
        out += ',';
        out += format_double(p.w);
        out += ',';
        out += format_double(p.f);
        out += '\n';
    }
    return out;
}

inline std::vector<ProfileState> parse_profile_csv(std::string_view text) {
    std::vector<ProfileState> rows;
    std::size_t line_no = 0;
    bool header = false;
    while (!text.empty()) {
        const std::size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (!header) {
            if (line != "s,w,f") throw InputError("profile CSV must start with the header s,w,f");
            header = true;
            continue;
        }
        std::array<double, 3> v{};
        std::size_t field = 0;
        while (true) {
            const std::size_t comma = line.find(',');
            if (field >= 3) throw InputError("too many fields on line " + std::to_string(line_no));
            try {
                v[field++] = parse_double(line.substr(0, comma));
            } catch (const InputError& e) {
                throw InputError(std::string(e.what()) + " on line " + std::to_string(line_no));
            }
            if (comma == std::string_view::npos) break;
            line = line.substr(comma + 1);
        }
        if (field != 3) throw InputError("expected 3 fields on line " + std::to_string(line_no));
        if (!rows.empty() && !(v[0] != rows.back().s))
            throw InputError("repeated s value on line " + std::to_string(line_no));
        rows.push_back(ProfileState{v[0], v[1], v[2]});
    }
    if (!header) throw InputError("profile CSV is empty");
    for (std::size_t i = 2; i < rows.size(); ++i)
        if ((rows[i].s - rows[i - 1].s) * (rows[1].s - rows[0].s) <= 0.0)
            throw InputError("s values in the profile CSV are not monotone");
    return rows;
}

// ---------------------------------------------------------------------------
// OBJ

/// `v x y z` per vertex (a fourth coordinate is written as a grey vertex
/// colour, scaled to [0, 1] over the mesh), then `f i j k l` with 1-based
/// indices.
inline std::string mesh_obj(const SurfaceMesh& m) {
    if (m.dim != 3 && m.dim != 4) throw InputError("OBJ export supports 3 or 4 coordinates per vertex");
    std::string out;
    double lo = 0.0, hi = 0.0;
    if (m.dim == 4) {
        lo = std::numeric_limits<double>::infinity();
        hi = -lo;
        for (std::size_t i = 0; i < m.vertex_count(); ++i) {
            lo = std::min(lo, m.vertex(i)[3]);
            hi = std::max(hi, m.vertex(i)[3]);
        }
    }
    for (std::size_t i = 0; i < m.vertex_count(); ++i) {
        const double* v = m.vertex(i);
        out += "v " + format_double(v[0]) + ' ' + format_double(v[1]) + ' ' + format_double(v[2]);
        if (m.dim == 4) {
            const std::string g = format_double(hi > lo ? (v[3] - lo) / (hi - lo) : 0.5);
            out += ' ' + g + ' ' + g + ' ' + g;
        }
        out += '\n';
    }
    for (const auto& q : m.quads) {
        out += 'f';
        for (std::size_t idx : q) out += ' ' + std::to_string(idx + 1);
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// SVG

namespace detail {

inline std::string polyline(const std::vector<std::pair<double, double>>& pts, double x0, double y0, double w,
                            double h, const char* colour) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (const auto& [x, y] : pts) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
    const double sx = xmax > xmin ? w / (xmax - xmin) : 0.0;
    const double sy = ymax > ymin ? h / (ymax - ymin) : 0.0;
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(6);
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1\" points=\"";
    for (const auto& [x, y] : pts) os << x0 + (x - xmin) * sx << ',' << y0 + h - (y - ymin) * sy << ' ';
    os << "\"/>\n";
    return os.str();
}

} // namespace detail

/// Two stacked panels, w(s) on top and f(s) below.
inline std::string profile_svg(const std::vector<ProfileState>& rows) {
    std::vector<std::pair<double, double>> ws, fs;
    for (const ProfileState& p : rows) {
        ws.emplace_back(p.s, p.w);
        fs.emplace_back(p.s, p.f);
    }
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" viewBox=\"0 0 640 480\">\n";
    out += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
    out += "<text x=\"10\" y=\"20\" font-size=\"12\">w(s)</text>\n";
    out += "<text x=\"10\" y=\"260\" font-size=\"12\">f(s)</text>\n";
    if (!rows.empty()) {
        out += detail::polyline(ws, 40, 20, 580, 200, "#1f4e9c");
        out += detail::polyline(fs, 40, 260, 580, 200, "#9c331f");
    }
    out += "</svg>\n";
    return out;
}

// ---------------------------------------------------------------------------
// JSON

inline json to_json(const StopReason& r) {
    json j;
    j["kind"] = stop_name(r);
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, stop::ReachedEnd>) {
                j["s_end"] = v.s_end;
            } else if constexpr (std::is_same_v<T, stop::BlowUp>) {
                j["s_star"] = v.s_star;
                j["sign"] = value(v.sign);
            } else if constexpr (std::is_same_v<T, stop::EvalError>) {
                j["s"] = v.s;
                j["message"] = v.message;
            } else {
                j["s"] = v.s;
            }
        },
        r);
    return j;
}

inline json to_json(const Outcome& o) {
    json j;
    j["kind"] = outcome_name(o);
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, outcome::GlobalToEnd>) {
                j["low_confidence"] = v.low_confidence;
            } else if constexpr (std::is_same_v<T, outcome::FiniteBlowUp>) {
                j["s_star"] = v.s_star;
                j["sign"] = value(v.sign);
            } else if constexpr (std::is_same_v<T, outcome::EndpointFinite>) {
                j["w1"] = v.w1;
                j["derivative_sign"] = v.derivative_sign;
            } else {
                j["slope"] = v.slope;
            }
        },
        o);
    return j;
}

inline json to_json(const HypothesisReport& r) {
    return json{{"side", r.side == Side::left ? "left" : "right"},
                {"location", r.location},
                {"q_near", r.q_near},
                {"q_prime", r.q_prime},
                {"h1", r.h1},
                {"q_vanishes", r.q_vanishes},
                {"message", r.message}};
}

inline json to_json(const BoundVerification& v) {
    json j;
    j["case"] = std::string(bound_name(v.bound.id));
    j["lambda"] = v.bound.lambda;
    j["c"] = v.bound.c;
    j["bound_a"] = v.bound.bound_a;
    j["s_star"] = v.s_star;
    j["margin"] = v.margin;
    j["holds"] = v.holds();
    j["h_condition"] = v.bound.h_condition;
    j["assumptions"] = v.assumptions;
    return j;
}

inline json to_json(const hyperbolic::HyperbolicCase& c) {
    json j;
    j["case"] = static_cast<int>(c.kind);
    j["n"] = c.n;
    j["s0"] = c.s0;
    j["f0"] = c.f0;
    if (c.K)
        j["K"] = *c.K;
    else
        j["K"] = nullptr;
    if (c.kind == hyperbolic::HyperbolicCase::Kind::constant_solution)
        j["constant_slope"] = c.f0;
    else
        j["constant_slope"] = nullptr;
    j["blowup_sign"] = c.blowup_sign;
    return j;
}

/// JSON text with a trailing newline; ordered keys make it deterministic.
inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Hashing and files

/// 64-bit FNV-1a, printed as 16 hex digits.
inline std::string fnv1a_hex(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Files staged in a temporary sibling and renamed into place by commit().
/// Anything not committed is removed on destruction.
class StagedFiles {
public:
    StagedFiles() = default;
    StagedFiles(const StagedFiles&) = delete;
    StagedFiles& operator=(const StagedFiles&) = delete;
    ~StagedFiles() {
        std::error_code ec;
        for (const auto& [tmp, dst] : files_) std::filesystem::remove(tmp, ec);
    }

    void stage(const std::filesystem::path& dst, std::string_view content) {
        std::filesystem::path tmp = dst;
        tmp += ".tmp" + std::to_string(files_.size());
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write '" + dst.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.close();
        if (!out) throw InputError("failed writing '" + dst.string() + "'");
        files_.emplace_back(tmp, dst);
    }

    void commit() {
        for (const auto& [tmp, dst] : files_) std::filesystem::rename(tmp, dst);
        files_.clear();
    }

private:
    std::vector<std::pair<std::filesystem::path, std::filesystem::path>> files_;
};

} // namespace tsol::io
