#pragma once

/// Quotient geometries: the interval (a, b), the orbit mean curvature h(s),
/// q = 1/h, data at singular endpoints, and an optional chart used to draw
/// the soliton.

#include "tsol/errors.hpp"
#include "tsol/expr.hpp"
#include "tsol/integrator.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tsol {

enum class Side { left, right };

/// Data at an endpoint where h blows up and q = 1/h vanishes.
struct SingularEndpointData {
    double location = 0.0;
    Side side = Side::left;
    /// One-sided derivative of q at the endpoint.
    double q_prime = 0.0;
    /// lim h'/h^2 = -q'.
    double h1 = 0.0;
};

/// Map from (s, u) with u in [0, 1) the orbit coordinate to ambient points;
/// the profile height f is appended as the last coordinate.
struct Embedding {
    std::string kind;
    int spatial_dim = 3;
    /// Close the strip in u (orbits are circles).
    bool periodic = true;
    std::function<std::vector<double>(double s, double u)> point;
    /// f is drawn along an axis (3-D output) instead of as an extra coordinate.
    bool height_is_axis = false;
};

struct GeometrySpec {
    std::string name;
    /// Expression text or preset parameters, as given by the user.
    std::string description;
    double a = 0.0;
    double b = std::numeric_limits<double>::infinity();
    HFunction h;
    HFunction q;
    std::optional<SingularEndpointData> left_singular;
    std::optional<SingularEndpointData> right_singular;
    int n = 2;
    std::optional<Embedding> embedding;
    std::vector<std::string> assumptions;

    bool contains(double s) const { return s > a && s < b; }
    double span() const { return b - a; }
};

/// Outcome of the singular-endpoint hypothesis check (q -> 0, sign of q').
struct HypothesisReport {
    Side side = Side::left;
    double location = 0.0;
    double q_near = 0.0;   // q evaluated just inside the endpoint
    double q_prime = 0.0;  // one-sided derivative
    double h1 = 0.0;
    bool q_vanishes = false;
    std::string message;
};

namespace assumption {
inline constexpr const char* sphere_sign =
    "sphere: h(s) = (n-1) tan(s), chosen so that 1 - h w matches the working profile equation "
    "w' = (1 + w^2)(1 - (n-1) tan(s) w); the printed orbit curvature (1-n) tan(s) has the opposite sign";
inline constexpr const char* horosphere_orientation =
    "horosphere: chart x_n = exp(-s); the orientation of s only fixes the sign of h, taken as h = -(n-1)";
} // namespace assumption

namespace detail {

inline HFunction restrict_to(HFunction fn, double a, double b, std::string what) {
    return [fn = std::move(fn), a, b, what = std::move(what)](double s) {
        if (!(s > a && s < b))
            throw EvalError(EvalError::Kind::domain, what + ": s = " + std::to_string(s) + " outside the domain");
        return fn(s);
    };
}

inline std::vector<double> sample_grid(double a, double b, int count) {
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(count));
    const bool fa = std::isfinite(a), fb = std::isfinite(b);
    for (int i = 1; i <= count; ++i) {
        const double t = static_cast<double>(i) / (count + 1);
        if (fa && fb) {
            g.push_back(a + (b - a) * t);
        } else if (fa) {
            g.push_back(a + std::pow(10.0, -3.0 + 6.0 * t));
        } else if (fb) {
            g.push_back(b - std::pow(10.0, -3.0 + 6.0 * t));
        } else {
            g.push_back(-1000.0 + 2000.0 * t);
        }
    }
    return g;
}

inline double approach_offset(double endpoint) { return 1e-8 * std::max(1.0, std::fabs(endpoint)); }

} // namespace detail

/// Measured endpoint slopes smaller than this are reported as exactly 0.
inline constexpr double kSlopeNoiseFloor = 1e-8;

/// Checks q -> 0 at a singular endpoint and measures q'(endpoint) with an
/// open one-sided stencil. Does not throw; see HypothesisReport::q_vanishes.
inline HypothesisReport check_singular_endpoint(const HFunction& q, double location, Side side) {
    HypothesisReport r;
    r.side = side;
    r.location = location;
    const double eta = detail::approach_offset(location);
    try {
        r.q_near = q(side == Side::left ? location + eta : location - eta);
        r.q_prime = expr::derivative(q, location, side == Side::left ? expr::Stencil::forward : expr::Stencil::backward);
        // below the stencil's rounding floor the sign of q' is noise
        if (std::fabs(r.q_prime) < kSlopeNoiseFloor) r.q_prime = 0.0;
        r.h1 = -r.q_prime;
        r.q_vanishes = std::fabs(r.q_near) <= 1e-6 && std::isfinite(r.q_prime);
        r.message = r.q_vanishes ? "q vanishes at the endpoint"
                                 : "q does not vanish at the endpoint (q = " + std::to_string(r.q_near) + ")";
    } catch (const std::exception& e) {
        r.q_vanishes = false;
        r.message = std::string("q not evaluable near the endpoint: ") + e.what();
    }
    return r;
}

struct PresetParams {
    /// Revolution profile curve x(s) (required) and z(s) (needed for the chart).
    std::optional<std::string> x_expr;
    std::optional<std::string> z_expr;
};

inline GeometrySpec euclidean_preset(int n) {
    if (n < 2) throw InputError("euclidean preset needs n >= 2");
    const double k = n - 1;
    GeometrySpec g;
    g.name = "euclidean";
    g.description = "euclidean n=" + std::to_string(n) + " h(s) = (n-1)/s";
    g.n = n;
    g.a = 0.0;
    g.b = std::numeric_limits<double>::infinity();
    g.h = detail::restrict_to([k](double s) { return k / s; }, g.a, g.b, "h");
    g.q = detail::restrict_to([k](double s) { return s / k; }, g.a, g.b, "q");
    g.left_singular = SingularEndpointData{0.0, Side::left, 1.0 / k, -1.0 / k};
    g.embedding = Embedding{"euclidean", 2, true,
                            [](double s, double u) {
                                const double t = 2.0 * std::numbers::pi * u;
                                return std::vector<double>{s * std::cos(t), s * std::sin(t)};
                            },
                            true};
    return g;
}

inline GeometrySpec horosphere_preset(int n) {
    if (n < 2) throw InputError("horosphere preset needs n >= 2");
    const double k = n - 1;
    GeometrySpec g;
    g.name = "horosphere";
    g.description = "horosphere n=" + std::to_string(n) + " h(s) = -(n-1)";
    g.n = n;
    g.a = -std::numeric_limits<double>::infinity();
    g.b = std::numeric_limits<double>::infinity();
    g.h = [k](double) { return -k; };
    g.q = [k](double) { return -1.0 / k; };
    g.assumptions.push_back(assumption::horosphere_orientation);
    g.embedding = Embedding{"horosphere", 2, false,
                            [](double s, double u) {
                                return std::vector<double>{2.0 * u - 1.0, std::exp(-s)};
                            },
                            true};
    return g;
}

inline GeometrySpec sphere_preset(int n) {
    if (n < 2) throw InputError("sphere preset needs n >= 2");
    const double k = n - 1;
    const double half_pi = std::numbers::pi / 2;
    GeometrySpec g;
    g.name = "sphere";
    g.description = "sphere n=" + std::to_string(n) + " h(s) = (n-1) tan(s)";
    g.n = n;
    g.a = -half_pi;
    g.b = half_pi;
    g.h = detail::restrict_to([k](double s) { return k * std::tan(s); }, g.a, g.b, "h");
    g.q = detail::restrict_to([k](double s) { return std::cos(s) / (k * std::sin(s)); }, g.a, g.b, "q");
    // h'/h^2 = 1 / ((n-1) sin^2 s) -> 1/(n-1) at both poles.
    g.left_singular = SingularEndpointData{-half_pi, Side::left, -1.0 / k, 1.0 / k};
    g.right_singular = SingularEndpointData{half_pi, Side::right, -1.0 / k, 1.0 / k};
    g.assumptions.push_back(assumption::sphere_sign);
    g.embedding = Embedding{"sphere", 3, true,
                            [](double s, double u) {
                                const double t = 2.0 * std::numbers::pi * u;
                                const double r = std::cos(s);
                                return std::vector<double>{r * std::cos(t), r * std::sin(t), -std::sin(s)};
                            },
                            false};
    return g;
}

/// Surface of revolution with arclength profile (x(s), 0, z(s)), h = 1/x.
inline GeometrySpec revolution_preset(const PresetParams& p) {
    if (!p.x_expr) throw InputError("revolution preset needs a profile curve x(s)");
    const expr::Expression x = expr::parse(*p.x_expr);
    if (!x.parameters().empty()) throw InputError("revolution x(s) may only use s");
    GeometrySpec g;
    g.name = "revolution";
    g.description = "revolution x(s) = " + *p.x_expr + (p.z_expr ? ", z(s) = " + *p.z_expr : std::string());
    g.n = 2;
    g.a = 0.0;
    g.b = std::numeric_limits<double>::infinity();
    g.q = detail::restrict_to([x](double s) { return x(s); }, g.a, g.b, "q");
    g.h = detail::restrict_to([x](double s) { return 1.0 / x(s); }, g.a, g.b, "h");

    for (double s : detail::sample_grid(g.a, 10.0, 200)) {
        const double xv = x(s);
        if (!(xv > 0.0))
            throw HypothesisError("revolution: x(s) must be positive, x(" + std::to_string(s) +
                                  ") = " + std::to_string(xv));
    }
    const HypothesisReport rep = check_singular_endpoint(g.q, 0.0, Side::left);
    if (!rep.q_vanishes) throw HypothesisError("revolution: x(s) must tend to 0 as s -> 0 (" + rep.message + ")");
    if (!(rep.q_prime > 0.0))
        throw HypothesisError("revolution: x'(0) must be positive, measured " + std::to_string(rep.q_prime));
    g.left_singular = SingularEndpointData{0.0, Side::left, rep.q_prime, -rep.q_prime};

    if (p.z_expr) {
        const expr::Expression z = expr::parse(*p.z_expr);
        if (!z.parameters().empty()) throw InputError("revolution z(s) may only use s");
        for (double s : detail::sample_grid(0.01, 10.0, 50)) {
            const double xd = expr::derivative(x, s);
            const double zd = expr::derivative(z, s);
            if (std::fabs(xd * xd + zd * zd - 1.0) >= 1e-6)
                throw HypothesisError("revolution: profile curve is not arclength at s = " + std::to_string(s));
        }
        g.embedding = Embedding{"revolution", 3, true,
                                [x, z](double s, double u) {
                                    const double t = 2.0 * std::numbers::pi * u;
                                    const double r = x(s);
                                    return std::vector<double>{r * std::cos(t), r * std::sin(t), z(s)};
                                },
                                false};
    }
    return g;
}

inline GeometrySpec make_preset(const std::string& name, int n, const PresetParams& extra = {}) {
    if (name == "euclidean") return euclidean_preset(n);
    if (name == "horosphere") return horosphere_preset(n);
    if (name == "sphere") return sphere_preset(n);
    if (name == "revolution") return revolution_preset(extra);
    throw InputError("unknown preset '" + name + "'");
}

struct SingularHints {
    bool left = false;
    bool right = false;
};

struct ExpressionGeometry {
    GeometrySpec geometry;
    std::vector<HypothesisReport> reports;
};

/// Geometry from an h(s) expression. Endpoint hints request the singular
/// endpoint checks; a failed check raises HypothesisError carrying the
/// measured values.
inline ExpressionGeometry from_expression(const std::string& h_text, double a, double b, int n,
                                          SingularHints hints = {}) {
    if (!(a < b)) throw InputError("domain must satisfy a < b");
    if (n < 1) throw InputError("n must be positive");
    const expr::Expression h = expr::parse(h_text).bind({{"n", static_cast<double>(n)}});
    if (!h.parameters().empty())
        throw InputError("h uses parameters other than n: " + *h.parameters().begin());

    ExpressionGeometry out;
    GeometrySpec& g = out.geometry;
    g.name = "expression";
    g.description = h_text;
    g.n = n;
    g.a = a;
    g.b = b;
    g.h = detail::restrict_to([h](double s) { return h(s); }, a, b, "h");
    g.q = detail::restrict_to(
        [h](double s) {
            const double v = h(s);
            if (v == 0.0) throw EvalError(EvalError::Kind::domain, "q = 1/h with h = 0");
            return 1.0 / v;
        },
        a, b, "q");

    for (double s : detail::sample_grid(a, b, 101)) {
        try {
            (void)g.h(s);
        } catch (const EvalError& e) {
            throw InputError("h is not evaluable at s = " + std::to_string(s) + ": " + e.what());
        }
    }

    auto endpoint = [&](double where, Side side) {
        if (!std::isfinite(where)) throw InputError("singular endpoint hint on an infinite end");
        HypothesisReport rep = check_singular_endpoint(g.q, where, side);
        out.reports.push_back(rep);
        if (!rep.q_vanishes)
            throw HypothesisError(std::string(side == Side::left ? "left" : "right") + " endpoint " +
                                  std::to_string(where) + ": " + rep.message);
        return SingularEndpointData{where, side, rep.q_prime, rep.h1};
    };
    if (hints.left) g.left_singular = endpoint(a, Side::left);
    if (hints.right) g.right_singular = endpoint(b, Side::right);
    return out;
}

} // namespace tsol
