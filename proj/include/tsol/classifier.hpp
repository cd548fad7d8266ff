#pragma once

/// Fate of a trajectory, and the closed-form blow-up bounds for the
/// sign-indefinite and Lorentzian branches of the profile equation.

#include "tsol/errors.hpp"
#include "tsol/geometry.hpp"
#include "tsol/integrator.hpp"
#include "tsol/profile_ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tsol {

namespace outcome {
struct GlobalToEnd {
    bool low_confidence = false;
    bool operator==(const GlobalToEnd&) const = default;
};
struct FiniteBlowUp {
    double s_star = 0.0;
    Sign sign = Sign::plus;
    bool operator==(const FiniteBlowUp&) const = default;
};
/// w has a finite nonzero limit at the endpoint while w' diverges.
struct EndpointFinite {
    double w1 = 0.0;
    int derivative_sign = 0;
    bool operator==(const EndpointFinite&) const = default;
};
/// w -> 0 at the endpoint; slope = w / (s - endpoint) at the last sample.
struct EndpointZero {
    double slope = 0.0;
    bool operator==(const EndpointZero&) const = default;
};
} // namespace outcome

using Outcome = std::variant<outcome::GlobalToEnd, outcome::FiniteBlowUp, outcome::EndpointFinite, outcome::EndpointZero>;

inline const char* outcome_name(const Outcome& o) {
    static constexpr std::array<const char*, 4> names{"GlobalToEnd", "FiniteBlowUp", "EndpointFinite", "EndpointZero"};
    return names[o.index()];
}

/// Numeric stand-ins for the limits "w -> 0" and "w' -> +-inf".
struct ClassifierConfig {
    double tail_fraction = 0.05;
    double zero_tol = 1e-4;
    double rhs_blowup = 1e4;
    /// ReachedEnd within this fraction of the domain length of a finite
    /// endpoint counts as reaching that endpoint.
    double endpoint_closeness = 1e-5;
};

/// Classifies by the trajectory tail only, so equal trajectories give equal
/// outcomes.
inline Outcome classify(const Trajectory& traj, const GeometrySpec& geom, Signature /*sig*/,
                        const ClassifierConfig& cfg = {}) {
    if (const auto* b = std::get_if<stop::BlowUp>(&traj.stop)) return outcome::FiniteBlowUp{b->s_star, b->sign};
    if (!std::holds_alternative<stop::ReachedEnd>(traj.stop) || traj.samples.size() < 3)
        return outcome::GlobalToEnd{true};

    const bool forward = traj.direction == Direction::forward;
    const double endpoint = forward ? geom.b : geom.a;
    if (!std::isfinite(endpoint)) return outcome::GlobalToEnd{false};

    const ProfileState& last = traj.back();
    const double scale = std::isfinite(geom.b - geom.a) ? geom.b - geom.a : 1.0;
    if (std::fabs(endpoint - last.s) > cfg.endpoint_closeness * scale) return outcome::GlobalToEnd{false};

    const std::size_t n = traj.samples.size();
    const std::size_t tail = std::max<std::size_t>(3, static_cast<std::size_t>(std::ceil(cfg.tail_fraction * n)));
    const std::size_t first = n > tail ? n - tail : 0;

    bool w_shrinking = true;
    bool rhs_growing = true;
    for (std::size_t i = first + 1; i < n; ++i) {
        if (std::fabs(traj.samples[i].w) > std::fabs(traj.samples[i - 1].w)) w_shrinking = false;
        if (std::fabs(traj.slopes[i]) < std::fabs(traj.slopes[i - 1])) rhs_growing = false;
    }
    const double end_slope = traj.slopes.back();

    if (std::fabs(last.w) < cfg.zero_tol && w_shrinking)
        return outcome::EndpointZero{last.w / (last.s - endpoint)};
    if (std::fabs(end_slope) > cfg.rhs_blowup && rhs_growing && std::fabs(last.w) >= cfg.zero_tol)
        return outcome::EndpointFinite{last.w, end_slope > 0.0 ? 1 : -1};
    return outcome::GlobalToEnd{true};
}

/// h(s_end) * w(s_end); tends to 1 on unbounded intervals with h > 0.
inline double asymptotic_ratio(const Trajectory& traj, const HFunction& h) {
    if (traj.empty()) throw InputError("asymptotic_ratio: empty trajectory");
    return h(traj.back().s) * traj.back().w;
}

// ---------------------------------------------------------------------------
// Blow-up bounds

enum class BoundId { B1, B2, C1, C2, D1, E1a, E1b, E2, E3 };

inline constexpr std::array<std::pair<std::string_view, BoundId>, 9> kBoundIds{{
    {"B1", BoundId::B1},
    {"B2", BoundId::B2},
    {"C1", BoundId::C1},
    {"C2", BoundId::C2},
    {"D1", BoundId::D1},
    {"E1a", BoundId::E1a},
    {"E1b", BoundId::E1b},
    {"E2", BoundId::E2},
    {"E3", BoundId::E3},
}};

inline std::string_view bound_name(BoundId id) {
    for (const auto& [k, v] : kBoundIds)
        if (v == id) return k;
    return "?";
}

inline BoundId parse_bound_id(std::string_view text) {
    for (const auto& [k, v] : kBoundIds)
        if (k == text) return v;
    throw InputError("unknown bound case '" + std::string(text) + "'");
}

/// The bound cases with a defined clause, in table order.
inline constexpr std::array<BoundId, 8> kVerifiableBounds{BoundId::B1,  BoundId::B2,  BoundId::C1, BoundId::C2,
                                                          BoundId::E1a, BoundId::E1b, BoundId::E2, BoundId::E3};

inline constexpr const char* kE1Assumption =
    "E1: bound a taken as c + 1/lambda (the clause states a blow-up before a without defining a)";

/// Numerically stable arccoth for x > 1.
inline double acoth(double x) { return 0.5 * std::log1p(2.0 / (x - 1.0)); }

enum class BoundFormula { acoth, acoth_over, reciprocal };

struct BoundClause {
    Signature sig;
    /// Initial slope is +lambda or -lambda.
    int slope_sign = 1;
    BoundFormula formula = BoundFormula::reciprocal;
    std::string h_condition;
    std::function<bool(double h, double lambda)> admits;
};

inline BoundClause clause_for(BoundId id) {
    using S = Sign;
    switch (id) {
    case BoundId::B1:
        return {{S::plus, S::minus}, 1, BoundFormula::acoth, "h(s) <= 0", [](double h, double) { return h <= 0.0; }};
    case BoundId::B2:
        return {{S::plus, S::minus}, -1, BoundFormula::acoth_over, "h(s) <= -1",
                [](double h, double) { return h <= -1.0; }};
    case BoundId::C1:
        return {{S::minus, S::minus}, -1, BoundFormula::reciprocal, "h(s) > 0",
                [](double h, double) { return h > 0.0; }};
    case BoundId::C2:
        return {{S::minus, S::minus}, 1, BoundFormula::reciprocal, "h(s) > 1/lambda",
                [](double h, double l) { return h > 1.0 / l; }};
    case BoundId::E1a:
        return {{S::plus, S::plus}, 1, BoundFormula::reciprocal, "h(s) < 0", [](double h, double) { return h < 0.0; }};
    case BoundId::E1b:
        return {{S::plus, S::plus}, -1, BoundFormula::reciprocal, "h(s) < -1/lambda",
                [](double h, double l) { return h < -1.0 / l; }};
    case BoundId::E2:
        return {{S::minus, S::plus}, -1, BoundFormula::acoth, "h(s) > 0", [](double h, double) { return h > 0.0; }};
    case BoundId::E3:
        return {{S::minus, S::plus}, 1, BoundFormula::acoth_over, "h(s) > 1", [](double h, double) { return h > 1.0; }};
    case BoundId::D1: break;
    }
    throw InputError("bound case D1 has no blow-up clause");
}

struct BoundCase {
    BoundId id = BoundId::B1;
    Signature sig;
    double lambda = 2.0;
    double c = 0.0;
    std::string h_condition;
    double bound_a = 0.0;
    double initial_slope = 0.0;
};

/// Closed-form a: B1/E2 c + acoth(l); B2/E3 c + acoth(l)/(l-1); C*, E1* c + 1/l.
inline double bound_for(BoundId id, double lambda, double c) {
    const BoundClause cl = clause_for(id);
    if (!std::isfinite(lambda) || !std::isfinite(c)) throw InputError("bound_for: non-finite input");
    switch (cl.formula) {
    case BoundFormula::acoth:
        if (!(lambda > 1.0)) throw InputError("lambda must exceed 1 for case " + std::string(bound_name(id)));
        return c + acoth(lambda);
    case BoundFormula::acoth_over:
        if (!(lambda > 1.0)) throw InputError("lambda must exceed 1 for case " + std::string(bound_name(id)));
        return c + acoth(lambda) / (lambda - 1.0);
    case BoundFormula::reciprocal:
        if (!(lambda > 0.0)) throw InputError("lambda must be positive for case " + std::string(bound_name(id)));
        return c + 1.0 / lambda;
    }
    return c;
}

inline BoundCase make_bound_case(BoundId id, double lambda, double c) {
    const BoundClause cl = clause_for(id);
    BoundCase bc;
    bc.id = id;
    bc.sig = cl.sig;
    bc.lambda = lambda;
    bc.c = c;
    bc.h_condition = cl.h_condition;
    bc.bound_a = bound_for(id, lambda, c);
    bc.initial_slope = cl.slope_sign * lambda;
    return bc;
}

/// Constant h that satisfies the clause's condition.
inline double default_witness(BoundId id, double lambda) {
    switch (id) {
    case BoundId::B1: return 0.0;
    case BoundId::B2: return -1.0;
    case BoundId::C1: return 1.0;
    case BoundId::C2: return 2.0 / lambda;
    case BoundId::E1a: return -1.0;
    case BoundId::E1b: return -2.0 / lambda;
    case BoundId::E2: return 1.0;
    case BoundId::E3: return 2.0;
    case BoundId::D1: break;
    }
    throw InputError("bound case D1 has no blow-up clause");
}

struct BoundVerification {
    BoundCase bound;
    double s_star = 0.0;
    double margin = 0.0;
    std::vector<std::string> assumptions;

    /// Blow-up happened before the bound, up to numeric tolerance.
    bool holds(double tol = 1e-6) const { return margin >= -tol; }
};

/// Integrates from (c, +-lambda) and returns where w blows up relative to
/// the closed-form bound. Throws HypothesisError if h violates the clause on
/// [c, a] (sampled), NumericError if no blow-up occurs before a + 1.
inline BoundVerification verify_bound(const BoundCase& bc, const HFunction& h, const IntegratorConfig& cfg = {}) {
    const BoundClause cl = clause_for(bc.id);
    constexpr int samples = 201;
    for (int i = 0; i < samples; ++i) {
        const double s = bc.c + (bc.bound_a - bc.c) * i / (samples - 1);
        double hv;
        try {
            hv = h(s);
        } catch (const std::exception& e) {
            throw HypothesisError("h not evaluable at s = " + std::to_string(s) + ": " + e.what());
        }
        if (!cl.admits(hv, bc.lambda))
            throw HypothesisError("case " + std::string(bound_name(bc.id)) + " needs " + cl.h_condition +
                                  " on [c, a]; h(" + std::to_string(s) + ") = " + std::to_string(hv));
    }

    const Trajectory t = integrate(bc.sig, h, bc.c, bc.initial_slope, 0.0, bc.bound_a + 1.0, cfg);
    const auto* b = std::get_if<stop::BlowUp>(&t.stop);
    if (!b)
        throw NumericError("case " + std::string(bound_name(bc.id)) + ": no blow-up found before a + 1 (stop: " +
                           stop_name(t.stop) + ")");
    BoundVerification v;
    v.bound = bc;
    v.s_star = b->s_star;
    v.margin = bc.bound_a - b->s_star;
    if (bc.id == BoundId::E1a || bc.id == BoundId::E1b) v.assumptions.push_back(kE1Assumption);
    return v;
}

} // namespace tsol
