#pragma once

/// Starting trajectories at endpoints where h blows up.
///
/// With q = 1/h the profile equation is the s-component-reparametrized flow of
/// X(s, x) = (q(s), (eps_tilde + eps x^2)(q(s) - x)), which has a fixed point
/// at (endpoint, 0). Its linearization has eigenvalues q'(e) and -eps_tilde,
/// and the eigenvector for q'(e) is (eps_tilde + q'(e), eps_tilde q'(e)).
/// Solutions with w(e) = 0 leave the fixed point tangent to that eigenvector,
/// i.e. with slope eps_tilde q'(e) / (eps_tilde + q'(e)).
///
/// At a left endpoint with eps_tilde q'(a) >= 0 the fixed point is a saddle
/// and the solution is unique (up to exponentially small terms when q'(a) = 0).
/// At a right endpoint the same formula holds with q'(b) = -h1, but for
/// eps_tilde h1 > 0 the fixed point is a node: a one-parameter family of
/// solutions reaches (b, 0) and launch_right returns one representative.
/// When eps_tilde + q'(b) = 0 the node is resonant and w ~ -eps_tilde u ln u
/// with u = b - s, so the slope at b is unbounded.

#include "tsol/errors.hpp"
#include "tsol/geometry.hpp"
#include "tsol/integrator.hpp"
#include "tsol/profile_ode.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

namespace tsol {

/// Slope of the invariant curve through (endpoint, 0).
inline double initial_slope(double q_prime, Sign eps_tilde) {
    const double et = value(eps_tilde);
    if (et + q_prime == 0.0)
        throw HypothesisError("degenerate eigenvector: eps_tilde + q'(endpoint) = 0 is unsupported");
    return et * q_prime / (et + q_prime);
}

struct LaunchOptions {
    /// Seed offset from the endpoint; unset means min(1e-6 * (b - a), 1e-6).
    std::optional<double> delta;
    /// Where to stop; unset means the opposite endpoint pulled in by delta.
    std::optional<double> s_target;
};

namespace detail {

inline double default_delta(const GeometrySpec& g) {
    const double span = g.b - g.a;
    return std::isfinite(span) ? std::min(1e-6 * span, 1e-6) : 1e-6;
}

inline double resolve_delta(const GeometrySpec& g, const LaunchOptions& opt) {
    const double d = opt.delta.value_or(default_delta(g));
    if (!(d > 0.0) || !(d < g.b - g.a)) throw InputError("launch delta must lie in (0, b - a)");
    return d;
}

} // namespace detail

/// Solution of w' = (eps_tilde + eps w^2)(1 - h w), w(a) = 0, continued
/// forward. The seed is w(a + delta) = m delta, f(a + delta) = m delta^2 / 2,
/// so f(a) = 0; the trajectory's anchor records (a, 0, 0).
inline Trajectory launch_left(const GeometrySpec& geom, Signature sig, const LaunchOptions& opt = {},
                              const IntegratorConfig& cfg = {}) {
    if (!geom.left_singular) throw HypothesisError("geometry '" + geom.name + "' has no singular left endpoint");
    const SingularEndpointData& e = *geom.left_singular;
    if (sig.eps_tilde() * e.q_prime < 0.0)
        throw HypothesisError("left endpoint launch needs eps_tilde * q'(a) >= 0, got q'(a) = " +
                              std::to_string(e.q_prime));
    const double m = initial_slope(e.q_prime, sig.epsilon_tilde);
    const double delta = detail::resolve_delta(geom, opt);
    const double s1 = e.location + delta;
    double target;
    if (opt.s_target) {
        target = *opt.s_target;
    } else {
        if (!std::isfinite(geom.b)) throw InputError("launch_left on an unbounded interval needs a target");
        target = geom.b - delta;
    }
    if (!(target > s1)) throw InputError("launch_left target must lie beyond a + delta");

    Trajectory t = integrate(sig, geom.h, s1, m * delta, 0.5 * m * delta * delta, target, cfg);
    t.anchor = ProfileState{e.location, 0.0, 0.0};
    return t;
}

/// Solution with w(b) = 0, continued backward from b - delta.
inline Trajectory launch_right(const GeometrySpec& geom, Signature sig, const LaunchOptions& opt = {},
                               const IntegratorConfig& cfg = {}) {
    if (!geom.right_singular) throw HypothesisError("geometry '" + geom.name + "' has no singular right endpoint");
    const SingularEndpointData& e = *geom.right_singular;
    if (sig == Signature{Sign::plus, Sign::plus}) {
        if (e.h1 < 0.0) throw HypothesisError("right endpoint launch with eps = eps_tilde = 1 needs h1 >= 0");
    } else if (sig == Signature{Sign::minus, Sign::minus}) {
        if (e.h1 > 0.0) throw HypothesisError("right endpoint launch with eps = eps_tilde = -1 needs h1 <= 0");
    } else {
        throw HypothesisError("right endpoint launch is defined for eps = eps_tilde only");
    }
    const double delta = detail::resolve_delta(geom, opt);
    const double s1 = e.location - delta;
    const double et = sig.eps_tilde();
    const double q_prime_b = -e.h1;

    double w1, f1;
    if (et + q_prime_b == 0.0) {
        // resonant node: w(b - u) = -eps_tilde u ln u
        w1 = -et * delta * std::log(delta);
        f1 = et * (0.5 * delta * delta * std::log(delta) - 0.25 * delta * delta);
    } else {
        const double c = initial_slope(q_prime_b, sig.epsilon_tilde);
        w1 = -c * delta;
        f1 = 0.5 * c * delta * delta;
    }

    double target;
    if (opt.s_target) {
        target = *opt.s_target;
    } else {
        if (!std::isfinite(geom.a)) throw InputError("launch_right on an unbounded interval needs a target");
        target = geom.a + delta;
    }
    if (!(target < s1)) throw InputError("launch_right target must lie before b - delta");

    Trajectory t = integrate(sig, geom.h, s1, w1, f1, target, cfg);
    t.anchor = ProfileState{e.location, 0.0, 0.0};
    return t;
}

/// Slope at an endpoint estimated from two interior points at distances
/// delta and 10 delta, as (w(e + 10 d) - w(e + d)) / (9 d) on the left and the
/// mirrored difference on the right.
inline double endpoint_slope(const Trajectory& traj, double endpoint, Side side, double delta) {
    const double sign = side == Side::left ? 1.0 : -1.0;
    const ProfileState near = resample_at(traj, endpoint + sign * delta);
    const ProfileState far = resample_at(traj, endpoint + sign * 10.0 * delta);
    return (far.w - near.w) / (far.s - near.s);
}

} // namespace tsol
