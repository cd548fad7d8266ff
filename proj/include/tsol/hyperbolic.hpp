#pragma once

/// Closed-form analysis of w' = (1 + w^2)(1 + (n-1) w), the profile equation
/// over horospheres in the half-space model of H^n (h = -(n-1)).
///
/// F(t) = [ (n-1) ln(|1 + (n-1)t| / sqrt(1 + t^2)) + atan t ] / (1 + (n-1)^2)
/// has F'(t) = 1 / ((1 + (n-1)t)(1 + t^2)), so F(w(s)) - s is constant along
/// solutions. F is increasing on (-1/(n-1), inf) with supremum K0 and
/// decreasing on (-inf, -1/(n-1)) with supremum K1, which gives the blow-up
/// parameter of every non-constant solution.

#include "tsol/errors.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>

namespace tsol::hyperbolic {

enum class Branch { case2, case3 };

inline void check_dimension(int n) {
    if (n < 2) throw InputError("hyperbolic analysis needs n >= 2");
}

inline double equilibrium(int n) { return -1.0 / (n - 1); }

/// F with integration constant 0.
inline double first_integral(double t, int n) {
    check_dimension(n);
    const double k = n - 1;
    const double lin = std::fabs(1.0 + k * t);
    if (lin == 0.0) throw EvalError(EvalError::Kind::domain, "first integral has a pole at t = -1/(n-1)");
    return (k * std::log(lin / std::hypot(1.0, t)) + std::atan(t)) / (1.0 + k * k);
}

/// F'(t).
inline double first_integral_derivative(double t, int n) {
    const double k = n - 1;
    return 1.0 / ((1.0 + k * t) * (1.0 + t * t));
}

/// sup of F on the branch (limit at t -> +inf for case 2, t -> -inf for case 3).
inline double branch_limit(Branch b, int n) {
    check_dimension(n);
    const double k = n - 1;
    const double half_pi = std::numbers::pi / 2;
    return (k * std::log(k) + (b == Branch::case2 ? half_pi : -half_pi)) / (1.0 + k * k);
}

struct HyperbolicCase {
    enum class Kind { constant_solution = 1, case2 = 2, case3 = 3 };
    Kind kind = Kind::constant_solution;
    int n = 2;
    double s0 = 0.0;
    double f0 = 0.0;
    /// Blow-up parameter; absent for the constant solution.
    std::optional<double> K;
    /// Direction of the blow-up: +1 for case 2 (w -> +inf), -1 for case 3.
    int blowup_sign = 0;
};

/// Classifies initial data w(s0) = f0 and predicts where w blows up.
/// `exactly_constant` marks f0 as the symbolic value -1/(n-1); numeric input
/// within 1e-13 of it is treated the same way.
inline HyperbolicCase predict(int n, double s0, double f0, bool exactly_constant = false) {
    check_dimension(n);
    HyperbolicCase c;
    c.n = n;
    c.s0 = s0;
    const double eq = equilibrium(n);
    if (exactly_constant || std::fabs(f0 - eq) <= 1e-13) {
        c.kind = HyperbolicCase::Kind::constant_solution;
        c.f0 = eq;
        return c;
    }
    c.f0 = f0;
    const Branch b = f0 > eq ? Branch::case2 : Branch::case3;
    c.kind = b == Branch::case2 ? HyperbolicCase::Kind::case2 : HyperbolicCase::Kind::case3;
    c.K = s0 + (branch_limit(b, n) - first_integral(f0, n));
    c.blowup_sign = b == Branch::case2 ? 1 : -1;
    return c;
}

/// Solves F(t) = target on a monotone branch. Requires target < branch limit.
inline double invert_branch(double target, Branch branch, int n) {
    check_dimension(n);
    const double limit = branch_limit(branch, n);
    if (!(target < limit))
        throw InputError("invert_branch: target " + std::to_string(target) + " not below the branch limit " +
                         std::to_string(limit));
    const double eq = equilibrium(n);
    const double out = branch == Branch::case2 ? 1.0 : -1.0;  // direction away from the pole
    auto g = [&](double t) { return first_integral(t, n) - target; };

    // near: between the pole and the root (g < 0); far: beyond the root (g > 0)
    double near = eq + out;
    double gap = 1.0;
    while (g(near) >= 0.0) {
        gap *= 0.5;
        if (gap < 1e-300) throw NumericError("invert_branch: could not bracket near the pole");
        near = eq + out * gap;
    }
    double far = eq + out * 2.0;
    while (g(far) <= 0.0) {
        far = eq + out * 2.0 * std::fabs(far - eq);
        if (!std::isfinite(far)) throw NumericError("invert_branch: target too close to the branch limit");
    }
    double lo = std::min(near, far), hi = std::max(near, far);
    std::uintmax_t max_iter = 200;
    auto [r0, r1] = boost::math::tools::toms748_solve(g, lo, hi, boost::math::tools::eps_tolerance<double>(52),
                                                      max_iter);
    const double root = 0.5 * (r0 + r1);
    return root;
}

} // namespace tsol::hyperbolic
