#pragma once

/// Reduced profile equation for group-invariant translating solitons in M x R
/// with metric g + eps dt^2:
///
///     f''(s) = (eps_tilde + eps f'(s)^2) (1 - h(s) f'(s))
///
/// where h is the mean curvature of the orbits and s the unit-speed quotient
/// parameter.

#include <cstdint>

namespace tsol {

enum class Sign : std::int8_t { plus = 1, minus = -1 };

constexpr double value(Sign s) noexcept { return static_cast<double>(static_cast<int>(s)); }

constexpr Sign operator-(Sign s) noexcept { return s == Sign::plus ? Sign::minus : Sign::plus; }

constexpr Sign sign_of(double x) noexcept { return x < 0.0 ? Sign::minus : Sign::plus; }

/// Metric signs: epsilon = <dt,dt>, epsilon_tilde = |grad pi|^2.
struct Signature {
    Sign epsilon = Sign::plus;
    Sign epsilon_tilde = Sign::plus;

    constexpr double eps() const noexcept { return value(epsilon); }
    constexpr double eps_tilde() const noexcept { return value(epsilon_tilde); }
    /// eps * eps_tilde, the product that separates the barrier branch (-1).
    constexpr double product() const noexcept { return eps() * eps_tilde(); }

    friend constexpr bool operator==(const Signature&, const Signature&) = default;
};

/// One point of a profile: arc parameter, slope w = f', height f.
struct ProfileState {
    double s = 0.0;
    double w = 0.0;
    double f = 0.0;

    friend constexpr bool operator==(const ProfileState&, const ProfileState&) = default;
};

struct SystemRate {
    double df = 0.0;
    double dw = 0.0;
};

/// w' = (eps_tilde + eps w^2)(1 - h w).
constexpr double rhs_reduced(Signature sig, double h_val, double w) noexcept {
    return (sig.eps_tilde() + sig.eps() * w * w) * (1.0 - h_val * w);
}

/// (f, w)' for the coupled first-order system. df is the stored w, untouched.
constexpr SystemRate rhs_system(Signature sig, double h_val, const ProfileState& state) noexcept {
    return {state.w, rhs_reduced(sig, h_val, state.w)};
}

} // namespace tsol
