#pragma once

/// Adaptive Dormand-Prince 5(4) integration of the coupled (f, w) profile
/// system with PI step control, blow-up detection and cubic Hermite dense
/// output.

#include "tsol/errors.hpp"
#include "tsol/profile_ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace tsol {

using HFunction = std::function<double(double)>;

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    /// |w| at or above this value counts as a blow-up.
    double w_max = 1e8;
    /// Minimum step; unset means 1e-14 * |s_target - s0|.
    std::optional<double> h_min;
    std::size_t max_steps = 10'000'000;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw InputError("integrator tolerances must be positive");
        if (!(w_max > 1.0)) throw InputError("w_max must exceed 1");
        if (h_min && !(*h_min > 0.0)) throw InputError("h_min must be positive");
        if (max_steps == 0) throw InputError("max_steps must be positive");
    }
};

enum class Direction { forward, backward };

namespace stop {
struct ReachedEnd {
    double s_end = 0.0;
};
struct BlowUp {
    double s_star = 0.0;
    Sign sign = Sign::plus;
};
struct StepUnderflow {
    double s = 0.0;
};
struct MaxSteps {
    double s = 0.0;
};
struct EvalError {
    double s = 0.0;
    std::string message;
};
} // namespace stop

using StopReason = std::variant<stop::ReachedEnd, stop::BlowUp, stop::StepUnderflow, stop::MaxSteps, stop::EvalError>;

inline const char* stop_name(const StopReason& r) {
    static constexpr std::array<const char*, 5> names{"ReachedEnd", "BlowUp", "StepUnderflow", "MaxSteps", "EvalError"};
    return names[r.index()];
}

/// True for the stops that mean the numerics gave up rather than the
/// solution doing something.
inline bool is_numeric_failure(const StopReason& r) {
    return std::holds_alternative<stop::StepUnderflow>(r) || std::holds_alternative<stop::MaxSteps>(r) ||
           std::holds_alternative<stop::EvalError>(r);
}

struct Trajectory {
    /// Accepted states, s strictly monotone in `direction`.
    std::vector<ProfileState> samples;
    /// dw/ds at each sample (the right-hand side), used for Hermite output.
    std::vector<double> slopes;
    StopReason stop = stop::ReachedEnd{};
    Direction direction = Direction::forward;
    /// Singular endpoint the trajectory was launched from, if any. Its f is
    /// the reference height of the launch (0 unless rebased).
    std::optional<ProfileState> anchor;
    /// First probe at or beyond w_max when stop is BlowUp.
    std::optional<ProfileState> blowup_probe;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;

    bool empty() const noexcept { return samples.empty(); }
    const ProfileState& front() const { return samples.front(); }
    const ProfileState& back() const { return samples.back(); }
};

namespace detail {

// Dormand-Prince 5(4) tableau.
struct DoPri {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                            a76 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
};

using Vec2 = std::array<double, 2>;  // (f, w)

/// Thrown internally when h cannot be evaluated.
struct HFailure {
    double s;
    std::string message;
};

class System {
public:
    System(Signature sig, const HFunction& h, double dir) : sig_(sig), h_(h), dir_(dir) {}

    double s_of(double x) const { return dir_ * x; }

    /// dy/dx with x = dir * s.
    Vec2 operator()(double x, const Vec2& y) const {
        const double s = s_of(x);
        double hv;
        try {
            hv = h_(s);
        } catch (const std::exception& e) {
            throw HFailure{s, e.what()};
        }
        if (!std::isfinite(hv)) throw HFailure{s, "h is not finite"};
        return {dir_ * y[1], dir_ * rhs_reduced(sig_, hv, y[1])};
    }

private:
    Signature sig_;
    const HFunction& h_;
    double dir_;
};

struct StepResult {
    Vec2 y;
    Vec2 k7;
    double err = 0.0;
};

inline Vec2 axpy(const Vec2& y, double h, std::initializer_list<std::pair<double, const Vec2*>> terms) {
    Vec2 out = y;
    for (int i = 0; i < 2; ++i) {
        double acc = 0.0;
        for (const auto& [a, k] : terms) acc += a * (*k)[i];
        out[i] = y[i] + h * acc;
    }
    return out;
}

inline StepResult dopri_step(const System& sys, double x, const Vec2& y, const Vec2& k1, double h,
                             const IntegratorConfig& cfg) {
    using T = DoPri;
    const Vec2 k2 = sys(x + T::c2 * h, axpy(y, h, {{T::a21, &k1}}));
    const Vec2 k3 = sys(x + T::c3 * h, axpy(y, h, {{T::a31, &k1}, {T::a32, &k2}}));
    const Vec2 k4 = sys(x + T::c4 * h, axpy(y, h, {{T::a41, &k1}, {T::a42, &k2}, {T::a43, &k3}}));
    const Vec2 k5 = sys(x + T::c5 * h, axpy(y, h, {{T::a51, &k1}, {T::a52, &k2}, {T::a53, &k3}, {T::a54, &k4}}));
    const Vec2 k6 =
        sys(x + h, axpy(y, h, {{T::a61, &k1}, {T::a62, &k2}, {T::a63, &k3}, {T::a64, &k4}, {T::a65, &k5}}));
    StepResult r;
    r.y = axpy(y, h, {{T::a71, &k1}, {T::a73, &k3}, {T::a74, &k4}, {T::a75, &k5}, {T::a76, &k6}});
    r.k7 = sys(x + h, r.y);
    double sum = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double e = h * (T::e1 * k1[i] + T::e3 * k3[i] + T::e4 * k4[i] + T::e5 * k5[i] + T::e6 * k6[i] +
                              T::e7 * r.k7[i]);
        const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::fabs(y[i]), std::fabs(r.y[i]));
        sum += (e / sc) * (e / sc);
    }
    r.err = std::sqrt(sum / 2.0);
    if (!std::isfinite(r.err) || !std::isfinite(r.y[0]) || !std::isfinite(r.y[1]))
        r.err = std::numeric_limits<double>::infinity();
    return r;
}

inline double initial_step(const System& sys, double x, const Vec2& y, const Vec2& f0, double hmax,
                           const IntegratorConfig& cfg) {
    double dnf = 0.0, dny = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double sk = cfg.abs_tol + cfg.rel_tol * std::fabs(y[i]);
        dnf += (f0[i] / sk) * (f0[i] / sk);
        dny += (y[i] / sk) * (y[i] / sk);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
    h = std::min(h, hmax);
    Vec2 f1;
    try {
        f1 = sys(x + h, {y[0] + h * f0[0], y[1] + h * f0[1]});
    } catch (const HFailure&) {
        return std::min(h, 1e-6 * hmax);
    }
    double der2 = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double sk = cfg.abs_tol + cfg.rel_tol * std::fabs(y[i]);
        der2 += ((f1[i] - f0[i]) / sk) * ((f1[i] - f0[i]) / sk);
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(std::fabs(der2), std::sqrt(dnf));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 1.0 / 5.0);
    return std::min({100.0 * h, h1, hmax});
}

} // namespace detail

/// Integrates (f, w)' = (w, (eps_tilde + eps w^2)(1 - h(s) w)) from s0 towards
/// s_target (either side of s0). Never throws for numerical trouble; the
/// outcome is reported through Trajectory::stop.
inline Trajectory integrate(Signature sig, const HFunction& h_fn, double s0, double w0, double f0, double s_target,
                            const IntegratorConfig& cfg = {}) {
    cfg.validate();
    if (!std::isfinite(s0) || !std::isfinite(s_target) || !std::isfinite(w0) || !std::isfinite(f0))
        throw InputError("integrate: non-finite initial data or target");
    if (s0 == s_target) throw InputError("integrate: s0 equals s_target");

    const double dir = s_target > s0 ? 1.0 : -1.0;
    const double span = std::fabs(s_target - s0);
    const double h_min = cfg.h_min.value_or(1e-14 * span);
    const double x_end = dir * s_target;
    detail::System sys(sig, h_fn, dir);

    Trajectory traj;
    traj.direction = dir > 0 ? Direction::forward : Direction::backward;

    double x = dir * s0;
    detail::Vec2 y{f0, w0};
    detail::Vec2 k1;
    try {
        k1 = sys(x, y);
    } catch (const detail::HFailure& e) {
        traj.stop = stop::EvalError{e.s, e.message};
        return traj;
    }
    traj.samples.push_back({s0, w0, f0});
    traj.slopes.push_back(dir * k1[1]);
    if (std::fabs(w0) >= cfg.w_max) {
        traj.stop = stop::BlowUp{s0, sign_of(w0)};
        return traj;
    }

    constexpr double beta = 0.04;
    constexpr double expo1 = 0.2 - beta * 0.75;
    constexpr double safe = 0.9;
    constexpr double facc1 = 1.0 / 0.2;  // step may shrink by at most 5x
    constexpr double facc2 = 1.0 / 10.0; // and grow by at most 10x
    double facold = 1e-4;
    bool rejected_last = false;
    double prev_abs_w = std::fabs(w0);

    double h;
    try {
        h = detail::initial_step(sys, x, y, k1, span, cfg);
    } catch (const detail::HFailure& e) {
        traj.stop = stop::EvalError{e.s, e.message};
        return traj;
    }
    h = std::max(h, h_min);

    std::size_t attempts = 0;
    for (;;) {
        if (attempts++ >= cfg.max_steps) {
            traj.stop = stop::MaxSteps{dir * x};
            return traj;
        }
        bool last = false;
        if (x + 1.01 * h >= x_end) {
            h = x_end - x;
            last = true;
        }
        if (h < h_min && !last) {
            const double aw = std::fabs(y[1]);
            if (aw > 1.0 && aw > prev_abs_w)
                traj.stop = stop::BlowUp{dir * x, sign_of(y[1])};
            else
                traj.stop = stop::StepUnderflow{dir * x};
            return traj;
        }

        detail::StepResult step;
        try {
            step = detail::dopri_step(sys, x, y, k1, h, cfg);
        } catch (const detail::HFailure& e) {
            traj.stop = stop::EvalError{e.s, e.message};
            return traj;
        }

        const double fac11 = std::isfinite(step.err) ? std::pow(step.err, expo1) : 1e10;
        // For eps * eps_tilde = -1 the lines |w| = 1 are invariant. Near them
        // the error test no longer limits h, and a step past the stability
        // region can jump across; such steps are retried with half the size.
        const bool crosses_barrier =
            sig.product() < 0.0 && (std::fabs(y[1]) - 1.0) * (std::fabs(step.y[1]) - 1.0) < 0.0;
        if (step.err <= 1.0 && crosses_barrier) {
            ++traj.rejected_steps;
            rejected_last = true;
            h *= 0.5;
            continue;
        }
        if (step.err <= 1.0) {
            if (std::fabs(step.y[1]) >= cfg.w_max) {
                // Locate the threshold crossing inside this step by bisecting
                // on the fraction of the step.
                auto probe = [&](double theta) -> detail::Vec2 {
                    try {
                        return detail::dopri_step(sys, x, y, k1, theta * h, cfg).y;
                    } catch (const detail::HFailure&) {
                        return {y[0], std::numeric_limits<double>::infinity()};
                    }
                };
                auto beyond = [&](const detail::Vec2& v) {
                    return !std::isfinite(v[1]) || std::fabs(v[1]) >= cfg.w_max;
                };
                double lo = 0.0, hi = 1.0;
                detail::Vec2 y_hi = step.y, y_lo = y;
                const double tol = 1e-12 * span;
                while ((hi - lo) * h > tol) {
                    const double mid = 0.5 * (lo + hi);
                    const detail::Vec2 v = probe(mid);
                    if (beyond(v)) {
                        hi = mid;
                        y_hi = v;
                    } else {
                        lo = mid;
                        y_lo = v;
                    }
                }
                if (lo > 0.0) {
                    const double xl = x + lo * h;
                    traj.samples.push_back({dir * xl, y_lo[1], y_lo[0]});
                    double slope;
                    try {
                        slope = dir * sys(xl, y_lo)[1];
                    } catch (const detail::HFailure&) {
                        slope = std::numeric_limits<double>::quiet_NaN();
                    }
                    traj.slopes.push_back(slope);
                }
                const double s_hi = dir * (x + hi * h);
                traj.blowup_probe = ProfileState{s_hi, y_hi[1], y_hi[0]};
                const double w_sign = std::isfinite(y_hi[1]) ? y_hi[1] : y[1];
                traj.stop = stop::BlowUp{dir * (x + 0.5 * (lo + hi) * h), sign_of(w_sign)};
                ++traj.accepted_steps;
                return traj;
            }

            facold = std::max(step.err, 1e-4);
            prev_abs_w = std::fabs(y[1]);
            x = last ? x_end : x + h;
            y = step.y;
            k1 = step.k7;
            ++traj.accepted_steps;
            traj.samples.push_back({dir * x, y[1], y[0]});
            traj.slopes.push_back(dir * k1[1]);
            if (last) {
                traj.stop = stop::ReachedEnd{s_target};
                return traj;
            }
            double fac = fac11 / std::pow(facold, beta);
            fac = std::max(facc2, std::min(facc1, fac / safe));
            double h_new = h / fac;
            if (rejected_last) h_new = std::min(h_new, h);
            rejected_last = false;
            h = std::min(h_new, span);
        } else {
            ++traj.rejected_steps;
            rejected_last = true;
            h = h / std::min(facc1, fac11 / safe);
        }
    }
}

namespace detail {

inline ProfileState hermite(const ProfileState& a, double ma, const ProfileState& b, double mb, double s) {
    const double d = b.s - a.s;
    const double t = (s - a.s) / d;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    ProfileState out;
    out.s = s;
    out.w = h00 * a.w + h10 * d * ma + h01 * b.w + h11 * d * mb;
    out.f = h00 * a.f + h10 * d * a.w + h01 * b.f + h11 * d * b.w;
    return out;
}

} // namespace detail

/// Cubic Hermite interpolation of a trajectory on an arbitrary grid. Grid
/// points must lie within the covered s-range; at stored sample points the
/// stored state is returned unchanged.
inline std::vector<ProfileState> resample(const Trajectory& traj, std::span<const double> grid) {
    std::vector<ProfileState> out;
    out.reserve(grid.size());
    if (traj.samples.empty()) {
        if (!grid.empty()) throw InputError("resample: empty trajectory");
        return out;
    }
    const double dir = traj.direction == Direction::forward ? 1.0 : -1.0;
    const auto& smp = traj.samples;
    const double lo = dir * smp.front().s;
    const double hi = dir * smp.back().s;
    for (double s : grid) {
        const double x = dir * s;
        if (!(x >= lo && x <= hi))
            throw InputError("resample: s = " + std::to_string(s) + " outside trajectory range");
        // first sample strictly beyond x (in integration order)
        auto it = std::upper_bound(smp.begin(), smp.end(), x,
                                   [dir](double v, const ProfileState& p) { return v < dir * p.s; });
        if (it == smp.end()) {
            out.push_back(smp.back());
            continue;
        }
        const std::size_t j = static_cast<std::size_t>(it - smp.begin());
        const std::size_t i = j - 1;
        if (smp[i].s == s) {
            out.push_back(smp[i]);
            continue;
        }
        out.push_back(detail::hermite(smp[i], traj.slopes[i], smp[j], traj.slopes[j], s));
    }
    return out;
}

inline ProfileState resample_at(const Trajectory& traj, double s) {
    return resample(traj, std::span<const double>(&s, 1)).front();
}

} // namespace tsol
