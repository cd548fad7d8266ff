#pragma once

/// Assembly of the soliton from a profile trajectory: the height function
/// f = f1 + int w (carried by the integrator's f channel, only shifted here),
/// the graph chart F(sigma, s) = (phi^{-1}(sigma, s), f(s)) sampled as a mesh,
/// and the rotational soliton-equation residual.

#include "tsol/classifier.hpp"
#include "tsol/errors.hpp"
#include "tsol/geometry.hpp"
#include "tsol/integrator.hpp"
#include "tsol/profile_ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace tsol {

struct SolitonProfile {
    std::string geometry;
    int n = 2;
    Signature signature;
    /// Trajectory with f shifted so that f(anchor) = f1 (launched) or
    /// f(first sample) = f1 (interior start).
    Trajectory trajectory;
    Outcome outcome = outcome::GlobalToEnd{};
    double f1 = 0.0;
    std::map<std::string, std::string> metadata;
};

/// Applies the affine shift of the f channel. Idempotent for a fixed f1.
inline Trajectory rebase(Trajectory traj, double f1) {
    double reference;
    if (traj.anchor)
        reference = traj.anchor->f;
    else if (!traj.samples.empty())
        reference = traj.samples.front().f;
    else
        return traj;
    const double shift = f1 - reference;
    if (traj.anchor) traj.anchor->f = f1;
    for (ProfileState& p : traj.samples) p.f += shift;
    if (traj.blowup_probe) traj.blowup_probe->f += shift;
    return traj;
}

inline SolitonProfile build_profile(const Trajectory& traj, double f1, const GeometrySpec& geom, Signature sig,
                                    const ClassifierConfig& ccfg = {}) {
    SolitonProfile p;
    p.geometry = geom.name;
    p.n = geom.n;
    p.signature = sig;
    p.f1 = f1;
    p.trajectory = rebase(traj, f1);
    p.outcome = classify(p.trajectory, geom, sig, ccfg);
    p.metadata["geometry"] = geom.description;
    p.metadata["stop"] = stop_name(traj.stop);
    if (traj.anchor) p.metadata["anchor_s"] = std::to_string(traj.anchor->s);
    for (std::size_t i = 0; i < geom.assumptions.size(); ++i)
        p.metadata["assumption_" + std::to_string(i)] = geom.assumptions[i];
    return p;
}

struct SurfaceMesh {
    /// Coordinates per vertex (3, or 4 when f is an extra coordinate).
    int dim = 3;
    std::vector<double> vertices;  // dim values per vertex
    std::vector<std::array<std::size_t, 4>> quads;
    /// Vertices on the first and last ring.
    std::vector<std::size_t> boundary;
    std::size_t rings = 0;
    std::size_t ring_size = 0;

    std::size_t vertex_count() const { return vertices.size() / static_cast<std::size_t>(dim); }
    const double* vertex(std::size_t i) const { return vertices.data() + i * static_cast<std::size_t>(dim); }
};

namespace detail {

inline double quad_area(const SurfaceMesh& m, const std::array<std::size_t, 4>& q) {
    // half the norm of the wedge of the diagonals, valid in any dimension
    const double* p0 = m.vertex(q[0]);
    const double* p1 = m.vertex(q[1]);
    const double* p2 = m.vertex(q[2]);
    const double* p3 = m.vertex(q[3]);
    double aa = 0.0, bb = 0.0, ab = 0.0;
    for (int k = 0; k < m.dim; ++k) {
        const double d1 = p2[k] - p0[k];
        const double d2 = p3[k] - p1[k];
        aa += d1 * d1;
        bb += d2 * d2;
        ab += d1 * d2;
    }
    return 0.5 * std::sqrt(std::max(0.0, aa * bb - ab * ab));
}

} // namespace detail

/// Rings of the graph over the orbits at every s_stride-th sample.
inline SurfaceMesh build_mesh(const SolitonProfile& profile, const GeometrySpec& geom, std::size_t angular_resolution,
                              std::size_t s_stride = 1) {
    if (!geom.embedding) throw HypothesisError("geometry '" + geom.name + "' has no embedding");
    if (geom.n != 2) throw InputError("mesh export needs n = 2");
    if (angular_resolution < 3) throw InputError("angular resolution must be at least 3");
    if (s_stride == 0) throw InputError("s_stride must be positive");
    const auto& samples = profile.trajectory.samples;
    std::vector<std::size_t> ring_idx;
    for (std::size_t i = 0; i < samples.size(); i += s_stride) ring_idx.push_back(i);
    if (ring_idx.size() < 2) throw InputError("mesh needs at least two rings");

    const Embedding& emb = *geom.embedding;
    SurfaceMesh m;
    m.dim = emb.spatial_dim + 1;
    m.rings = ring_idx.size();
    m.ring_size = angular_resolution;
    m.vertices.reserve(m.rings * m.ring_size * static_cast<std::size_t>(m.dim));
    for (std::size_t r : ring_idx) {
        const ProfileState& p = samples[r];
        for (std::size_t k = 0; k < angular_resolution; ++k) {
            const double u = static_cast<double>(k) / static_cast<double>(emb.periodic ? angular_resolution
                                                                                       : angular_resolution - 1);
            std::vector<double> x = emb.point(p.s, u);
            x.push_back(p.f);
            m.vertices.insert(m.vertices.end(), x.begin(), x.end());
        }
    }
    const std::size_t wrap = emb.periodic ? angular_resolution : angular_resolution - 1;
    for (std::size_t r = 0; r + 1 < m.rings; ++r) {
        for (std::size_t k = 0; k < wrap; ++k) {
            const std::size_t k1 = (k + 1) % angular_resolution;
            const std::array<std::size_t, 4> q{r * angular_resolution + k, r * angular_resolution + k1,
                                               (r + 1) * angular_resolution + k1, (r + 1) * angular_resolution + k};
            if (!(detail::quad_area(m, q) > 1e-12))
                throw InputError("degenerate face between rings " + std::to_string(r) + " and " +
                                 std::to_string(r + 1) + "; increase the s stride");
            m.quads.push_back(q);
        }
    }
    for (std::size_t k = 0; k < angular_resolution; ++k) {
        m.boundary.push_back(k);
        m.boundary.push_back((m.rings - 1) * angular_resolution + k);
    }
    return m;
}

namespace detail {

// w'' of the rotational profile equation w' = (1 + w^2)(1 - k w / s)
inline double bowl_second_derivative(double k, double s, double w, double dw) {
    return 2.0 * w * dw * (1.0 - k * w / s) + (1.0 + w * w) * (k * w / (s * s) - k * dw / s);
}

} // namespace detail

/// Residual of the rotational translating-soliton equation in R^{n+1}
///     w' / (1+w^2)^{3/2} + (n-1) w / (s sqrt(1+w^2)) - 1 / sqrt(1+w^2)
/// at s. w' is not re-evaluated from w(s), which would make the residual
/// vanish identically: it comes from the slopes the integrator stored, and
/// between samples w and w' are read off the quintic Hermite interpolant
/// built from (w, w', w'') at both ends.
inline double mean_curvature_residual(const Trajectory& profile, int n, double s) {
    if (n < 2) throw InputError("residual needs n >= 2");
    if (profile.samples.size() < 2) throw InputError("residual needs at least two samples");
    const auto& smp = profile.samples;
    const double dir = profile.direction == Direction::forward ? 1.0 : -1.0;
    if (!(dir * s >= dir * smp.front().s && dir * s <= dir * smp.back().s))
        throw InputError("residual: s = " + std::to_string(s) + " outside the profile range");
    if (!(s > 0.0)) throw InputError("residual: s must be positive");

    auto it = std::upper_bound(smp.begin(), smp.end(), dir * s,
                               [dir](double v, const ProfileState& p) { return v < dir * p.s; });
    std::size_t j = static_cast<std::size_t>(it - smp.begin());
    if (j == smp.size()) j = smp.size() - 1;
    const std::size_t i = j - 1;

    const double k = n - 1;
    double w, dw;
    if (smp[i].s == s || smp[j].s == s) {
        const std::size_t at = smp[i].s == s ? i : j;
        w = smp[at].w;
        dw = profile.slopes[at];
    } else {
        const double d = smp[j].s - smp[i].s;
        const double t = (s - smp[i].s) / d;
        const double p0 = smp[i].w, p1 = smp[j].w;
        const double m0 = d * profile.slopes[i], m1 = d * profile.slopes[j];
        const double a0 = d * d * detail::bowl_second_derivative(k, smp[i].s, p0, profile.slopes[i]);
        const double a1 = d * d * detail::bowl_second_derivative(k, smp[j].s, p1, profile.slopes[j]);
        const double dp = p1 - p0;
        const double c3 = 10 * dp - 6 * m0 - 4 * m1 - (3 * a0 - a1) / 2;
        const double c4 = -15 * dp + 8 * m0 + 7 * m1 + (3 * a0 - 2 * a1) / 2;
        const double c5 = 6 * dp - 3 * m0 - 3 * m1 - (a0 - a1) / 2;
        w = p0 + t * (m0 + t * (a0 / 2 + t * (c3 + t * (c4 + t * c5))));
        dw = (m0 + t * (a0 + t * (3 * c3 + t * (4 * c4 + t * 5 * c5)))) / d;
    }
    const double root = std::sqrt(1.0 + w * w);
    return dw / (root * root * root) + k * w / (s * root) - 1.0 / root;
}

} // namespace tsol
