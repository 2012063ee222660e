#pragma once

// Scene builders shared by the unit tests and the acceptance suite.

#include "sgc/random.hpp"
#include "sgc/synth.hpp"

#include <fmt/format.h>

#include <cstdint>
#include <string>

namespace sgc::test {

inline PlaneSpec fronto_plane(double x_min, double x_max, double depth, double half_v) {
    PlaneSpec p;
    p.center = Vec3(0.5 * (x_min + x_max), 0.0, depth);
    p.normal = Vec3(0.0, 0.0, -1.0);
    p.axis_u = Vec3(1.0, 0.0, 0.0);
    p.half_u = 0.5 * (x_max - x_min);
    p.half_v = half_v;
    return p;
}

/// Two fronto-parallel planes whose image footprints stay separated by a gap of
/// invalid depth for the whole trajectory, so no pixel ever straddles an occlusion
/// edge. Camera motion combines translation and a small rotation about a random axis.
inline SceneSpec gapped_rigid_scene(std::uint64_t seed, int frames = 6) {
    Rng rng(seed);
    SceneSpec s;
    s.video_id = fmt::format("rigid_{:03d}", seed);
    s.seed = seed;
    const double z_near = rng.uniform(3.5, 4.5);
    const double z_far = rng.uniform(6.5, 8.0);
    // Near plane spans the left part of the view, far plane the right; the
    // footprints are roughly 16 px apart at f = 200.
    s.planes.push_back(fronto_plane(-3.0, -0.04 * z_near, z_near, 2.0));
    s.planes.push_back(fronto_plane(0.05 * z_far, 0.05 * z_far + 5.0, z_far, 3.0));

    LinearTrajectory traj;
    traj.frames = frames;
    traj.velocity = Vec3(rng.uniform(0.0, 0.05), rng.uniform(-0.03, 0.03), rng.uniform(-0.05, 0.05));
    Vec3 axis(rng.normal(), rng.normal(), rng.normal());
    axis.normalize();
    traj.angular_velocity = rng.uniform(0.004, 0.008) * axis;
    s.trajectory = traj.poses();
    s.track_density = 600;
    return s;
}

/// Two overlapping planes with a real occlusion edge and noisy tracks: a
/// baseline whose variances and depth error are small but nonzero.
inline SceneSpec noisy_occluding_scene(std::uint64_t seed, int frames = 6) {
    Rng rng(seed);
    SceneSpec s;
    s.video_id = fmt::format("occl_{:03d}", seed);
    s.seed = seed;
    const double z_near = rng.uniform(3.5, 4.5);
    const double z_far = rng.uniform(7.0, 8.0);
    s.planes.push_back(fronto_plane(-3.0, 0.0, z_near, 2.0));
    s.planes.push_back(fronto_plane(-5.0, 5.0, z_far, 3.0));
    LinearTrajectory traj;
    traj.frames = frames;
    traj.velocity = Vec3(rng.uniform(0.02, 0.05), 0.0, rng.uniform(-0.03, 0.03));
    // No rotation: each fronto-parallel plane keeps a single depth, so each is one subregion.
    s.trajectory = traj.poses();
    s.track_density = 600;
    s.track_noise = 0.5;
    return s;
}

}  // namespace sgc::test
