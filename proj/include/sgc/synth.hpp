#pragma once

#include "sgc/bundle.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sgc {

/// Planar rectangle: center, unit normal, in-plane u axis, half extents.
struct PlaneSpec {
    Vec3 center = Vec3(0.0, 0.0, 5.0);
    Vec3 normal = Vec3(0.0, 0.0, -1.0);
    Vec3 axis_u = Vec3(1.0, 0.0, 0.0);
    double half_u = 1.0;
    double half_v = 1.0;

    Vec3 axis_v() const { return normal.cross(axis_u).normalized(); }
    double offset() const { return normal.dot(center); }
};

/// Image-space rectangle that moves by (du, dv) per frame and sits in front of the scene.
struct DynamicPatch {
    double x0 = 0.0;
    double y0 = 0.0;
    double width = 10.0;
    double height = 10.0;
    double du = 1.0;
    double dv = 0.0;
    double depth = 1.0;
};

struct Violation {
    int plane_id = 0;
    RelativePose extra_motion;
};

/// Generator for a linear camera path: center c0 + k v, camera-to-world
/// orientation exp(r0 + k w).
struct LinearTrajectory {
    int frames = 8;
    Vec3 start_center = Vec3::Zero();
    Vec3 velocity = Vec3::Zero();
    Vec3 start_rotation = Vec3::Zero();
    Vec3 angular_velocity = Vec3::Zero();

    std::vector<Pose> poses() const;
};

struct SceneSpec {
    std::string video_id = "synth";
    int width = 160;
    int height = 120;
    Intrinsics intrinsics{200.0, 200.0, 79.5, 59.5};
    std::vector<PlaneSpec> planes;
    std::vector<Pose> trajectory;  // world-to-camera, one per frame
    int track_density = 400;       // world samples per plane
    std::optional<DynamicPatch> dynamic_patch;
    std::optional<Violation> violation;
    double depth_noise = 0.0;  // Gaussian sigma, scene units
    double track_noise = 0.0;  // Gaussian sigma, pixels, on both endpoints
    bool render_rgb = false;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Where a track came from; kept beside the bundle so violations can be
/// re-projected exactly.
struct TrackSource {
    int plane = -1;  // -1 = dynamic patch
    Vec3 world = Vec3::Zero();
    Vec2 exact_prev = Vec2::Zero();  // noiseless, double precision
    Vec2 exact_curr = Vec2::Zero();
    Vec2 noise_prev = Vec2::Zero();
    Vec2 noise_curr = Vec2::Zero();
};

struct SynthScene {
    SceneSpec spec;
    GeometryBundle bundle;
    std::vector<std::vector<TrackSource>> sources;  // parallel to bundle.tracks
};

struct RayHit {
    double depth = 0.0;
    int plane = -1;
};

/// Nearest plane intersection of the ray through pixel (u, v) of frame k.
std::optional<RayHit> cast_ray(const SceneSpec& spec, std::size_t frame, const Vec2& pixel);

/// Renders exact depth, masks, poses and tracks. Throws Error(generation)
/// when the camera meets a plane.
SynthScene render_bundle(const SceneSpec& spec);

/// Re-projects tracks whose source lies on plane_id under extra ∘ global
/// motion; everything else stays ground truth.
SynthScene inject_violation(const SynthScene& scene, int plane_id, const RelativePose& extra_motion);

}  // namespace sgc
