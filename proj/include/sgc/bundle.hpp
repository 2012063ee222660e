#pragma once

#include "sgc/clustering.hpp"
#include "sgc/geometry.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sgc {

struct FrameData {
    DepthMap depth;
    StaticMask mask;
    Intrinsics intrinsics;
    // World-to-camera pose exactly as stored; orthogonalized on use.
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();
    std::vector<std::uint8_t> rgb;  // width*height*3 when the bundle carries RGB, else empty
};

/// Canonical per-video input: per-frame depth, static mask, intrinsics and
/// world-to-camera pose, plus one track list per consecutive frame pair.
struct GeometryBundle {
    std::string video_id;
    int width = 0;
    int height = 0;
    bool has_rgb = false;
    std::vector<FrameData> frames;
    std::vector<std::vector<TrackPair>> tracks;  // tracks[i] pairs frame i with frame i+1
    std::string provenance;                      // compact JSON object text, or empty

    std::size_t frame_count() const noexcept { return frames.size(); }
    std::size_t pair_count() const noexcept { return frames.empty() ? 0 : frames.size() - 1; }

    /// SO(3)-projected world-to-camera pose of frame i.
    Pose world_to_camera(std::size_t i) const;
    /// Motion from camera i-1 to camera i, for i >= 1.
    RelativePose global_relative_pose(std::size_t i) const;

    /// Structural checks; throws Error(schema) naming the offending field.
    void validate() const;
};

inline constexpr double kPoseOrthoTolerance = 1e-3;

}  // namespace sgc
