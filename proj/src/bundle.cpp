#include "sgc/bundle.hpp"

#include "sgc/common.hpp"

#include <fmt/format.h>

namespace sgc {

Pose GeometryBundle::world_to_camera(std::size_t i) const {
    const auto& f = frames.at(i);
    return {Rotation::project(f.rotation), f.translation};
}

RelativePose GeometryBundle::global_relative_pose(std::size_t i) const {
    return relative_pose(world_to_camera(i - 1), world_to_camera(i));
}

void GeometryBundle::validate() const {
    if (frames.size() < 2)
        throw Error(ErrorKind::schema, fmt::format("bundle has {} frames; at least 2 are required", frames.size()), {},
                    "frame_count");
    if (width <= 0 || height <= 0) throw Error(ErrorKind::schema, "non-positive resolution", {}, "resolution");
    if (tracks.size() != frames.size() - 1)
        throw Error(ErrorKind::schema, fmt::format("expected {} track lists, found {}", frames.size() - 1, tracks.size()),
                    {}, "tracks");
    const auto npix = static_cast<std::size_t>(width) * height;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const auto& f = frames[i];
        const std::string where = fmt::format("frames[{}]", i);
        if (f.depth.width != width || f.depth.height != height || f.depth.values.size() != npix)
            throw Error(ErrorKind::schema, "depth raster does not match resolution", {}, where + ".depth");
        if (f.mask.width != width || f.mask.height != height || f.mask.bits.size() != npix)
            throw Error(ErrorKind::schema, "mask raster does not match resolution", {}, where + ".mask");
        for (const auto b : f.mask.bits)
            if (b > 1) throw Error(ErrorKind::schema, "mask values must be 0 or 1", {}, where + ".mask");
        if (!f.intrinsics.valid())
            throw Error(ErrorKind::schema, "intrinsics require finite values and fx, fy > 0", {}, where + ".intrinsics");
        if (!f.rotation.allFinite() || !f.translation.allFinite())
            throw Error(ErrorKind::schema, "pose has non-finite entries", {}, where + ".pose");
        const double dev = (Rotation::project(f.rotation).matrix() - f.rotation).norm();
        if (!(dev < kPoseOrthoTolerance))
            throw Error(ErrorKind::schema, fmt::format("pose rotation deviates from SO(3) by {:.3g}", dev), {},
                        where + ".pose");
        if (has_rgb != !f.rgb.empty() || (has_rgb && f.rgb.size() != npix * 3))
            throw Error(ErrorKind::schema, "rgb raster inconsistent with manifest flag", {}, where + ".rgb");
    }
}

}  // namespace sgc
