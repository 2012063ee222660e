#include "sgc/synth.hpp"

#include "sgc/common.hpp"
#include "sgc/random.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>

namespace sgc {

std::vector<Pose> LinearTrajectory::poses() const {
    std::vector<Pose> out;
    out.reserve(frames);
    for (int k = 0; k < frames; ++k) {
        const Rotation r_cw = Rotation::exp(start_rotation + k * angular_velocity);
        const Vec3 c = start_center + k * velocity;
        const Rotation r_wc = r_cw.inverse();
        out.push_back({r_wc, -(r_wc * c)});
    }
    return out;
}

void SceneSpec::validate() const {
    if (width <= 0 || height <= 0) throw Error(ErrorKind::invalid_argument, "resolution must be positive", {}, "resolution");
    if (!intrinsics.valid()) throw Error(ErrorKind::invalid_argument, "invalid intrinsics", {}, "intrinsics");
    if (trajectory.size() < 2) throw Error(ErrorKind::invalid_argument, "trajectory needs at least 2 poses", {}, "trajectory");
    if (planes.empty()) throw Error(ErrorKind::invalid_argument, "scene needs at least one plane", {}, "planes");
    if (track_density < 4) throw Error(ErrorKind::invalid_argument, "track_density must be >= 4", {}, "track_density");
    for (std::size_t p = 0; p < planes.size(); ++p) {
        const auto& pl = planes[p];
        if (std::abs(pl.normal.norm() - 1.0) > 1e-6 || std::abs(pl.axis_u.norm() - 1.0) > 1e-6 ||
            std::abs(pl.normal.dot(pl.axis_u)) > 1e-6 || !(pl.half_u > 0.0) || !(pl.half_v > 0.0))
            throw Error(ErrorKind::invalid_argument, fmt::format("plane {} needs unit orthogonal normal/axis_u", p), {},
                        fmt::format("planes[{}]", p));
    }
    if (violation && (violation->plane_id < 0 || violation->plane_id >= static_cast<int>(planes.size())))
        throw Error(ErrorKind::invalid_argument, "violation references a missing plane", {}, "violation.plane_id");
    if (depth_noise < 0.0 || track_noise < 0.0)
        throw Error(ErrorKind::invalid_argument, "noise sigmas must be >= 0", {}, "depth_noise");
}

namespace {

bool inside_extent(const PlaneSpec& pl, const Vec3& x) {
    const Vec3 d = x - pl.center;
    return std::abs(d.dot(pl.axis_u)) <= pl.half_u && std::abs(d.dot(pl.axis_v())) <= pl.half_v;
}

Vec3 camera_center(const Pose& wc) { return -(wc.rotation.inverse() * wc.translation); }

bool patch_covers(const DynamicPatch& patch, std::size_t frame, const Vec2& p) {
    const double x0 = patch.x0 + patch.du * static_cast<double>(frame);
    const double y0 = patch.y0 + patch.dv * static_cast<double>(frame);
    return p.x() >= x0 && p.x() < x0 + patch.width && p.y() >= y0 && p.y() < y0 + patch.height;
}

void check_camera_clear(const SceneSpec& spec) {
    for (std::size_t p = 0; p < spec.planes.size(); ++p) {
        const auto& pl = spec.planes[p];
        for (std::size_t k = 0; k < spec.trajectory.size(); ++k) {
            const Vec3 c = camera_center(spec.trajectory[k]);
            const double d = pl.normal.dot(c) - pl.offset();
            if (std::abs(d) < 1e-9 && inside_extent(pl, c - d * pl.normal))
                throw Error(ErrorKind::generation, fmt::format("camera {} lies on plane {}", k, p));
            if (k == 0) continue;
            const Vec3 c0 = camera_center(spec.trajectory[k - 1]);
            const double d0 = pl.normal.dot(c0) - pl.offset();
            if ((d0 < 0.0) != (d < 0.0)) {
                const double s = d0 / (d0 - d);
                if (inside_extent(pl, c0 + s * (c - c0)))
                    throw Error(ErrorKind::generation, fmt::format("camera passes through plane {} between frames {} and {}",
                                                                   p, k - 1, k));
            }
        }
    }
}

// Pixel of world point x on plane `plane` in frame k, if in frame and unoccluded.
std::optional<Vec2> visible_pixel(const SceneSpec& spec, std::size_t k, const Vec3& x, int plane) {
    const Vec3 y = spec.trajectory[k].transform(x);
    const auto p = project(y, spec.intrinsics);
    if (!p || !nearest_pixel(*p, spec.width, spec.height)) return std::nullopt;
    if (spec.dynamic_patch && patch_covers(*spec.dynamic_patch, k, *p)) return std::nullopt;
    const auto hit = cast_ray(spec, k, *p);
    if (!hit || hit->plane != plane || std::abs(hit->depth - y.z()) > 1e-9 * (1.0 + y.z())) return std::nullopt;
    return p;
}

TrackPair to_track(const Vec2& prev, const Vec2& curr) {
    return {static_cast<float>(prev.x()), static_cast<float>(prev.y()), static_cast<float>(curr.x()),
            static_cast<float>(curr.y())};
}

std::array<std::uint8_t, 3> plane_color(const SceneSpec& spec, int plane, const Vec3& hit) {
    static constexpr std::array<std::array<std::uint8_t, 3>, 4> base{{{200, 120, 60}, {60, 160, 200}, {120, 200, 90},
                                                                       {190, 190, 190}}};
    const auto& pl = spec.planes[plane];
    const Vec3 d = hit - pl.center;
    const double cell = 0.25;
    const long cu = std::lround(std::floor(d.dot(pl.axis_u) / cell));
    const long cv = std::lround(std::floor(d.dot(pl.axis_v()) / cell));
    auto c = base[static_cast<std::size_t>(plane) % base.size()];
    if ((cu + cv) % 2 != 0)
        for (auto& x : c) x = static_cast<std::uint8_t>(x * 3 / 5);
    return c;
}

}  // namespace

std::optional<RayHit> cast_ray(const SceneSpec& spec, std::size_t frame, const Vec2& pixel) {
    const Pose& wc = spec.trajectory[frame];
    const Intrinsics& k = spec.intrinsics;
    const Vec3 dir_c((pixel.x() - k.cx) / k.fx, (pixel.y() - k.cy) / k.fy, 1.0);
    const Rotation r_cw = wc.rotation.inverse();
    const Vec3 dir_w = r_cw * dir_c;
    const Vec3 c = camera_center(wc);
    std::optional<RayHit> best;
    for (std::size_t p = 0; p < spec.planes.size(); ++p) {
        const auto& pl = spec.planes[p];
        const double denom = pl.normal.dot(dir_w);
        if (std::abs(denom) < 1e-12) continue;
        const double s = (pl.offset() - pl.normal.dot(c)) / denom;
        if (!(s > 0.0)) continue;
        if (!inside_extent(pl, c + s * dir_w)) continue;
        // dir_c has unit z, so the ray parameter is the camera-frame depth.
        if (!best || s < best->depth) best = RayHit{s, static_cast<int>(p)};
    }
    return best;
}

SynthScene render_bundle(const SceneSpec& spec) {
    spec.validate();
    check_camera_clear(spec);
    const int w = spec.width;
    const int h = spec.height;
    const std::size_t n = spec.trajectory.size();

    SynthScene scene;
    scene.spec = spec;
    GeometryBundle& b = scene.bundle;
    b.video_id = spec.video_id;
    b.width = w;
    b.height = h;
    b.has_rgb = spec.render_rgb;
    b.frames.resize(n);

    for (std::size_t k = 0; k < n; ++k) {
        FrameData& f = b.frames[k];
        f.depth = DepthMap(w, h, 0.0f);
        f.mask = StaticMask(w, h, true);
        f.intrinsics = spec.intrinsics;
        f.rotation = spec.trajectory[k].rotation.matrix();
        f.translation = spec.trajectory[k].translation;
        if (spec.render_rgb) f.rgb.assign(static_cast<std::size_t>(w) * h * 3, 0);
        Rng noise(combine_seed(spec.seed, 9000 + k));
        const Vec3 c = camera_center(spec.trajectory[k]);
        const Rotation r_cw = spec.trajectory[k].rotation.inverse();
        for (int v = 0; v < h; ++v) {
            for (int u = 0; u < w; ++u) {
                const Vec2 px(u, v);
                const std::size_t idx = static_cast<std::size_t>(v) * w + u;
                if (spec.dynamic_patch && patch_covers(*spec.dynamic_patch, k, px)) {
                    f.depth.values[idx] = static_cast<float>(spec.dynamic_patch->depth);
                    f.mask.bits[idx] = 0;
                    if (spec.render_rgb) {
                        f.rgb[idx * 3] = 220;
                        f.rgb[idx * 3 + 1] = 30;
                        f.rgb[idx * 3 + 2] = 30;
                    }
                    continue;
                }
                const auto hit = cast_ray(spec, k, px);
                if (!hit) continue;
                if (hit->depth < 1e-6)
                    throw Error(ErrorKind::generation, fmt::format("frame {}: camera touches plane {}", k, hit->plane));
                double d = hit->depth;
                if (spec.depth_noise > 0.0) {
                    const double noisy = d + spec.depth_noise * noise.normal();
                    if (noisy > 0.0) d = noisy;
                }
                f.depth.values[idx] = static_cast<float>(d);
                if (spec.render_rgb) {
                    const Vec3 dir_c((u - spec.intrinsics.cx) / spec.intrinsics.fx,
                                     (v - spec.intrinsics.cy) / spec.intrinsics.fy, 1.0);
                    const auto col = plane_color(spec, hit->plane, c + hit->depth * (r_cw * dir_c));
                    for (int ch = 0; ch < 3; ++ch) f.rgb[idx * 3 + ch] = col[ch];
                }
            }
        }
    }

    // World samples held fixed across frames.
    std::vector<std::vector<Vec3>> samples(spec.planes.size());
    for (std::size_t p = 0; p < spec.planes.size(); ++p) {
        Rng rng(combine_seed(spec.seed, 1000 + p));
        const auto& pl = spec.planes[p];
        for (int s = 0; s < spec.track_density; ++s) {
            const double a = rng.uniform(-pl.half_u, pl.half_u);
            const double bb = rng.uniform(-pl.half_v, pl.half_v);
            samples[p].push_back(pl.center + a * pl.axis_u + bb * pl.axis_v());
        }
    }
    std::vector<Vec2> patch_offsets;
    if (spec.dynamic_patch) {
        Rng rng(combine_seed(spec.seed, 2000));
        for (int s = 0; s < spec.track_density; ++s)
            patch_offsets.emplace_back(rng.uniform(0.0, spec.dynamic_patch->width),
                                       rng.uniform(0.0, spec.dynamic_patch->height));
    }

    b.tracks.resize(n - 1);
    scene.sources.resize(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        Rng noise(combine_seed(spec.seed, 5000 + k));
        auto add = [&](TrackSource src) {
            if (spec.track_noise > 0.0) {
                src.noise_prev = spec.track_noise * Vec2(noise.normal(), noise.normal());
                src.noise_curr = spec.track_noise * Vec2(noise.normal(), noise.normal());
            }
            b.tracks[k].push_back(to_track(src.exact_prev + src.noise_prev, src.exact_curr + src.noise_curr));
            scene.sources[k].push_back(src);
        };
        for (std::size_t p = 0; p < spec.planes.size(); ++p) {
            for (const auto& x : samples[p]) {
                const auto prev = visible_pixel(spec, k, x, static_cast<int>(p));
                if (!prev) continue;
                const auto curr = visible_pixel(spec, k + 1, x, static_cast<int>(p));
                if (!curr) continue;
                add({static_cast<int>(p), x, *prev, *curr, Vec2::Zero(), Vec2::Zero()});
            }
        }
        if (spec.dynamic_patch) {
            const auto& dp = *spec.dynamic_patch;
            for (const auto& off : patch_offsets) {
                const Vec2 prev(dp.x0 + dp.du * k + off.x(), dp.y0 + dp.dv * k + off.y());
                const Vec2 curr = prev + Vec2(dp.du, dp.dv);
                if (!nearest_pixel(prev, w, h) || !nearest_pixel(curr, w, h)) continue;
                add({-1, Vec3::Zero(), prev, curr, Vec2::Zero(), Vec2::Zero()});
            }
        }
    }

    if (spec.violation) return inject_violation(scene, spec.violation->plane_id, spec.violation->extra_motion);
    return scene;
}

SynthScene inject_violation(const SynthScene& scene, int plane_id, const RelativePose& extra) {
    if (plane_id < 0 || plane_id >= static_cast<int>(scene.spec.planes.size()))
        throw Error(ErrorKind::invalid_argument, fmt::format("plane {} does not exist", plane_id), {}, "plane_id");
    SynthScene out = scene;
    const auto& spec = scene.spec;
    for (std::size_t k = 0; k < out.sources.size(); ++k) {
        std::vector<TrackPair> tracks;
        std::vector<TrackSource> sources;
        for (std::size_t t = 0; t < scene.sources[k].size(); ++t) {
            TrackSource src = scene.sources[k][t];
            if (src.plane != plane_id) {
                tracks.push_back(scene.bundle.tracks[k][t]);
                sources.push_back(src);
                continue;
            }
            const Vec3 y = extra.transform(spec.trajectory[k + 1].transform(src.world));
            const auto p = project(y, spec.intrinsics);
            if (!p || !nearest_pixel(*p, spec.width, spec.height)) continue;
            src.exact_curr = *p;
            tracks.push_back(to_track(src.exact_prev + src.noise_prev, src.exact_curr + src.noise_curr));
            sources.push_back(src);
        }
        out.bundle.tracks[k] = std::move(tracks);
        out.sources[k] = std::move(sources);
    }
    return out;
}

}  // namespace sgc
