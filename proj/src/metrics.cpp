#include "sgc/metrics.hpp"

#include "sgc/common.hpp"
#include "sgc/parallel.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace sgc {

std::string_view metric_name(Metric m) {
    switch (m) {
        case Metric::rot_var_local: return "rot_var_local";
        case Metric::trans_var_local: return "trans_var_local";
        case Metric::rot_var_global: return "rot_var_global";
        case Metric::trans_var_global: return "trans_var_global";
        case Metric::depth_error: return "depth_error";
    }
    return "unknown";
}

Metric metric_from_name(std::string_view name) {
    for (const auto m : kAllMetrics)
        if (metric_name(m) == name) return m;
    throw Error(ErrorKind::invalid_argument, fmt::format("unknown metric '{}'", name));
}

std::pair<double, double> local_variances(std::span<const RelativePose> local_poses) {
    if (local_poses.empty()) throw Error(ErrorKind::unevaluable, "no local poses");
    std::vector<Rotation> rs;
    rs.reserve(local_poses.size());
    Vec3 t_mean = Vec3::Zero();
    for (const auto& p : local_poses) {
        rs.push_back(p.rotation);
        t_mean += p.translation;
    }
    t_mean /= static_cast<double>(local_poses.size());
    const Rotation r_mean = rotation_mean(rs);
    double rot = 0.0;
    double trans = 0.0;
    for (const auto& p : local_poses) {
        const double a = ang_dist(p.rotation, r_mean);
        rot += a * a;
        trans += (p.translation - t_mean).squaredNorm();
    }
    const auto n = static_cast<double>(local_poses.size());
    return {rot / n, trans / n};
}

std::pair<double, double> global_variances(std::span<const RelativePose> local_poses, const RelativePose& global_pose) {
    if (local_poses.empty()) throw Error(ErrorKind::unevaluable, "no local poses");
    double rot = 0.0;
    double trans = 0.0;
    for (const auto& p : local_poses) {
        const double a = ang_dist(p.rotation, global_pose.rotation);
        rot += a * a;
        trans += (p.translation - global_pose.translation).squaredNorm();
    }
    const auto n = static_cast<double>(local_poses.size());
    return {rot / n, trans / n};
}

std::optional<DepthConsistency> depth_consistency(const DepthMap& depth_prev, const DepthMap& depth_curr,
                                                  const StaticMask& mask_curr, const RelativePose& global_pose,
                                                  const Intrinsics& k_prev, const Intrinsics& k_curr,
                                                  const StaticMask* mask_prev) {
    const int w = depth_curr.width;
    const int h = depth_curr.height;
    if (mask_curr.width != w || mask_curr.height != h)
        throw Error(ErrorKind::invalid_argument, "mask and depth dimensions differ");
    if (mask_prev && (mask_prev->width != depth_prev.width || mask_prev->height != depth_prev.height))
        throw Error(ErrorKind::invalid_argument, "previous mask and depth dimensions differ");

    std::vector<double> zbuf(static_cast<std::size_t>(w) * h, std::numeric_limits<double>::infinity());
    for (int v = 0; v < depth_prev.height; ++v) {
        for (int u = 0; u < depth_prev.width; ++u) {
            if (mask_prev && !mask_prev->at(u, v)) continue;
            const auto x = unproject(Vec2(u, v), depth_prev.at(u, v), k_prev);
            if (!x) continue;
            const Vec3 y = global_pose.transform(*x);
            const auto p = project(y, k_curr);
            if (!p) continue;
            const auto px = nearest_pixel(*p, w, h);
            if (!px) continue;
            double& z = zbuf[static_cast<std::size_t>(px->v) * w + px->u];
            z = std::min(z, y.z());
        }
    }

    double sum = 0.0;
    std::size_t count = 0;
    for (int v = 0; v < h; ++v) {
        for (int u = 0; u < w; ++u) {
            const double z = zbuf[static_cast<std::size_t>(v) * w + u];
            if (!std::isfinite(z) || !mask_curr.at(u, v) || !depth_curr.valid_at(u, v)) continue;
            sum += std::abs(z - depth_curr.at(u, v));
            ++count;
        }
    }
    if (count == 0) return std::nullopt;
    return DepthConsistency{sum / static_cast<double>(count), count};
}

std::uint64_t subregion_seed(std::uint64_t base, std::string_view video_id, std::size_t frame_index, int subregion) {
    std::uint64_t s = combine_seed(base, hash_string(video_id));
    s = combine_seed(s, frame_index);
    return combine_seed(s, static_cast<std::uint64_t>(subregion));
}

PairMetrics pair_metrics(const GeometryBundle& bundle, std::size_t i, const ScoringConfig& cfg) {
    if (i == 0 || i >= bundle.frame_count())
        throw Error(ErrorKind::invalid_argument, fmt::format("frame index {} has no predecessor in bundle", i));
    const FrameData& prev = bundle.frames[i - 1];
    const FrameData& curr = bundle.frames[i];
    const int w = bundle.width;
    const int h = bundle.height;

    PairMetrics out;
    out.frame_index = i;
    const RelativePose global = bundle.global_relative_pose(i);
    out.global_trans_mag = global.translation.norm();
    out.global_rot_mag = ang_dist(global.rotation, Rotation::identity());

    ClusterConfig ccfg = cfg.cluster;
    ccfg.seed = combine_seed(combine_seed(cfg.cluster.seed, hash_string(bundle.video_id)), i);
    std::vector<SubRegion> regions;
    try {
        regions = cluster_static_depth(curr.depth, curr.mask, ccfg);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::empty_region) throw;
        spdlog::debug("{} pair {}: no static pixels with valid depth", bundle.video_id, i);
    }

    const std::vector<int> labels = label_raster(regions, w, h);
    std::vector<std::vector<Correspondence>> buckets(regions.size());
    for (const auto& t : bundle.tracks[i - 1]) {
        const auto pc = nearest_pixel(t.curr(), w, h);
        if (!pc) continue;
        const int label = labels[static_cast<std::size_t>(pc->v) * w + pc->u];
        if (label < 0) continue;
        const auto pp = nearest_pixel(t.prev(), w, h);
        if (!pp) continue;
        const auto x = unproject(t.prev(), prev.depth.at(pp->u, pp->v), prev.intrinsics);
        if (!x) continue;
        buckets[label].push_back({*x, t.curr()});
    }

    std::vector<RelativePose> locals;
    for (std::size_t j = 0; j < regions.size(); ++j) {
        SubregionDiagnostics diag;
        diag.id = regions[j].id;
        diag.depth_center = regions[j].depth_center;
        diag.pixel_count = regions[j].pixels.size();
        diag.correspondence_count = buckets[j].size();
        PnpConfig pcfg = cfg.pnp;
        pcfg.seed = subregion_seed(cfg.pnp.seed, bundle.video_id, i, regions[j].id);
        try {
            const PnpResult r = solve_pnp_ransac(buckets[j], curr.intrinsics, pcfg);
            locals.push_back(r.pose);
            diag.inlier_count = r.inlier_count;
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::insufficient_points) {
                diag.status = SubregionStatus::insufficient_points;
            } else if (e.kind() == ErrorKind::no_consensus) {
                diag.status = SubregionStatus::no_consensus;
            } else {
                throw;
            }
        }
        out.subregions.push_back(diag);
    }

    out.n_subregions = static_cast<int>(locals.size());
    if (!locals.empty()) {
        out.evaluable = true;
        std::tie(out.rot_var_local, out.trans_var_local) = local_variances(locals);
        std::tie(out.rot_var_global, out.trans_var_global) = global_variances(locals, global);
    }
    if (const auto dc = depth_consistency(prev.depth, curr.depth, curr.mask, global, prev.intrinsics,
                                          curr.intrinsics, &prev.mask)) {
        out.depth_evaluable = true;
        out.depth_error = dc->error;
        out.depth_valid_pixels = dc->valid_pixels;
    }
    return out;
}

VideoRawMetrics compute_video_metrics(const GeometryBundle& bundle, const ScoringConfig& cfg) {
    cfg.validate();
    bundle.validate();
    VideoRawMetrics out;
    out.video_id = bundle.video_id;
    out.pairs.resize(bundle.pair_count());
    parallel_for(bundle.pair_count(), cfg.threads,
                 [&](std::size_t p) { out.pairs[p] = pair_metrics(bundle, p + 1, cfg); });

    MetricVector sums{};
    double trans = 0.0;
    double rot = 0.0;
    for (const auto& pm : out.pairs) {
        trans += pm.global_trans_mag;
        rot += pm.global_rot_mag;
        if (!pm.evaluable) continue;
        ++out.pair_count;
        const MetricVector v = pm.values();
        for (const auto m : kAllMetrics) {
            if (m == Metric::depth_error) continue;
            at(sums, m) += at(v, m);
        }
        if (pm.depth_evaluable) {
            ++out.depth_pair_count;
            at(sums, Metric::depth_error) += pm.depth_error;
        }
    }
    const auto pairs = static_cast<double>(out.pairs.size());
    out.trans_mag = trans / pairs;
    out.rot_mag = rot / pairs;
    if (out.pair_count == 0)
        throw Error(ErrorKind::unevaluable, fmt::format("video '{}' has no evaluable frame pair", bundle.video_id));
    if (out.depth_pair_count == 0)
        throw Error(ErrorKind::unevaluable,
                    fmt::format("video '{}' has no frame pair with depth overlap", bundle.video_id));
    for (const auto m : kAllMetrics) {
        const int n = m == Metric::depth_error ? out.depth_pair_count : out.pair_count;
        at(out.means, m) = at(sums, m) / n;
    }
    return out;
}

std::pair<double, double> camera_dynamics(const GeometryBundle& bundle) {
    if (bundle.pair_count() == 0) throw Error(ErrorKind::invalid_argument, "bundle has no frame pairs");
    double trans = 0.0;
    double rot = 0.0;
    for (std::size_t i = 1; i < bundle.frame_count(); ++i) {
        const RelativePose g = bundle.global_relative_pose(i);
        trans += g.translation.norm();
        rot += ang_dist(g.rotation, Rotation::identity());
    }
    const auto n = static_cast<double>(bundle.pair_count());
    return {trans / n, rot / n};
}

namespace {
double minmax_scaled(double x, double lo, double hi) {
    if (!(hi > lo)) return 0.0;
    return std::clamp((x - lo) / (hi - lo), 0.0, 1.0);
}
}  // namespace

EcdValue compute_ecd(double trans_mag, double rot_mag, const EcdBounds& b) {
    EcdValue e;
    e.trans_mag = trans_mag;
    e.rot_mag = rot_mag;
    e.trans_scaled = minmax_scaled(trans_mag, b.trans_min, b.trans_max);
    e.rot_scaled = minmax_scaled(rot_mag, b.rot_min, b.rot_max);
    e.ecd = std::max(e.trans_scaled, e.rot_scaled);
    return e;
}

EcdValue compute_ecd(const GeometryBundle& bundle, const EcdBounds& bounds) {
    const auto [t, r] = camera_dynamics(bundle);
    return compute_ecd(t, r, bounds);
}

}  // namespace sgc
