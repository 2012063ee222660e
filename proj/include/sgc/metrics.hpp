#pragma once

#include "sgc/bundle.hpp"
#include "sgc/clustering.hpp"
#include "sgc/geometry.hpp"
#include "sgc/pnp.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sgc {

/// The five SGC components in canonical order.
enum class Metric : int { rot_var_local = 0, trans_var_local, rot_var_global, trans_var_global, depth_error };

inline constexpr std::size_t kMetricCount = 5;
inline constexpr std::array<Metric, kMetricCount> kAllMetrics{Metric::rot_var_local, Metric::trans_var_local,
                                                              Metric::rot_var_global, Metric::trans_var_global,
                                                              Metric::depth_error};

std::string_view metric_name(Metric m);
/// Throws Error(invalid_argument) for unknown names.
Metric metric_from_name(std::string_view name);
/// Variance metrics get the ln(1 + x) transform during calibration; depth does not.
constexpr bool is_variance_metric(Metric m) { return m != Metric::depth_error; }

using MetricVector = std::array<double, kMetricCount>;

inline double& at(MetricVector& v, Metric m) { return v[static_cast<std::size_t>(m)]; }
inline double at(const MetricVector& v, Metric m) { return v[static_cast<std::size_t>(m)]; }

struct ScoringConfig {
    ClusterConfig cluster;
    PnpConfig pnp;
    int threads = 0;  // 0 = all cores

    void validate() const {
        cluster.validate();
        pnp.validate();
    }
};

enum class SubregionStatus { ok, insufficient_points, no_consensus };

struct SubregionDiagnostics {
    int id = 0;
    double depth_center = 0.0;
    std::size_t pixel_count = 0;
    std::size_t correspondence_count = 0;
    int inlier_count = 0;
    SubregionStatus status = SubregionStatus::ok;
};

struct PairMetrics {
    std::size_t frame_index = 0;  // i; the pair is (i-1, i)
    double rot_var_local = 0.0;
    double trans_var_local = 0.0;
    double rot_var_global = 0.0;
    double trans_var_global = 0.0;
    double depth_error = 0.0;
    int n_subregions = 0;
    bool evaluable = false;
    bool depth_evaluable = false;
    std::size_t depth_valid_pixels = 0;
    double global_trans_mag = 0.0;
    double global_rot_mag = 0.0;
    std::vector<SubregionDiagnostics> subregions;

    MetricVector values() const {
        return {rot_var_local, trans_var_local, rot_var_global, trans_var_global, depth_error};
    }
};

struct VideoRawMetrics {
    std::string video_id;
    MetricVector means{};
    int pair_count = 0;        // evaluable pose pairs
    int depth_pair_count = 0;  // evaluable pairs that also had a depth overlap
    double trans_mag = 0.0;    // mean global translation norm over all pairs
    double rot_mag = 0.0;      // mean global rotation angle over all pairs
    std::vector<PairMetrics> pairs;
};

struct EcdBounds {
    double trans_min = 0.0;
    double trans_max = 0.0;
    double rot_min = 0.0;
    double rot_max = 0.0;
};

struct EcdValue {
    double trans_mag = 0.0;
    double rot_mag = 0.0;
    double trans_scaled = 0.0;
    double rot_scaled = 0.0;
    double ecd = 0.0;
};

/// Mean squared angular / translational deviation of the local poses from
/// their own chordal / arithmetic mean. Throws Error(unevaluable) on empty input.
std::pair<double, double> local_variances(std::span<const RelativePose> local_poses);

/// Mean squared angular / translational deviation of the local poses from the global pose.
std::pair<double, double> global_variances(std::span<const RelativePose> local_poses, const RelativePose& global_pose);

struct DepthConsistency {
    double error = 0.0;
    std::size_t valid_pixels = 0;
};

/// Forward-splats D_prev into frame i with the global motion (nearest landing
/// pixel, z-buffered) and averages |warped - D_curr| over landing pixels that
/// are static in mask_curr with valid D_curr. When mask_prev is given only its
/// static pixels are splatted. nullopt when no pixel overlaps.
std::optional<DepthConsistency> depth_consistency(const DepthMap& depth_prev, const DepthMap& depth_curr,
                                                  const StaticMask& mask_curr, const RelativePose& global_pose,
                                                  const Intrinsics& k_prev, const Intrinsics& k_curr,
                                                  const StaticMask* mask_prev = nullptr);

/// All five components for the pair (frame_index - 1, frame_index).
PairMetrics pair_metrics(const GeometryBundle& bundle, std::size_t frame_index, const ScoringConfig& cfg);

/// Per-pair metrics for every consecutive pair plus per-metric means over
/// evaluable pairs. Pairs run concurrently; reductions are in frame order.
VideoRawMetrics compute_video_metrics(const GeometryBundle& bundle, const ScoringConfig& cfg);

/// Mean global translation norm and rotation angle over all consecutive pairs.
std::pair<double, double> camera_dynamics(const GeometryBundle& bundle);

EcdValue compute_ecd(double trans_mag, double rot_mag, const EcdBounds& bounds);
EcdValue compute_ecd(const GeometryBundle& bundle, const EcdBounds& bounds);

/// Seed for PnP on one sub-region; independent of evaluation order.
std::uint64_t subregion_seed(std::uint64_t base, std::string_view video_id, std::size_t frame_index, int subregion);

}  // namespace sgc
