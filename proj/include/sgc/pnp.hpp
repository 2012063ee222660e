#pragma once

#include "sgc/geometry.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <vector>

namespace sgc {

/// 3D point in the previous camera frame and its tracked pixel in the current frame.
struct Correspondence {
    Vec3 point3d = Vec3::Zero();
    Vec2 point2d = Vec2::Zero();
};

struct PnpConfig {
    double inlier_thresh = 8.0;  // pixels
    double confidence = 0.99;
    int max_iters = 100;
    int min_points = 4;
    int refine_iters = 20;
    std::uint64_t seed = 0;

    void validate() const;
};

struct PnpResult {
    RelativePose pose;
    int inlier_count = 0;
    double mean_reproj_error = 0.0;
    std::vector<std::uint8_t> inliers;  // one flag per input correspondence
    int ransac_iterations = 0;
};

/// Pixel distance between the projected transformed point and the observation;
/// +inf when the point lands behind the camera.
double reprojection_error(const RelativePose& pose, const Correspondence& c, const Intrinsics& k);

using ReprojJacobian = Eigen::Matrix<double, 2, 6>;

/// Jacobian of the residual project(R X + t) - p with respect to the update
/// (w, dt) applied as R <- exp(w) R, t <- t + dt, evaluated at w = dt = 0.
ReprojJacobian reprojection_jacobian(const RelativePose& pose, const Correspondence& c, const Intrinsics& k);

/// Apply a 6-vector increment (w, dt) using the same convention as the Jacobian.
RelativePose apply_increment(const RelativePose& pose, const Eigen::Matrix<double, 6, 1>& delta);

/// Sum of squared reprojection errors.
double reprojection_cost(const RelativePose& pose, std::span<const Correspondence> corrs, const Intrinsics& k);

struct RefineResult {
    RelativePose pose;
    std::vector<double> cost_trace;  // cost of the accepted estimate after each iteration, [0] = initial
    int iterations = 0;
    bool warning = false;  // non-finite Jacobian encountered; pose is the input
};

/// Damped Gauss-Newton (Levenberg-Marquardt) on the summed squared reprojection
/// error. Only cost-decreasing steps are accepted.
RefineResult refine_pose(const RelativePose& init, std::span<const Correspondence> inliers, const Intrinsics& k,
                         int iters);

/// Minimal solver: up to four poses mapping the three world points onto the
/// three unit bearing vectors (Grunert's quartic).
std::vector<RelativePose> solve_p3p(std::span<const Vec3, 3> bearings, std::span<const Vec3, 3> points);

/// RANSAC over 4-point samples (P3P on three, the fourth disambiguates),
/// adaptive termination, then refinement on the consensus set.
/// Throws Error(insufficient_points) or Error(no_consensus).
PnpResult solve_pnp_ransac(std::span<const Correspondence> corrs, const Intrinsics& k, const PnpConfig& cfg);

}  // namespace sgc
