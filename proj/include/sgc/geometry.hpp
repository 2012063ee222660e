#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/LU>

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sgc {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kRotationTolerance = 1e-9;

/// Element of SO(3). Construction checks orthonormality and det = +1.
class Rotation {
public:
    Rotation() : m_(Mat3::Identity()) {}

    /// Throws Error(invalid_argument) unless m is a rotation within kRotationTolerance.
    static Rotation from_matrix(const Mat3& m);
    /// Nearest rotation in Frobenius norm (SVD with sign correction).
    static Rotation project(const Mat3& m);
    /// Rodrigues: rotation by |w| radians about w / |w|.
    static Rotation exp(const Vec3& w);
    static Rotation about_axis(const Vec3& axis, double angle);
    static Rotation identity() { return Rotation(); }

    const Mat3& matrix() const noexcept { return m_; }
    Vec3 operator*(const Vec3& x) const { return m_ * x; }
    Rotation operator*(const Rotation& other) const;
    Rotation inverse() const;
    /// Axis-angle vector with |log| in [0, pi].
    Vec3 log() const;

private:
    explicit Rotation(const Mat3& m) : m_(m) {}
    Mat3 m_;
};

/// Rigid transform X' = R X + t. Used both for world-to-camera poses and
/// frame-to-frame relative motion.
struct Pose {
    Rotation rotation;
    Vec3 translation = Vec3::Zero();

    Vec3 transform(const Vec3& x) const { return rotation * x + translation; }
    /// (this ∘ other): apply other first.
    Pose compose(const Pose& other) const;
    Pose inverse() const;
    static Pose identity() { return {}; }
};

using RelativePose = Pose;

struct Intrinsics {
    double fx = 1.0;
    double fy = 1.0;
    double cx = 0.0;
    double cy = 0.0;

    bool valid() const noexcept;
    Mat3 matrix() const;
};

struct Pixel {
    int u = 0;
    int v = 0;
    friend bool operator==(const Pixel&, const Pixel&) = default;
};

inline bool is_valid_depth(double d) noexcept { return std::isfinite(d) && d > 0.0; }

/// Row-major depth raster stored as float32, matching the on-disk layout.
struct DepthMap {
    int width = 0;
    int height = 0;
    std::vector<float> values;

    DepthMap() = default;
    DepthMap(int w, int h, float fill = 0.0f)
        : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

    std::size_t size() const noexcept { return values.size(); }
    bool contains(int u, int v) const noexcept { return u >= 0 && v >= 0 && u < width && v < height; }
    float at(int u, int v) const { return values[static_cast<std::size_t>(v) * width + u]; }
    float& at(int u, int v) { return values[static_cast<std::size_t>(v) * width + u]; }
    bool valid_at(int u, int v) const { return contains(u, v) && is_valid_depth(at(u, v)); }
};

/// Track endpoints are float32 to match the on-disk quadruples.
struct TrackPair {
    float u_prev = 0.0f;
    float v_prev = 0.0f;
    float u_curr = 0.0f;
    float v_curr = 0.0f;

    Vec2 prev() const { return {u_prev, v_prev}; }
    Vec2 curr() const { return {u_curr, v_curr}; }
    friend bool operator==(const TrackPair&, const TrackPair&) = default;
};

/// Nearest integer pixel of a sub-pixel location, if it falls inside a w×h frame.
std::optional<Pixel> nearest_pixel(const Vec2& p, int width, int height);

/// Camera-frame point at the given pixel and depth; nullopt for invalid depth.
std::optional<Vec3> unproject(const Vec2& p, double depth, const Intrinsics& k);

/// Pixel coordinates of a camera-frame point; nullopt when z <= 0.
std::optional<Vec2> project(const Vec3& x, const Intrinsics& k);

/// Motion taking camera-(prev) coordinates to camera-(curr) coordinates.
RelativePose relative_pose(const Pose& prev_wc, const Pose& curr_wc);

/// Geodesic angle arccos((tr(AᵀB) - 1) / 2) in [0, pi].
double ang_dist(const Rotation& a, const Rotation& b);

/// Chordal mean: SO(3) projection of the arithmetic mean of the matrices.
/// Throws Error(degenerate) for an empty list or a rank-deficient mean.
Rotation rotation_mean(std::span<const Rotation> rotations);

/// Skew-symmetric cross-product matrix.
Mat3 hat(const Vec3& w);

}  // namespace sgc
