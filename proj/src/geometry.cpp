#include "sgc/geometry.hpp"

#include "sgc/common.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sgc {

Mat3 hat(const Vec3& w) {
    Mat3 m;
    m << 0.0, -w.z(), w.y(),
         w.z(), 0.0, -w.x(),
         -w.y(), w.x(), 0.0;
    return m;
}

Rotation Rotation::from_matrix(const Mat3& m) {
    if (!m.allFinite())
        throw Error(ErrorKind::invalid_argument, "rotation matrix has non-finite entries");
    const double ortho = (m.transpose() * m - Mat3::Identity()).norm();
    const double det = m.determinant();
    if (ortho > kRotationTolerance || std::abs(det - 1.0) > kRotationTolerance)
        throw Error(ErrorKind::invalid_argument, "matrix is not in SO(3)");
    return Rotation(m);
}

Rotation Rotation::project(const Mat3& m) {
    if (!m.allFinite())
        throw Error(ErrorKind::invalid_argument, "cannot project non-finite matrix onto SO(3)");
    Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Mat3& u = svd.matrixU();
    const Mat3& v = svd.matrixV();
    Mat3 d = Mat3::Identity();
    if ((u * v.transpose()).determinant() < 0.0) d(2, 2) = -1.0;
    return Rotation(u * d * v.transpose());
}

Rotation Rotation::exp(const Vec3& w) {
    const double theta = w.norm();
    const Mat3 k = hat(w);
    if (theta < 1e-8) return project(Mat3::Identity() + k + 0.5 * k * k);
    const double a = std::sin(theta) / theta;
    const double b = (1.0 - std::cos(theta)) / (theta * theta);
    return Rotation(Mat3::Identity() + a * k + b * k * k);
}

Rotation Rotation::about_axis(const Vec3& axis, double angle) {
    return exp(axis.normalized() * angle);
}

Rotation Rotation::operator*(const Rotation& other) const { return Rotation(m_ * other.m_); }

Rotation Rotation::inverse() const { return Rotation(m_.transpose()); }

Vec3 Rotation::log() const {
    const Vec3 w(m_(2, 1) - m_(1, 2), m_(0, 2) - m_(2, 0), m_(1, 0) - m_(0, 1));
    const double theta = std::atan2(0.5 * w.norm(), 0.5 * (m_.trace() - 1.0));
    if (theta < 1e-6) return 0.5 * w;
    if (std::numbers::pi - theta < 1e-6) {
        // Near pi the antisymmetric part vanishes; recover the axis from R + I.
        const Mat3 b = 0.5 * (m_ + Mat3::Identity());
        Eigen::Index col = 0;
        b.diagonal().maxCoeff(&col);
        Vec3 axis = b.col(col) / std::sqrt(std::max(b(col, col), 1e-300));
        return axis.normalized() * theta;
    }
    return 0.5 * theta / std::sin(theta) * w;
}

Pose Pose::compose(const Pose& other) const {
    return {rotation * other.rotation, rotation * other.translation + translation};
}

Pose Pose::inverse() const {
    const Rotation r_inv = rotation.inverse();
    return {r_inv, -(r_inv * translation)};
}

bool Intrinsics::valid() const noexcept {
    return std::isfinite(fx) && std::isfinite(fy) && std::isfinite(cx) && std::isfinite(cy) && fx > 0.0 &&
           fy > 0.0;
}

Mat3 Intrinsics::matrix() const {
    Mat3 k;
    k << fx, 0.0, cx, 0.0, fy, cy, 0.0, 0.0, 1.0;
    return k;
}

std::optional<Pixel> nearest_pixel(const Vec2& p, int width, int height) {
    if (!p.allFinite()) return std::nullopt;
    const double ru = std::round(p.x());
    const double rv = std::round(p.y());
    if (ru < 0.0 || rv < 0.0 || ru >= width || rv >= height) return std::nullopt;
    return Pixel{static_cast<int>(ru), static_cast<int>(rv)};
}

std::optional<Vec3> unproject(const Vec2& p, double depth, const Intrinsics& k) {
    if (!is_valid_depth(depth)) return std::nullopt;
    return Vec3(depth * (p.x() - k.cx) / k.fx, depth * (p.y() - k.cy) / k.fy, depth);
}

std::optional<Vec2> project(const Vec3& x, const Intrinsics& k) {
    if (!(x.z() > 0.0)) return std::nullopt;
    return Vec2(k.fx * x.x() / x.z() + k.cx, k.fy * x.y() / x.z() + k.cy);
}

RelativePose relative_pose(const Pose& prev_wc, const Pose& curr_wc) {
    return curr_wc.compose(prev_wc.inverse());
}

double ang_dist(const Rotation& a, const Rotation& b) {
    // atan2 of (sin, cos) keeps full precision near 0 and pi, unlike acos of the trace.
    const Mat3 m = a.matrix().transpose() * b.matrix();
    const Vec3 w(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1));
    return std::atan2(0.5 * w.norm(), 0.5 * (m.trace() - 1.0));
}

Rotation rotation_mean(std::span<const Rotation> rotations) {
    if (rotations.empty()) throw Error(ErrorKind::degenerate, "rotation mean of an empty list");
    if (rotations.size() == 1) return rotations.front();
    Mat3 sum = Mat3::Zero();
    for (const auto& r : rotations) sum += r.matrix();
    const Mat3 mean = sum / static_cast<double>(rotations.size());
    Eigen::JacobiSVD<Mat3> svd(mean);
    const auto& s = svd.singularValues();
    if (s(2) <= 1e-12 * std::max(1.0, s(0)))
        throw Error(ErrorKind::degenerate, "mean rotation matrix is rank-deficient");
    return Rotation::project(mean);
}

}  // namespace sgc
