#include "sgc/pnp.hpp"

#include "sgc/common.hpp"
#include "sgc/random.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <spdlog/spdlog.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace sgc {

void PnpConfig::validate() const {
    if (!(inlier_thresh > 0.0))
        throw Error(ErrorKind::invalid_argument, "pnp_inlier_thresh must be > 0", {}, "pnp_inlier_thresh");
    if (!(confidence > 0.0 && confidence < 1.0))
        throw Error(ErrorKind::invalid_argument, "pnp_confidence must be in (0, 1)", {}, "pnp_confidence");
    if (max_iters < 1) throw Error(ErrorKind::invalid_argument, "pnp_iterations must be >= 1", {}, "pnp_iterations");
    if (min_points < 4) throw Error(ErrorKind::invalid_argument, "pnp_min_points must be >= 4", {}, "pnp_min_points");
    if (refine_iters < 0)
        throw Error(ErrorKind::invalid_argument, "pnp_refine_iters must be >= 0", {}, "pnp_refine_iters");
}

double reprojection_error(const RelativePose& pose, const Correspondence& c, const Intrinsics& k) {
    const auto p = project(pose.transform(c.point3d), k);
    if (!p) return std::numeric_limits<double>::infinity();
    return (*p - c.point2d).norm();
}

ReprojJacobian reprojection_jacobian(const RelativePose& pose, const Correspondence& c, const Intrinsics& k) {
    const Vec3 rx = pose.rotation * c.point3d;
    const Vec3 y = rx + pose.translation;
    const double iz = 1.0 / y.z();
    Eigen::Matrix<double, 2, 3> dproj;
    dproj << k.fx * iz, 0.0, -k.fx * y.x() * iz * iz,
             0.0, k.fy * iz, -k.fy * y.y() * iz * iz;
    ReprojJacobian j;
    j.leftCols<3>() = dproj * (-hat(rx));
    j.rightCols<3>() = dproj;
    return j;
}

RelativePose apply_increment(const RelativePose& pose, const Eigen::Matrix<double, 6, 1>& delta) {
    const Rotation r = Rotation::project((Rotation::exp(delta.head<3>()) * pose.rotation).matrix());
    return {r, pose.translation + delta.tail<3>()};
}

double reprojection_cost(const RelativePose& pose, std::span<const Correspondence> corrs, const Intrinsics& k) {
    double cost = 0.0;
    for (const auto& c : corrs) {
        const double e = reprojection_error(pose, c, k);
        cost += e * e;
    }
    return cost;
}

RefineResult refine_pose(const RelativePose& init, std::span<const Correspondence> inliers, const Intrinsics& k,
                         int iters) {
    RefineResult out;
    out.pose = init;
    double cost = reprojection_cost(init, inliers, k);
    out.cost_trace.push_back(cost);
    if (inliers.size() < 4 || !std::isfinite(cost)) return out;

    double lambda = 1e-4;
    for (int it = 0; it < iters; ++it) {
        if (cost <= 1e-28) break;
        Eigen::Matrix<double, 6, 6> jtj = Eigen::Matrix<double, 6, 6>::Zero();
        Eigen::Matrix<double, 6, 1> jtr = Eigen::Matrix<double, 6, 1>::Zero();
        for (const auto& c : inliers) {
            const ReprojJacobian j = reprojection_jacobian(out.pose, c, k);
            const Vec2 r = *project(out.pose.transform(c.point3d), k) - c.point2d;
            jtj.noalias() += j.transpose() * j;
            jtr.noalias() += j.transpose() * r;
        }
        if (!jtj.allFinite() || !jtr.allFinite()) {
            spdlog::warn("refine_pose: non-finite Jacobian, keeping initial estimate");
            out.pose = init;
            out.cost_trace.resize(1);
            out.warning = true;
            return out;
        }

        bool accepted = false;
        for (int attempt = 0; attempt < 10 && !accepted; ++attempt) {
            Eigen::Matrix<double, 6, 6> a = jtj;
            a.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-12);
            const Eigen::Matrix<double, 6, 1> delta = a.ldlt().solve(-jtr);
            if (!delta.allFinite()) {
                lambda *= 10.0;
                continue;
            }
            const RelativePose candidate = apply_increment(out.pose, delta);
            const double c_new = reprojection_cost(candidate, inliers, k);
            if (c_new < cost) {
                out.pose = candidate;
                cost = c_new;
                lambda = std::max(lambda * 0.1, 1e-12);
                accepted = true;
            } else {
                lambda *= 10.0;
            }
        }
        out.cost_trace.push_back(cost);
        out.iterations = it + 1;
        if (!accepted) break;
    }
    return out;
}

namespace {

// Real roots of c[0] x^n + ... + c[n], polished with Newton steps.
std::vector<double> real_roots(std::vector<double> c) {
    const double scale = std::abs(*std::max_element(c.begin(), c.end(),
                                                    [](double a, double b) { return std::abs(a) < std::abs(b); }));
    while (c.size() > 1 && std::abs(c.front()) <= 1e-14 * scale) c.erase(c.begin());
    const int n = static_cast<int>(c.size()) - 1;
    std::vector<double> roots;
    if (n < 1) return roots;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) companion(0, i) = -c[i + 1] / c[0];
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
    const auto ev = es.eigenvalues();
    auto eval = [&](double x, double& deriv) {
        double p = c[0];
        deriv = 0.0;
        for (int i = 1; i <= n; ++i) {
            deriv = deriv * x + p;
            p = p * x + c[i];
        }
        return p;
    };
    for (int i = 0; i < n; ++i) {
        if (std::abs(ev[i].imag()) > 1e-6 * (1.0 + std::abs(ev[i].real()))) continue;
        double x = ev[i].real();
        for (int step = 0; step < 4; ++step) {
            double d = 0.0;
            const double p = eval(x, d);
            if (d == 0.0) break;
            x -= p / d;
        }
        roots.push_back(x);
    }
    return roots;
}

// Least-squares rigid transform taking src onto dst.
std::optional<RelativePose> align_points(std::span<const Vec3, 3> src, std::span<const Vec3, 3> dst) {
    const Vec3 cs = (src[0] + src[1] + src[2]) / 3.0;
    const Vec3 cd = (dst[0] + dst[1] + dst[2]) / 3.0;
    Mat3 h = Mat3::Zero();
    for (int i = 0; i < 3; ++i) h += (src[i] - cs) * (dst[i] - cd).transpose();
    if (!h.allFinite()) return std::nullopt;
    Eigen::JacobiSVD<Mat3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat3 d = Mat3::Identity();
    if ((svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0) d(2, 2) = -1.0;
    const Mat3 r = svd.matrixV() * d * svd.matrixU().transpose();
    const Rotation rot = Rotation::project(r);
    return RelativePose{rot, cd - rot * cs};
}

bool degenerate_sample(std::span<const Correspondence> corrs, const std::array<std::size_t, 4>& idx) {
    const Vec3& a = corrs[idx[0]].point3d;
    const Vec3 e1 = corrs[idx[1]].point3d - a;
    const Vec3 e2 = corrs[idx[2]].point3d - a;
    const double denom = e1.norm() * e2.norm();
    if (!(denom > 0.0) || e1.cross(e2).norm() <= 1e-6 * denom) return true;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if ((corrs[idx[i]].point2d - corrs[idx[j]].point2d).norm() < 0.5) return true;
    return false;
}

struct Score {
    int count = 0;
    double error_sum = std::numeric_limits<double>::infinity();
    bool better_than(const Score& o) const {
        return count > o.count || (count == o.count && error_sum < o.error_sum);
    }
};

Score score_pose(const RelativePose& pose, std::span<const Correspondence> corrs, const Intrinsics& k,
                 double thresh) {
    Score s{0, 0.0};
    for (const auto& c : corrs) {
        const double e = reprojection_error(pose, c, k);
        if (e <= thresh) {
            ++s.count;
            s.error_sum += e;
        }
    }
    return s;
}

}  // namespace

std::vector<RelativePose> solve_p3p(std::span<const Vec3, 3> f, std::span<const Vec3, 3> w) {
    std::vector<RelativePose> out;
    const double a2 = (w[1] - w[2]).squaredNorm();
    const double b2 = (w[0] - w[2]).squaredNorm();
    const double c2 = (w[0] - w[1]).squaredNorm();
    if (!(a2 > 0.0 && b2 > 0.0 && c2 > 0.0)) return out;
    const double ca = f[1].dot(f[2]);
    const double cb = f[0].dot(f[2]);
    const double cg = f[0].dot(f[1]);

    const double p = (a2 - c2) / b2;
    const double q = (a2 + c2) / b2;
    const double a4 = (p - 1.0) * (p - 1.0) - 4.0 * c2 / b2 * ca * ca;
    const double a3 = 4.0 * (p * (1.0 - p) * cb - (1.0 - q) * ca * cg + 2.0 * c2 / b2 * ca * ca * cb);
    const double a2c = 2.0 * (p * p - 1.0 + 2.0 * p * p * cb * cb + 2.0 * (b2 - c2) / b2 * ca * ca -
                              4.0 * q * ca * cb * cg + 2.0 * (b2 - a2) / b2 * cg * cg);
    const double a1 = 4.0 * (-p * (1.0 + p) * cb + 2.0 * a2 / b2 * cg * cg * cb - (1.0 - q) * ca * cg);
    const double a0 = (1.0 + p) * (1.0 + p) - 4.0 * a2 / b2 * cg * cg;

    for (const double v : real_roots({a4, a3, a2c, a1, a0})) {
        if (!(v > 0.0)) continue;
        const double den = 2.0 * (cg - v * ca);
        if (std::abs(den) < 1e-14) continue;
        const double u = ((p - 1.0) * v * v - 2.0 * p * cb * v + 1.0 + p) / den;
        if (!(u > 0.0)) continue;
        const double s1sq = b2 / (1.0 + v * v - 2.0 * v * cb);
        if (!(s1sq > 0.0)) continue;
        const double s1 = std::sqrt(s1sq);
        const std::array<Vec3, 3> cam{s1 * f[0], u * s1 * f[1], v * s1 * f[2]};
        if (auto pose = align_points(w, cam)) out.push_back(*pose);
    }
    return out;
}

PnpResult solve_pnp_ransac(std::span<const Correspondence> corrs, const Intrinsics& k, const PnpConfig& cfg) {
    cfg.validate();
    const std::size_t n = corrs.size();
    if (n < static_cast<std::size_t>(cfg.min_points) || n < 4)
        throw Error(ErrorKind::insufficient_points, "too few correspondences for PnP");

    std::vector<Vec3> bearings(n);
    for (std::size_t i = 0; i < n; ++i)
        bearings[i] = Vec3((corrs[i].point2d.x() - k.cx) / k.fx, (corrs[i].point2d.y() - k.cy) / k.fy, 1.0)
                          .normalized();

    Rng rng(cfg.seed);
    std::vector<std::size_t> perm(n);
    Score best_score;
    best_score.count = 0;
    RelativePose best_pose;
    bool have_best = false;
    double needed = cfg.max_iters;
    int iter = 0;
    for (; iter < cfg.max_iters && iter < needed; ++iter) {
        std::array<std::size_t, 4> idx{};
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        for (int s = 0; s < 4; ++s) {
            const std::size_t j = s + rng.index(n - s);
            std::swap(perm[s], perm[j]);
            idx[s] = perm[s];
        }
        if (degenerate_sample(corrs, idx)) continue;

        const std::array<Vec3, 3> f{bearings[idx[0]], bearings[idx[1]], bearings[idx[2]]};
        const std::array<Vec3, 3> x{corrs[idx[0]].point3d, corrs[idx[1]].point3d, corrs[idx[2]].point3d};
        const auto hyps = solve_p3p(f, x);
        if (hyps.empty()) continue;
        const RelativePose* chosen = nullptr;
        double chosen_err = std::numeric_limits<double>::infinity();
        for (const auto& h : hyps) {
            const double e = reprojection_error(h, corrs[idx[3]], k);
            if (e < chosen_err) {
                chosen_err = e;
                chosen = &h;
            }
        }
        if (!chosen || !std::isfinite(chosen_err)) continue;

        const Score s = score_pose(*chosen, corrs, k, cfg.inlier_thresh);
        if (!have_best || s.better_than(best_score)) {
            best_score = s;
            best_pose = *chosen;
            have_best = true;
            const double w = static_cast<double>(s.count) / static_cast<double>(n);
            const double w4 = w * w * w * w;
            if (w4 >= 1.0) {
                needed = 0.0;
            } else if (w4 > 0.0) {
                needed = std::log(1.0 - cfg.confidence) / std::log(1.0 - w4);
            }
        }
    }
    if (!have_best || best_score.count < cfg.min_points)
        throw Error(ErrorKind::no_consensus, "no PnP hypothesis reached the minimum inlier count");

    auto collect = [&](const RelativePose& pose) {
        std::vector<Correspondence> in;
        std::vector<std::uint8_t> flags(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            if (reprojection_error(pose, corrs[i], k) <= cfg.inlier_thresh) {
                flags[i] = 1;
                in.push_back(corrs[i]);
            }
        }
        return std::pair{std::move(in), std::move(flags)};
    };

    RelativePose pose = best_pose;
    auto [inliers, flags] = collect(pose);
    // Refine, then re-collect; a second pass only if the consensus set grew.
    for (int pass = 0; pass < 2; ++pass) {
        const RefineResult refined = refine_pose(pose, inliers, k, cfg.refine_iters);
        auto [next_in, next_flags] = collect(refined.pose);
        if (next_in.size() < inliers.size()) break;
        const bool grew = next_in.size() > inliers.size();
        pose = refined.pose;
        inliers = std::move(next_in);
        flags = std::move(next_flags);
        if (!grew) break;
    }
    if (static_cast<int>(inliers.size()) < cfg.min_points)
        throw Error(ErrorKind::no_consensus, "refined PnP pose lost consensus");

    PnpResult result;
    result.pose = pose;
    result.inlier_count = static_cast<int>(inliers.size());
    double err = 0.0;
    for (const auto& c : inliers) err += reprojection_error(pose, c, k);
    result.mean_reproj_error = err / static_cast<double>(inliers.size());
    result.inliers = std::move(flags);
    result.ransac_iterations = iter;
    return result;
}

}  // namespace sgc
