#include "doctest.h"

#include "sgc/common.hpp"
#include "sgc/pnp.hpp"
#include "sgc/random.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <vector>

using namespace sgc;

namespace {

const Intrinsics kCam{500.0, 500.0, 319.5, 239.5};

RelativePose random_motion(Rng& rng, double max_angle, double max_trans) {
    RelativePose p;
    const Vec3 axis = Vec3(rng.normal(), rng.normal(), rng.normal()).normalized();
    p.rotation = Rotation::exp(axis * rng.uniform(0.0, max_angle));
    p.translation = Vec3(rng.normal(), rng.normal(), rng.normal()).normalized() * rng.uniform(0.0, max_trans);
    return p;
}

/// Points visible in the destination camera, observed exactly (plus optional pixel noise).
std::vector<Correspondence> observe(Rng& rng, const RelativePose& truth, int n, double noise = 0.0) {
    std::vector<Correspondence> out;
    for (int i = 0; i < n; ++i) {
        const Vec2 px(rng.uniform(0.0, 639.0), rng.uniform(0.0, 479.0));
        const Vec3 y = *unproject(px, rng.uniform(2.0, 10.0), kCam);
        const Vec3 x = truth.rotation.inverse() * (y - truth.translation);
        out.push_back({x, px + noise * Vec2(rng.normal(), rng.normal())});
    }
    return out;
}

double rot_err(const RelativePose& a, const RelativePose& b) { return ang_dist(a.rotation, b.rotation); }
double trans_err(const RelativePose& a, const RelativePose& b) { return (a.translation - b.translation).norm(); }

}  // namespace

TEST_CASE("reprojection error examples") {
    const Correspondence c{Vec3(0.0, 0.0, 5.0), Vec2(kCam.cx, kCam.cy)};
    CHECK(reprojection_error(RelativePose::identity(), c, kCam) == doctest::Approx(0.0));
    // A lateral shift of the observation by delta pixels is an error of delta.
    for (const double delta : {0.5, 3.0, 17.25}) {
        Correspondence shifted = c;
        shifted.point2d += Vec2(delta, 0.0);
        CHECK(reprojection_error(RelativePose::identity(), shifted, kCam) == doctest::Approx(delta));
        shifted.point2d = c.point2d + Vec2(0.6, 0.8) * delta;
        CHECK(reprojection_error(RelativePose::identity(), shifted, kCam) == doctest::Approx(delta));
    }
    // Translating by t along x moves the projection by fx * t / z.
    RelativePose shift;
    shift.translation = Vec3(0.1, 0.0, 0.0);
    CHECK(reprojection_error(shift, c, kCam) == doctest::Approx(500.0 * 0.1 / 5.0));
    // Behind the camera.
    shift.translation = Vec3(0.0, 0.0, -6.0);
    CHECK(reprojection_error(shift, c, kCam) == std::numeric_limits<double>::infinity());
}

TEST_CASE("noiseless correspondences recover the motion exactly") {
    Rng rng(21);
    PnpConfig cfg;
    for (int trial = 0; trial < 30; ++trial) {
        const RelativePose truth = random_motion(rng, 0.5, 1.5);
        const auto corrs = observe(rng, truth, 40);
        cfg.seed = static_cast<std::uint64_t>(trial);
        const PnpResult r = solve_pnp_ransac(corrs, kCam, cfg);
        CHECK(rot_err(r.pose, truth) < 1e-8);
        CHECK(trans_err(r.pose, truth) < 1e-8);
        CHECK(r.inlier_count == 40);
        CHECK(r.mean_reproj_error < 1e-6);
        CHECK(r.inliers.size() == corrs.size());
    }
}

TEST_CASE("identity motion is recovered as identity") {
    Rng rng(22);
    const auto corrs = observe(rng, RelativePose::identity(), 25);
    const PnpResult r = solve_pnp_ransac(corrs, kCam, PnpConfig{});
    CHECK(rot_err(r.pose, RelativePose::identity()) < 1e-9);
    CHECK(r.pose.translation.norm() < 1e-9);
}

TEST_CASE("gross outliers are rejected") {
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const RelativePose truth = random_motion(rng, 0.4, 1.0);
        auto corrs = observe(rng, truth, 60);
        std::vector<bool> outlier(corrs.size(), false);
        for (std::size_t i = 0; i < corrs.size(); i += 4) {
            const Vec2 good = corrs[i].point2d;
            do {
                corrs[i].point2d = Vec2(rng.uniform(0.0, 639.0), rng.uniform(0.0, 479.0));
            } while ((corrs[i].point2d - good).norm() < 40.0);
            outlier[i] = true;
        }
        PnpConfig cfg;
        cfg.seed = static_cast<std::uint64_t>(trial);
        const PnpResult r = solve_pnp_ransac(corrs, kCam, cfg);
        CHECK(rot_err(r.pose, truth) < 1e-8);
        CHECK(trans_err(r.pose, truth) < 1e-8);
        for (std::size_t i = 0; i < corrs.size(); ++i) CHECK(static_cast<bool>(r.inliers[i]) == !outlier[i]);
    }
}

TEST_CASE("P3P returns the true pose among its candidates") {
    Rng rng(24);
    for (int trial = 0; trial < 50; ++trial) {
        const RelativePose truth = random_motion(rng, 1.0, 2.0);
        const auto corrs = observe(rng, truth, 3);
        std::array<Vec3, 3> bearings, points;
        for (int j = 0; j < 3; ++j) {
            const Vec2& p = corrs[j].point2d;
            bearings[j] = Vec3((p.x() - kCam.cx) / kCam.fx, (p.y() - kCam.cy) / kCam.fy, 1.0).normalized();
            points[j] = corrs[j].point3d;
        }
        const auto cands = solve_p3p(std::span<const Vec3, 3>(bearings), std::span<const Vec3, 3>(points));
        CHECK(cands.size() <= 4);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& c : cands) best = std::min(best, rot_err(c, truth) + trans_err(c, truth));
        CHECK(best < 1e-7);
    }
}

TEST_CASE("refinement from the truth stays at the truth") {
    Rng rng(25);
    const RelativePose truth = random_motion(rng, 0.3, 1.0);
    const auto corrs = observe(rng, truth, 30);
    const RefineResult r = refine_pose(truth, corrs, kCam, 20);
    CHECK(rot_err(r.pose, truth) < 1e-12);
    CHECK(trans_err(r.pose, truth) < 1e-12);
    CHECK(!r.warning);
}

TEST_CASE("refinement converges from a perturbed start with a monotone cost") {
    Rng rng(26);
    for (int trial = 0; trial < 20; ++trial) {
        const RelativePose truth = random_motion(rng, 0.4, 1.0);
        const auto corrs = observe(rng, truth, 40);
        RelativePose init = truth;
        init.rotation = Rotation::exp(Vec3(rng.normal(), rng.normal(), rng.normal()).normalized() * 0.05) * truth.rotation;
        init.translation += Vec3(rng.normal(), rng.normal(), rng.normal()).normalized() * 0.05;
        const RefineResult r = refine_pose(init, corrs, kCam, 20);
        CHECK(r.iterations <= 20);
        CHECK(rot_err(r.pose, truth) < 1e-6);
        CHECK(trans_err(r.pose, truth) < 1e-6);
        REQUIRE(r.cost_trace.size() >= 2);
        CHECK(r.cost_trace.front() == doctest::Approx(reprojection_cost(init, corrs, kCam)));
        for (std::size_t i = 1; i < r.cost_trace.size(); ++i) CHECK(r.cost_trace[i] <= r.cost_trace[i - 1]);
    }
}

TEST_CASE("refinement reduces cost under pixel noise") {
    Rng rng(27);
    const RelativePose truth = random_motion(rng, 0.3, 1.0);
    const auto corrs = observe(rng, truth, 200, 1.0);
    const RefineResult r = refine_pose(truth, corrs, kCam, 20);
    CHECK(r.cost_trace.back() <= reprojection_cost(truth, corrs, kCam));
    CHECK(rot_err(r.pose, truth) < 5e-3);
}

TEST_CASE("analytic Jacobian matches central finite differences") {
    Rng rng(28);
    for (int trial = 0; trial < 50; ++trial) {
        const RelativePose pose = random_motion(rng, 0.8, 1.5);
        const auto c = observe(rng, pose, 1)[0];
        const ReprojJacobian j = reprojection_jacobian(pose, c, kCam);
        auto residual = [&](const RelativePose& p) {
            return Vec2(*project(p.transform(c.point3d), kCam) - c.point2d);
        };
        const double h = 1e-6;
        for (int d = 0; d < 6; ++d) {
            Eigen::Matrix<double, 6, 1> e = Eigen::Matrix<double, 6, 1>::Zero();
            e[d] = h;
            const Vec2 num = (residual(apply_increment(pose, e)) - residual(apply_increment(pose, -e))) / (2 * h);
            CHECK((num - j.col(d)).norm() < 1e-4 * std::max(1.0, num.norm()));
        }
    }
}

TEST_CASE("scaling the scene scales only the translation") {
    Rng rng(29);
    const RelativePose truth = random_motion(rng, 0.3, 1.0);
    const auto corrs = observe(rng, truth, 40, 0.5);
    PnpConfig cfg;
    cfg.seed = 5;
    const PnpResult a = solve_pnp_ransac(corrs, kCam, cfg);
    for (const double s : {0.25, 4.0}) {
        auto scaled = corrs;
        for (auto& c : scaled) c.point3d *= s;
        const PnpResult b = solve_pnp_ransac(scaled, kCam, cfg);
        CHECK(rot_err(a.pose, b.pose) < 1e-7);
        CHECK((b.pose.translation - s * a.pose.translation).norm() < 1e-7 * s);
        CHECK(a.inlier_count == b.inlier_count);
    }
}

TEST_CASE("error conditions") {
    Rng rng(30);
    const RelativePose truth = random_motion(rng, 0.3, 1.0);
    auto three = observe(rng, truth, 3);
    try {
        solve_pnp_ransac(three, kCam, PnpConfig{});
        FAIL("expected insufficient_points");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::insufficient_points);
    }
    // Pure noise: no 4-point sample explains all four observations.
    std::vector<Correspondence> noise;
    for (int i = 0; i < 12; ++i)
        noise.push_back({Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(3, 6)),
                         Vec2(rng.uniform(0, 639), rng.uniform(0, 479))});
    PnpConfig tight;
    tight.inlier_thresh = 0.01;
    try {
        solve_pnp_ransac(noise, kCam, tight);
        FAIL("expected no_consensus");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::no_consensus);
    }
    PnpConfig bad;
    bad.confidence = 1.5;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = PnpConfig{};
    bad.inlier_thresh = -1;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("fixed seed gives identical results") {
    Rng rng(31);
    const RelativePose truth = random_motion(rng, 0.3, 1.0);
    auto corrs = observe(rng, truth, 50, 1.0);
    for (std::size_t i = 0; i < corrs.size(); i += 3) corrs[i].point2d = Vec2(rng.uniform(0, 639), rng.uniform(0, 479));
    PnpConfig cfg;
    cfg.seed = 77;
    const PnpResult a = solve_pnp_ransac(corrs, kCam, cfg);
    const PnpResult b = solve_pnp_ransac(corrs, kCam, cfg);
    CHECK(a.pose.rotation.matrix() == b.pose.rotation.matrix());
    CHECK(a.pose.translation == b.pose.translation);
    CHECK(a.inliers == b.inliers);
    CHECK(a.ransac_iterations == b.ransac_iterations);
}
