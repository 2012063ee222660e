// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only if all pass.

#include "scenes.hpp"
#include "test_util.hpp"

#include "sgc/calibration.hpp"
#include "sgc/common.hpp"
#include "sgc/io.hpp"
#include "sgc/metrics.hpp"
#include "sgc/perturb.hpp"
#include "sgc/pnp.hpp"
#include "sgc/synth.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace sgc;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// --- rigid null test --------------------------------------------------------

Outcome rigid_null() {
    constexpr double kVarTol = 1e-6;
    constexpr double kDepthTol = 1e-3;
    constexpr double kTimeLimit = 10.0;
    const auto t0 = std::chrono::steady_clock::now();
    double worst_rot = 0.0, worst_trans = 0.0, worst_depth = 0.0;
    int scenes = 0;
    bool ok = true;
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        const SynthScene scene = render_bundle(test::gapped_rigid_scene(seed));
        const VideoRawMetrics m = compute_video_metrics(scene.bundle, ScoringConfig{});
        ++scenes;
        ok = ok && m.pair_count == static_cast<int>(scene.bundle.pair_count());
        // Every pair, not just the mean, must satisfy the bounds.
        for (const auto& p : m.pairs) {
            worst_rot = std::max({worst_rot, p.rot_var_local, p.rot_var_global});
            worst_trans = std::max({worst_trans, p.trans_var_local, p.trans_var_global});
            worst_depth = std::max(worst_depth, p.depth_error);
            ok = ok && p.evaluable && p.depth_evaluable && p.global_rot_mag > 0.0 && p.global_trans_mag > 0.0;
        }
    }
    const double elapsed = seconds_since(t0);
    ok = ok && worst_rot < kVarTol && worst_trans < kVarTol && worst_depth < kDepthTol && elapsed < kTimeLimit;
    return {ok, fmt::format("{} scenes; max rot var {:.2e} (<{:.0e}), max trans var {:.2e} (<{:.0e}), max E_depth {:.2e} "
                            "(<{:.0e}); {:.2f} s (<{:.0f} s)",
                            scenes, worst_rot, kVarTol, worst_trans, kVarTol, worst_depth, kDepthTol, elapsed, kTimeLimit)};
}

// --- PnP oracle -------------------------------------------------------------

struct PnpInstance {
    RelativePose truth;
    std::vector<Correspondence> corrs;
    std::vector<bool> is_inlier;
};

PnpInstance make_pnp_instance(Rng& rng, const Intrinsics& k, int n, double outlier_fraction) {
    PnpInstance inst;
    const Vec3 axis = Vec3(rng.normal(), rng.normal(), rng.normal()).normalized();
    inst.truth.rotation = Rotation::exp(axis * rng.uniform(0.0, 0.6));
    inst.truth.translation = Vec3(rng.normal(), rng.normal(), rng.normal()).normalized() * rng.uniform(0.3, 2.0);
    const int outliers = static_cast<int>(std::lround(outlier_fraction * n));
    for (int i = 0; i < n; ++i) {
        // Sample the point in the destination camera so it is visible there.
        const double z = rng.uniform(2.0, 10.0);
        const Vec2 px(rng.uniform(0.0, 639.0), rng.uniform(0.0, 479.0));
        const Vec3 y = *unproject(px, z, k);
        const Vec3 x = inst.truth.rotation.inverse() * (y - inst.truth.translation);
        Vec2 obs = px;
        const bool inlier = i >= outliers;
        if (!inlier) {
            // Gross outlier: at least 40 px away from its true projection.
            do {
                obs = Vec2(rng.uniform(0.0, 639.0), rng.uniform(0.0, 479.0));
            } while ((obs - px).norm() < 40.0);
        }
        inst.corrs.push_back({x, obs});
        inst.is_inlier.push_back(inlier);
    }
    return inst;
}

Outcome pnp_oracle() {
    const Intrinsics k{500.0, 500.0, 319.5, 239.5};
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(20240601);
    double worst_rot_clean = 0.0, worst_trans_clean = 0.0;
    double worst_rot_out = 0.0, worst_trans_out = 0.0, worst_recall = 1.0;
    for (int trial = 0; trial < 100; ++trial) {
        PnpConfig cfg;
        cfg.seed = static_cast<std::uint64_t>(trial);
        const PnpInstance clean = make_pnp_instance(rng, k, 50, 0.0);
        const PnpResult rc = solve_pnp_ransac(clean.corrs, k, cfg);
        worst_rot_clean = std::max(worst_rot_clean, ang_dist(rc.pose.rotation, clean.truth.rotation));
        worst_trans_clean = std::max(worst_trans_clean, (rc.pose.translation - clean.truth.translation).norm() /
                                                            clean.truth.translation.norm());

        const PnpInstance noisy = make_pnp_instance(rng, k, 50, 0.3);
        const PnpResult ro = solve_pnp_ransac(noisy.corrs, k, cfg);
        worst_rot_out = std::max(worst_rot_out, ang_dist(ro.pose.rotation, noisy.truth.rotation));
        worst_trans_out = std::max(worst_trans_out, (ro.pose.translation - noisy.truth.translation).norm() /
                                                        noisy.truth.translation.norm());
        int found = 0, total = 0;
        for (std::size_t i = 0; i < noisy.corrs.size(); ++i) {
            if (!noisy.is_inlier[i]) continue;
            ++total;
            found += ro.inliers[i] ? 1 : 0;
        }
        worst_recall = std::min(worst_recall, static_cast<double>(found) / total);
    }
    const double elapsed = seconds_since(t0);
    const bool ok = worst_rot_clean < 1e-4 && worst_trans_clean < 1e-4 && worst_rot_out < 1e-2 && worst_trans_out < 1e-2 &&
                    worst_recall >= 0.9 && elapsed < 30.0;
    return {ok, fmt::format("100 instances; noiseless max {:.1e} rad / {:.1e} rel (<1e-4); 30% outliers max {:.1e} rad / "
                            "{:.1e} rel (<1e-2), min recall {:.3f} (>=0.9); {:.2f} s (<30 s)",
                            worst_rot_clean, worst_trans_clean, worst_rot_out, worst_trans_out, worst_recall, elapsed)};
}

// --- monotonicity -----------------------------------------------------------

Outcome monotonicity() {
    const std::vector<double> grid{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    const std::vector<PerturbKind> kinds{PerturbKind::warp, PerturbKind::squeeze, PerturbKind::depth_warp};
    constexpr int kScenes = 10;
    const ScoringConfig cfg;

    // raw[s][k][g]; severity 0 is the shared unperturbed scene.
    std::vector<VideoRawMetrics> corpus;
    std::vector<std::vector<std::vector<std::size_t>>> index(kScenes,
                                                             std::vector<std::vector<std::size_t>>(kinds.size()));
    for (int s = 0; s < kScenes; ++s) {
        const SynthScene scene = render_bundle(test::gapped_rigid_scene(100 + s));
        corpus.push_back(compute_video_metrics(scene.bundle, cfg));
        const std::size_t base = corpus.size() - 1;
        for (std::size_t k = 0; k < kinds.size(); ++k) {
            index[s][k].push_back(base);
            for (std::size_t g = 1; g < grid.size(); ++g) {
                PerturbSpec spec;
                spec.kind = kinds[k];
                spec.severity = grid[g];
                GeometryBundle b = apply_perturbation(scene.bundle, spec);
                b.video_id = fmt::format("{}_{}_{}", b.video_id, perturb_kind_name(kinds[k]), grid[g]);
                corpus.push_back(compute_video_metrics(b, cfg));
                index[s][k].push_back(corpus.size() - 1);
            }
        }
    }
    const CalibrationParams params = fit_calibration(corpus);
    std::vector<double> sgc;
    for (const auto& v : corpus) sgc.push_back(score_video(v, params).sgc);

    bool ok = true;
    std::string detail = fmt::format("pooled corpus {} videos;", corpus.size());
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        std::vector<double> medians;
        for (std::size_t g = 0; g < grid.size(); ++g) {
            std::vector<double> vals;
            for (int s = 0; s < kScenes; ++s) vals.push_back(sgc[index[s][k][g]]);
            medians.push_back(median(vals));
        }
        bool monotone = true;
        for (std::size_t g = 1; g < medians.size(); ++g) monotone = monotone && medians[g] >= medians[g - 1];
        const double gain = medians.back() - medians.front();
        ok = ok && monotone && gain >= 0.05;
        detail += fmt::format(" {} medians [{:.4f}]{} gain {:.4f};", perturb_kind_name(kinds[k]), fmt::join(medians, ", "),
                              monotone ? "" : " NOT MONOTONE", gain);
    }
    detail += " (nondecreasing, gain >= 0.05)";
    return {ok, detail};
}

// --- construct validity -----------------------------------------------------

Outcome construct_validity() {
    constexpr int kScenes = 10;
    constexpr double kViolationAngle = 0.1;  // rad, about the camera y axis, every frame pair
    constexpr double kDepthWarpSeverity = 0.15;
    const ScoringConfig cfg;
    std::vector<double> viol_rot, viol_depth, dw_depth, dw_rot_local, dw_rot_global;
    for (int s = 0; s < kScenes; ++s) {
        // Rotation violation on a 0.5 px track-noise baseline.
        const SynthScene base = render_bundle(test::noisy_occluding_scene(200 + s));
        const VideoRawMetrics b = compute_video_metrics(base.bundle, cfg);
        const SynthScene bad = inject_violation(base, 0, {Rotation::exp(Vec3(0.0, kViolationAngle, 0.0)), Vec3::Zero()});
        const VideoRawMetrics v = compute_video_metrics(bad.bundle, cfg);
        viol_rot.push_back(at(v.means, Metric::rot_var_local) / at(b.means, Metric::rot_var_local));
        viol_depth.push_back(at(v.means, Metric::depth_error) / at(b.means, Metric::depth_error));

        // Depth warp on a 1.5 px track-noise baseline, tracks co-warped with depth.
        SceneSpec spec = test::noisy_occluding_scene(300 + s);
        spec.track_noise = 1.5;
        const SynthScene base2 = render_bundle(spec);
        const VideoRawMetrics b2 = compute_video_metrics(base2.bundle, cfg);
        PerturbSpec pspec;
        pspec.kind = PerturbKind::depth_warp;
        pspec.severity = kDepthWarpSeverity;
        const VideoRawMetrics d = compute_video_metrics(apply_perturbation(base2.bundle, pspec), cfg);
        dw_depth.push_back(at(d.means, Metric::depth_error) / at(b2.means, Metric::depth_error));
        dw_rot_local.push_back(at(d.means, Metric::rot_var_local) / at(b2.means, Metric::rot_var_local));
        dw_rot_global.push_back(at(d.means, Metric::rot_var_global) / at(b2.means, Metric::rot_var_global));
    }
    const double mv_rot = median(viol_rot), mv_depth = median(viol_depth);
    const double md_depth = median(dw_depth), md_rl = median(dw_rot_local), md_rg = median(dw_rot_global);
    const bool ok = mv_rot >= 10.0 && mv_depth <= 2.0 && md_depth >= 2.0 && md_rl <= 2.0 && md_rg <= 2.0;
    return {ok, fmt::format("median ratios over {} scenes: violation rot_var_local x{:.1f} (>=10), E_depth x{:.2f} (<=2); "
                            "depth_warp@{} E_depth x{:.2f} (>=2), rot_var_local x{:.2f} (<=2), rot_var_global x{:.2f} (<=2)",
                            kScenes, mv_rot, mv_depth, kDepthWarpSeverity, md_depth, md_rl, md_rg)};
}

// --- PCA -----------------------------------------------------------------------

std::vector<VideoRawMetrics> corpus_from_matrix(const Eigen::MatrixXd& raw) {
    std::vector<VideoRawMetrics> corpus(static_cast<std::size_t>(raw.rows()));
    for (Eigen::Index r = 0; r < raw.rows(); ++r) {
        corpus[r].video_id = fmt::format("v{:03d}", r);
        for (Eigen::Index c = 0; c < raw.cols(); ++c) corpus[r].means[c] = raw(r, c);
    }
    return corpus;
}

Outcome pca_correctness() {
    Rng rng(77);
    double worst_loading = 0.0, worst_weight = 0.0, worst_sum = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        // Correlated positive raw metrics with a random mixing matrix.
        Eigen::MatrixXd mix(5, 5);
        for (int i = 0; i < 25; ++i) mix(i / 5, i % 5) = rng.uniform(0.0, 1.0);
        Eigen::MatrixXd raw(50, 5);
        for (int r = 0; r < 50; ++r) {
            Eigen::VectorXd latent(5);
            for (int c = 0; c < 5; ++c) latent(c) = rng.uniform();
            const Eigen::VectorXd x = mix * latent;
            for (int c = 0; c < 5; ++c) raw(r, c) = x(c);
        }
        const Eigen::MatrixXd norm = test::reference_normalized(raw);
        const Eigen::VectorXd oracle = test::reference_pc1(norm);
        const PcaResult pc = first_principal_component(norm);
        worst_loading = std::max(worst_loading, std::min((pc.loading - oracle).norm(), (pc.loading + oracle).norm()));

        const auto corpus = corpus_from_matrix(raw);
        const CalibrationParams params = fit_calibration(corpus);
        const Eigen::VectorXd expected = oracle.cwiseAbs() / oracle.cwiseAbs().sum();
        const MetricVector w = params.weights();
        double sum = 0.0;
        for (int c = 0; c < 5; ++c) {
            worst_weight = std::max(worst_weight, std::abs(w[c] - expected(c)));
            sum += w[c];
        }
        worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    }

    // Perfectly correlated corpus: every normalized column is the same vector.
    Eigen::MatrixXd raw(40, 5);
    for (int r = 0; r < 40; ++r) {
        const double x = rng.uniform(0.0, 2.0);
        for (int c = 0; c < 4; ++c) raw(r, c) = std::expm1(x);
        raw(r, 4) = x;
    }
    const MetricVector w = fit_calibration(corpus_from_matrix(raw)).weights();
    double worst_uniform = 0.0;
    for (const double x : w) worst_uniform = std::max(worst_uniform, std::abs(x - 0.2));

    const bool ok = worst_loading < 1e-8 && worst_weight < 1e-8 && worst_sum < 1e-9 && worst_uniform < 1e-9;
    return {ok, fmt::format("20 random 50x5: max |PC1 - eigensolver| {:.1e} (<1e-8), max weight error {:.1e}, max |sum-1| "
                            "{:.1e} (<1e-9); correlated corpus max |w-0.2| {:.1e}",
                            worst_loading, worst_weight, worst_sum, worst_uniform)};
}

// --- weight stability ---------------------------------------------------------

Outcome weight_stability() {
    Rng rng(4242);
    std::vector<VideoRawMetrics> corpus;
    const MetricVector scale{0.5, 4.0, 0.6, 5.0, 0.05};
    for (int v = 0; v < 60; ++v) {
        VideoRawMetrics m;
        m.video_id = fmt::format("latent_{:02d}", v);
        const double f = rng.uniform();  // dominant shared quality factor
        for (std::size_t c = 0; c < kMetricCount; ++c) {
            const double x = std::max(0.0, f + 0.05 * rng.normal());
            m.means[c] = c < 4 ? std::expm1(scale[c] * x) : scale[c] * x;
        }
        corpus.push_back(m);
    }
    const StabilityResult r = kfold_weight_stability(corpus, 10);
    const double worst = *std::min_element(r.rho.begin(), r.rho.end());
    double mean = 0.0;
    for (const double x : r.rho) mean += x;
    mean /= static_cast<double>(r.rho.size());
    return {worst >= 0.99, fmt::format("60 videos, 10 folds: min rho {:.5f}, mean rho {:.5f} (>=0.99)", worst, mean)};
}

// --- determinism ----------------------------------------------------------------

Outcome determinism() {
    std::vector<std::string> failures;
    SceneSpec spec = test::gapped_rigid_scene(500);
    spec.dynamic_patch = DynamicPatch{20, 30, 24, 18, 2.0, 0.5, 1.5};
    spec.track_noise = 0.3;
    spec.depth_noise = 0.01;
    spec.render_rgb = true;

    const SynthScene s1 = render_bundle(spec);
    const SynthScene s2 = render_bundle(spec);
    const auto bytes = test::bundle_bytes(s1.bundle, "det_synth");
    if (bytes != test::bundle_bytes(s2.bundle, "det_synth")) failures.push_back("synthesis");

    const std::vector<PerturbKind> kinds{PerturbKind::warp,        PerturbKind::squeeze,       PerturbKind::depth_warp,
                                         PerturbKind::mask_erode,  PerturbKind::mask_dilate,   PerturbKind::mask_fp_noise,
                                         PerturbKind::mask_fn_noise};
    for (const auto kind : kinds) {
        PerturbSpec p;
        p.kind = kind;
        p.severity = 0.7;
        p.seed = 99;
        if (test::bundle_bytes(apply_perturbation(s1.bundle, p), "det_p1") !=
            test::bundle_bytes(apply_perturbation(s1.bundle, p), "det_p2"))
            failures.push_back(fmt::format("perturb:{}", perturb_kind_name(kind)));
    }

    // Scoring and calibration under several parallelism degrees.
    std::vector<GeometryBundle> bundles{s1.bundle};
    for (const auto kind : {PerturbKind::warp, PerturbKind::depth_warp, PerturbKind::mask_dilate}) {
        PerturbSpec p;
        p.kind = kind;
        p.severity = 0.6;
        GeometryBundle b = apply_perturbation(s1.bundle, p);
        b.video_id += std::string("_") + std::string(perturb_kind_name(kind));
        bundles.push_back(std::move(b));
    }
    std::string ref_params, ref_reports;
    for (const int threads : {1, 2, 3, 8, 0}) {
        for (int run = 0; run < 2; ++run) {
            ScoringConfig cfg;
            cfg.threads = threads;
            std::vector<VideoRawMetrics> corpus;
            for (const auto& b : bundles) corpus.push_back(compute_video_metrics(b, cfg));
            const CalibrationParams params = fit_calibration(corpus);
            std::string reports;
            for (const auto& v : corpus) reports += to_json(score_video(v, params)).dump();
            const std::string pj = to_json(params).dump();
            if (ref_params.empty()) {
                ref_params = pj;
                ref_reports = reports;
            } else {
                if (pj != ref_params) failures.push_back(fmt::format("calibration@threads={}", threads));
                if (reports != ref_reports) failures.push_back(fmt::format("scoring@threads={}", threads));
            }
        }
    }
    std::filesystem::remove_all(std::filesystem::current_path() / "test_scratch");
    return {failures.empty(),
            failures.empty() ? std::string("synthesis, 7 perturbations, scoring and calibration byte-identical over 2 runs x "
                                           "threads {1,2,3,8,all}")
                             : fmt::format("differences in: {}", fmt::join(failures, ", "))};
}

// --- format round trip --------------------------------------------------------

Outcome format_round_trip() {
    Rng rng(31337);
    int identical = 0;
    const auto root = test::scratch_dir("roundtrip");
    for (int i = 0; i < 100; ++i) {
        const GeometryBundle b = test::random_bundle(rng, fmt::format("bundle_{:03d}", i));
        const auto d1 = root / "a";
        const auto d2 = root / "b";
        std::filesystem::remove_all(d1);
        std::filesystem::remove_all(d2);
        write_bundle(b, d1);
        write_bundle(read_bundle(d1), d2);
        identical += test::dir_bytes(d1) == test::dir_bytes(d2) ? 1 : 0;
    }
    std::filesystem::remove_all(root);
    return {identical == 100, fmt::format("{}/100 random bundles byte-identical after write-read-write", identical)};
}

// --- math suite -----------------------------------------------------------------

Outcome math_suite() {
    Rng rng(9);
    double worst_ang = 0.0, worst_px = 0.0, worst_compose = 0.0, worst_jac = 0.0;
    const Intrinsics k{420.0, 410.0, 320.5, 240.25};
    for (int i = 0; i < 2000; ++i) {
        const Vec3 axis = Vec3(rng.normal(), rng.normal(), rng.normal()).normalized();
        const double theta = rng.uniform(0.0, std::numbers::pi);
        const Rotation base = Rotation::exp(Vec3(rng.normal(), rng.normal(), rng.normal()));
        worst_ang = std::max(worst_ang, std::abs(ang_dist(base, Rotation::exp(axis * theta) * base) - theta));

        const Vec2 p(rng.uniform(-50, 700), rng.uniform(-50, 500));
        const double z = rng.uniform(0.1, 50.0);
        worst_px = std::max(worst_px, (*project(*unproject(p, z, k), k) - p).norm());

        const Pose a{Rotation::exp(Vec3(rng.normal(), rng.normal(), rng.normal())), Vec3(rng.normal(), rng.normal(), rng.normal())};
        const Pose b{Rotation::exp(Vec3(rng.normal(), rng.normal(), rng.normal())), Vec3(rng.normal(), rng.normal(), rng.normal())};
        const RelativePose rel = relative_pose(a, b);
        const Vec3 x(rng.normal(), rng.normal(), rng.normal());
        worst_compose = std::max(worst_compose, (rel.transform(a.transform(x)) - b.transform(x)).norm());
        worst_compose = std::max(worst_compose, (rel.compose(a).rotation.matrix() - b.rotation.matrix()).norm());
    }
    for (int i = 0; i < 200; ++i) {
        const RelativePose pose{Rotation::exp(Vec3(rng.normal(), rng.normal(), rng.normal()) * 0.3),
                                Vec3(rng.normal(), rng.normal(), rng.normal()) * 0.5};
        const Vec3 y(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(3, 10));
        const Correspondence c{pose.rotation.inverse() * (y - pose.translation), Vec2(rng.uniform(0, 640), rng.uniform(0, 480))};
        const ReprojJacobian j = reprojection_jacobian(pose, c, k);
        ReprojJacobian fd;
        constexpr double h = 1e-6;
        for (int d = 0; d < 6; ++d) {
            Eigen::Matrix<double, 6, 1> e = Eigen::Matrix<double, 6, 1>::Zero();
            e(d) = h;
            const Vec2 plus = *project(apply_increment(pose, e).transform(c.point3d), k);
            const Vec2 minus = *project(apply_increment(pose, -e).transform(c.point3d), k);
            fd.col(d) = (plus - minus) / (2.0 * h);
        }
        worst_jac = std::max(worst_jac, (j - fd).norm() / j.norm());
    }
    const bool ok = worst_ang < 1e-9 && worst_px < 1e-9 && worst_compose < 1e-9 && worst_jac < 1e-5;
    return {ok, fmt::format("ang_dist max err {:.1e} (<1e-9); project/unproject {:.1e} px (<1e-9); composition {:.1e} "
                            "(<1e-9); Jacobian vs central differences {:.1e} rel (<1e-5)",
                            worst_ang, worst_px, worst_compose, worst_jac)};
}

}  // namespace

int main() {
    spdlog::set_level(spdlog::level::err);
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"rigid-scene null test", rigid_null},
        {"PnP oracle equivalence", pnp_oracle},
        {"perturbation monotonicity", monotonicity},
        {"component construct validity", construct_validity},
        {"PCA correctness", pca_correctness},
        {"weight stability", weight_stability},
        {"determinism", determinism},
        {"format round-trip", format_round_trip},
        {"math unit suite", math_suite},
    };
    int passed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, fmt::format("exception: {}", e.what())};
        }
        passed += o.pass ? 1 : 0;
        fmt::print("[{}] {}: {}\n", o.pass ? "PASS" : "FAIL", name, o.detail);
        std::fflush(stdout);
    }
    fmt::print("{}/{} acceptance criteria passed\n", passed, criteria.size());
    return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
