#include "sgc/calibration.hpp"
#include "sgc/common.hpp"
#include "sgc/io.hpp"
#include "sgc/metrics.hpp"
#include "sgc/perturb.hpp"
#include "sgc/synth.hpp"

#include "CLI11.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitPartial = 3;

void init_logging() {
    auto logger = spdlog::stderr_color_mt("sgc");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("SGC_LOG_LEVEL")) spdlog::set_level(spdlog::level::from_str(env));
}

// Flags are bound to scratch storage and applied after the config file, so that
// an explicit flag always wins over the file and the file over built-in defaults.
class RunConfigFlags {
public:
    void attach(CLI::App& app) {
        app.add_option("--config", config_path_, "JSON file with run-configuration defaults");
        bind(app, "--k_seg", "maximum depth clusters per frame", [](sgc::RunConfig& c) -> int& { return c.scoring.cluster.k_seg; });
        bind(app, "--s_min", "minimum subregion size in pixels", [](sgc::RunConfig& c) -> int& { return c.scoring.cluster.s_min; });
        bind(app, "--kmeans_max_iters", "k-means iteration cap", [](sgc::RunConfig& c) -> int& { return c.scoring.cluster.max_iters; });
        bind(app, "--cluster_seed", "k-means seed", [](sgc::RunConfig& c) -> std::uint64_t& { return c.scoring.cluster.seed; });
        bind(app, "--pnp_inlier_thresh", "RANSAC inlier threshold in pixels", [](sgc::RunConfig& c) -> double& { return c.scoring.pnp.inlier_thresh; });
        bind(app, "--pnp_confidence", "RANSAC confidence", [](sgc::RunConfig& c) -> double& { return c.scoring.pnp.confidence; });
        bind(app, "--pnp_iterations", "RANSAC iteration cap", [](sgc::RunConfig& c) -> int& { return c.scoring.pnp.max_iters; });
        bind(app, "--pnp_min_points", "minimum correspondences per subregion", [](sgc::RunConfig& c) -> int& { return c.scoring.pnp.min_points; });
        bind(app, "--pnp_refine_iters", "pose refinement iterations", [](sgc::RunConfig& c) -> int& { return c.scoring.pnp.refine_iters; });
        bind(app, "--pnp_seed", "RANSAC base seed", [](sgc::RunConfig& c) -> std::uint64_t& { return c.scoring.pnp.seed; });
        bind(app, "--threads", "worker threads (0 = all cores)", [](sgc::RunConfig& c) -> int& { return c.scoring.threads; });
        bind(app, "--wavelength", "perturbation sinusoid period in pixels", [](sgc::RunConfig& c) -> double& { return c.perturb_defaults.wavelength; });
        bind(app, "--warp_amplitude", "warp amplitude in pixels", [](sgc::RunConfig& c) -> double& { return c.perturb_defaults.warp_amplitude; });
        bind(app, "--max_squeeze", "maximum vertical compression", [](sgc::RunConfig& c) -> double& { return c.perturb_defaults.max_squeeze; });
        bind(app, "--remap_amplitude", "depth remap amplitude in pixels", [](sgc::RunConfig& c) -> double& { return c.perturb_defaults.remap_amplitude; });
        bind(app, "--noise_density", "mask flip probability at severity 1", [](sgc::RunConfig& c) -> double& { return c.perturb_defaults.noise_density; });
        bind(app, "--kernel_fraction", "morphology kernel as a fraction of the diagonal", [](sgc::RunConfig& c) -> double& { return c.perturb_defaults.kernel_fraction; });
        bind(app, "--profile", "weight profile (paper-v1, uniform)", [](sgc::RunConfig& c) -> std::string& { return c.profile; });
        bind(app, "--output", "output file or bundle directory", [](sgc::RunConfig& c) -> std::string& { return c.output; });
    }

    sgc::RunConfig resolve() const {
        sgc::RunConfig cfg;
        if (!config_path_.empty()) sgc::apply_config_json(cfg, sgc::read_json_file(config_path_));
        for (const auto& apply : appliers_) apply(cfg);
        cfg.validate();
        return cfg;
    }

private:
    template <class Accessor>
    void bind(CLI::App& app, const std::string& flag, const std::string& help, Accessor field) {
        using T = std::remove_reference_t<decltype(field(std::declval<sgc::RunConfig&>()))>;
        auto storage = std::make_shared<T>();
        CLI::Option* opt = app.add_option(flag, *storage, help);
        appliers_.push_back([opt, storage, field](sgc::RunConfig& cfg) {
            if (opt->count() > 0) field(cfg) = *storage;
        });
    }

    std::string config_path_;
    std::vector<std::function<void(sgc::RunConfig&)>> appliers_;
};

void emit(const json& doc, const std::string& output) {
    const std::string text = doc.dump(2) + "\n";
    if (output.empty())
        std::cout << text;
    else
        sgc::write_text_file(output, text);
}

std::vector<fs::path> corpus_paths(const std::string& manifest, const std::vector<std::string>& bundles) {
    std::vector<fs::path> paths(bundles.begin(), bundles.end());
    if (!manifest.empty()) {
        const json m = sgc::read_json_file(manifest);
        if (!m.is_object() || !m.contains("videos") || !m.at("videos").is_array())
            throw sgc::Error(sgc::ErrorKind::schema, "corpus manifest needs a 'videos' array", manifest, "videos");
        const fs::path base = fs::path(manifest).parent_path();
        for (const auto& v : m.at("videos")) {
            if (!v.is_string()) throw sgc::Error(sgc::ErrorKind::schema, "video entries must be paths", manifest, "videos");
            const fs::path p(v.get<std::string>());
            paths.push_back(p.is_absolute() ? p : base / p);
        }
    }
    if (paths.empty()) throw sgc::Error(sgc::ErrorKind::invalid_argument, "no bundles given");
    return paths;
}

sgc::CalibrationParams load_params(const std::string& path, const std::string& profile) {
    if (path.empty()) throw sgc::Error(sgc::ErrorKind::invalid_argument, "--params is required (a profile only supplies weights)");
    sgc::CalibrationParams params = sgc::calibration_from_json(sgc::read_json_file(path));
    if (!profile.empty()) {
        params.set_weights(sgc::weight_profile(profile));
        params.weights_source = profile;
    }
    return params;
}

int run_synth(const sgc::RunConfig& cfg, const std::string& spec_path) {
    if (cfg.output.empty()) throw sgc::Error(sgc::ErrorKind::invalid_argument, "--output bundle directory is required");
    const sgc::SceneSpec spec = sgc::scene_spec_from_json(sgc::read_json_file(spec_path));
    const sgc::SynthScene scene = sgc::render_bundle(spec);
    sgc::write_bundle(scene.bundle, cfg.output);
    spdlog::info("wrote {} frames to {}", scene.bundle.frame_count(), cfg.output);
    return kExitOk;
}

int run_perturb(const sgc::RunConfig& cfg, const std::string& bundle_path, const std::string& spec_path) {
    if (cfg.output.empty()) throw sgc::Error(sgc::ErrorKind::invalid_argument, "--output bundle directory is required");
    const sgc::GeometryBundle in = sgc::read_bundle(bundle_path);
    const sgc::PerturbSpec spec = sgc::perturb_spec_from_json(sgc::read_json_file(spec_path), cfg.perturb_defaults);
    sgc::GeometryBundle out = sgc::apply_perturbation(in, spec);
    json prov = in.provenance.empty() ? json::object() : json::parse(in.provenance);
    prov["perturbations"].push_back(sgc::to_json(spec));
    out.provenance = prov.dump();
    sgc::write_bundle(out, cfg.output);
    return kExitOk;
}

int run_calibrate(const sgc::RunConfig& cfg, const std::vector<fs::path>& paths) {
    std::vector<sgc::VideoRawMetrics> corpus;
    json excluded = json::array();
    for (const auto& path : paths) {
        try {
            corpus.push_back(sgc::compute_video_metrics(sgc::read_bundle(path), cfg.scoring));
        } catch (const std::exception& e) {
            spdlog::warn("excluding {}: {}", path.string(), e.what());
            excluded.push_back(sgc::error_json(e, path.string()).at("error"));
        }
    }
    sgc::FitOptions options;
    if (!cfg.profile.empty()) {
        options.mode = sgc::WeightMode::fixed;
        options.profile = cfg.profile;
    }
    json doc = sgc::to_json(sgc::fit_calibration(corpus, options));
    if (!excluded.empty()) doc["excluded_videos"] = excluded;
    emit(doc, cfg.output);
    return excluded.empty() ? kExitOk : kExitPartial;
}

int run_score(const sgc::RunConfig& cfg, const std::vector<fs::path>& paths, const std::string& params_path) {
    const sgc::CalibrationParams params = load_params(params_path, cfg.profile);
    json reports = json::array();
    json errors = json::array();
    for (const auto& path : paths) {
        try {
            const sgc::GeometryBundle bundle = sgc::read_bundle(path);
            const sgc::VideoRawMetrics raw = sgc::compute_video_metrics(bundle, cfg.scoring);
            const sgc::SgcReport report = sgc::score_video(raw, params);
            json r = sgc::to_json(report);
            r["path"] = path.string();
            reports.push_back(r);
        } catch (const std::exception& e) {
            spdlog::warn("cannot score {}: {}", path.string(), e.what());
            errors.push_back(sgc::error_json(e, path.string()).at("error"));
        }
    }
    emit({{"reports", reports}, {"errors", errors}}, cfg.output);
    if (reports.empty()) return kExitError;
    return errors.empty() ? kExitOk : kExitPartial;
}

int run_ecd(const sgc::RunConfig& cfg, const std::vector<fs::path>& paths, const std::string& params_path) {
    const sgc::CalibrationParams params = load_params(params_path, "");
    json values = json::array();
    json errors = json::array();
    for (const auto& path : paths) {
        try {
            const sgc::GeometryBundle bundle = sgc::read_bundle(path);
            json v = sgc::to_json(sgc::compute_ecd(bundle, params.ecd_bounds));
            v["video_id"] = bundle.video_id;
            v["path"] = path.string();
            values.push_back(v);
        } catch (const std::exception& e) {
            errors.push_back(sgc::error_json(e, path.string()).at("error"));
        }
    }
    emit({{"ecd", values}, {"errors", errors}}, cfg.output);
    if (values.empty()) return kExitError;
    return errors.empty() ? kExitOk : kExitPartial;
}

}  // namespace

int main(int argc, char** argv) {
    init_logging();

    CLI::App app{"Spatial geometric consistency scoring for generated video"};
    app.require_subcommand(1);

    RunConfigFlags flags;
    std::string spec_path, bundle_path, params_path, corpus_manifest;
    std::vector<std::string> bundles;

    auto* synth = app.add_subcommand("synth", "render a synthetic scene spec into a bundle");
    synth->add_option("--spec", spec_path, "scene spec JSON")->required();

    auto* perturb = app.add_subcommand("perturb", "apply a perturbation spec to a bundle");
    perturb->add_option("--bundle", bundle_path, "input bundle directory")->required();
    perturb->add_option("--spec", spec_path, "perturbation spec JSON")->required();

    auto* calibrate = app.add_subcommand("calibrate", "fit normalization and weights on a corpus");
    calibrate->add_option("--corpus", corpus_manifest, "corpus manifest JSON with a 'videos' list");
    calibrate->add_option("bundles", bundles, "bundle directories");

    auto* score = app.add_subcommand("score", "score bundles with calibration parameters");
    score->add_option("--params", params_path, "calibration parameters JSON");
    score->add_option("bundles", bundles, "bundle directories")->required();

    auto* ecd = app.add_subcommand("ecd", "estimated camera dynamics per bundle");
    ecd->add_option("--params", params_path, "calibration parameters JSON")->required();
    ecd->add_option("bundles", bundles, "bundle directories")->required();

    for (auto* sub : {synth, perturb, calibrate, score, ecd}) flags.attach(*sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cout << json{{"error", {{"kind", "usage"}, {"message", e.what()}}}}.dump(2) << "\n";
        return kExitUsage;
    }

    try {
        const sgc::RunConfig cfg = flags.resolve();
        if (synth->parsed()) return run_synth(cfg, spec_path);
        if (perturb->parsed()) return run_perturb(cfg, bundle_path, spec_path);
        if (calibrate->parsed()) return run_calibrate(cfg, corpus_paths(corpus_manifest, bundles));
        if (score->parsed()) return run_score(cfg, corpus_paths("", bundles), params_path);
        if (ecd->parsed()) return run_ecd(cfg, corpus_paths("", bundles), params_path);
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        std::cout << sgc::error_json(e).dump(2) << "\n";
        return kExitError;
    }
    return kExitUsage;
}
