#include "sgc/io.hpp"

#include "sgc/common.hpp"

#include <fmt/format.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace sgc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <class T>
T byteswap_value(T v) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    std::reverse(b, b + sizeof(T));
    std::memcpy(&v, b, sizeof(T));
    return v;
}

template <class T>
std::string encode_le(std::span<const T> values) {
    std::string out(values.size() * sizeof(T), '\0');
    if constexpr (std::endian::native == std::endian::little) {
        if (!values.empty()) std::memcpy(out.data(), values.data(), out.size());
    } else {
        for (std::size_t i = 0; i < values.size(); ++i) {
            const T v = byteswap_value(values[i]);
            std::memcpy(out.data() + i * sizeof(T), &v, sizeof(T));
        }
    }
    return out;
}

template <class T>
std::vector<T> decode_le(const std::string& bytes) {
    std::vector<T> out(bytes.size() / sizeof(T));
    if (!out.empty()) std::memcpy(out.data(), bytes.data(), out.size() * sizeof(T));
    if constexpr (std::endian::native != std::endian::little)
        for (auto& v : out) v = byteswap_value(v);
    return out;
}

std::string read_file(const fs::path& path, const std::string& field) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::schema, fmt::format("referenced file is missing: {}", path.string()), path.string(), field);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, fmt::format("cannot write {}", path.string()), path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorKind::io, fmt::format("short write to {}", path.string()), path.string());
}

template <class T>
std::vector<T> read_array(const fs::path& path, std::size_t expected, const std::string& field) {
    const std::string bytes = read_file(path, field);
    if (bytes.size() != expected * sizeof(T))
        throw Error(ErrorKind::schema,
                    fmt::format("{} has {} bytes, expected {}", path.filename().string(), bytes.size(), expected * sizeof(T)),
                    path.string(), field);
    return decode_le<T>(bytes);
}

std::string frame_name(const char* stem, std::size_t i, const char* ext) { return fmt::format("{}_{:04d}.{}", stem, i, ext); }

template <class T>
T get_field(const json& j, const char* key, const std::string& file, const std::string& where) {
    if (!j.is_object() || !j.contains(key))
        throw Error(ErrorKind::schema, fmt::format("missing field '{}'", key), file, where.empty() ? key : where + "." + key);
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw Error(ErrorKind::schema, fmt::format("field '{}' has the wrong type", key), file,
                    where.empty() ? key : where + "." + key);
    }
}

}  // namespace

void write_bundle(const GeometryBundle& b, const fs::path& dir) {
    b.validate();
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::io, fmt::format("cannot create {}: {}", dir.string(), ec.message()), dir.string());

    json manifest;
    manifest["format_version"] = kBundleFormatVersion;
    manifest["video_id"] = b.video_id;
    manifest["frame_count"] = b.frame_count();
    manifest["width"] = b.width;
    manifest["height"] = b.height;
    manifest["units"] = "depth and translation in scale-free scene units; pixels for tracks and intrinsics";
    manifest["rgb"] = b.has_rgb;
    json frames = json::array();
    for (std::size_t i = 0; i < b.frame_count(); ++i) {
        const FrameData& f = b.frames[i];
        json entry;
        entry["depth"] = frame_name("depth", i, "f32");
        entry["mask"] = frame_name("mask", i, "u8");
        entry["intrinsics"] = frame_name("intrinsics", i, "f64");
        entry["pose"] = frame_name("pose", i, "f64");
        write_file(dir / entry["depth"].get<std::string>(), encode_le<float>(f.depth.values));
        write_file(dir / entry["mask"].get<std::string>(), encode_le<std::uint8_t>(f.mask.bits));
        const std::array<double, 4> k{f.intrinsics.fx, f.intrinsics.fy, f.intrinsics.cx, f.intrinsics.cy};
        write_file(dir / entry["intrinsics"].get<std::string>(), encode_le<double>(k));
        std::array<double, 12> pose{};
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) pose[r * 3 + c] = f.rotation(r, c);
        for (int r = 0; r < 3; ++r) pose[9 + r] = f.translation(r);
        write_file(dir / entry["pose"].get<std::string>(), encode_le<double>(pose));
        if (b.has_rgb) {
            entry["rgb"] = frame_name("rgb", i, "u8");
            write_file(dir / entry["rgb"].get<std::string>(), encode_le<std::uint8_t>(f.rgb));
        }
        frames.push_back(entry);
    }
    manifest["frames"] = frames;
    json tracks = json::array();
    for (std::size_t p = 0; p < b.tracks.size(); ++p) {
        const std::string name = fmt::format("tracks_{:04d}_{:04d}.f32", p, p + 1);
        std::vector<float> flat;
        flat.reserve(b.tracks[p].size() * 4);
        for (const auto& t : b.tracks[p]) {
            flat.push_back(t.u_prev);
            flat.push_back(t.v_prev);
            flat.push_back(t.u_curr);
            flat.push_back(t.v_curr);
        }
        write_file(dir / name, encode_le<float>(flat));
        tracks.push_back(name);
    }
    manifest["tracks"] = tracks;
    if (!b.provenance.empty()) manifest["provenance"] = json::parse(b.provenance);
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

GeometryBundle read_bundle(const fs::path& dir) {
    const fs::path mpath = dir / "manifest.json";
    const std::string file = mpath.string();
    json m;
    try {
        m = json::parse(read_file(mpath, "manifest"));
    } catch (const json::exception& e) {
        throw Error(ErrorKind::schema, fmt::format("manifest is not valid JSON: {}", e.what()), file, "manifest");
    }
    const int version = get_field<int>(m, "format_version", file, "");
    if (version != kBundleFormatVersion)
        throw Error(ErrorKind::schema, fmt::format("unsupported format_version {}", version), file, "format_version");

    GeometryBundle b;
    b.video_id = get_field<std::string>(m, "video_id", file, "");
    b.width = get_field<int>(m, "width", file, "");
    b.height = get_field<int>(m, "height", file, "");
    b.has_rgb = m.contains("rgb") ? get_field<bool>(m, "rgb", file, "") : false;
    const auto n = get_field<std::size_t>(m, "frame_count", file, "");
    if (n < 2) throw Error(ErrorKind::schema, fmt::format("frame_count {} < 2: no frame pairs", n), file, "frame_count");
    if (b.width <= 0 || b.height <= 0) throw Error(ErrorKind::schema, "resolution must be positive", file, "width");
    const json frames = get_field<json>(m, "frames", file, "");
    if (!frames.is_array() || frames.size() != n)
        throw Error(ErrorKind::schema, "frames must list frame_count entries", file, "frames");
    const json tracks = get_field<json>(m, "tracks", file, "");
    if (!tracks.is_array() || tracks.size() != n - 1)
        throw Error(ErrorKind::schema, "tracks must list frame_count - 1 files", file, "tracks");

    const std::size_t npix = static_cast<std::size_t>(b.width) * b.height;
    b.frames.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string where = fmt::format("frames[{}]", i);
        const json& e = frames[i];
        FrameData& f = b.frames[i];
        f.depth.width = f.mask.width = b.width;
        f.depth.height = f.mask.height = b.height;
        const auto dname = get_field<std::string>(e, "depth", file, where);
        f.depth.values = read_array<float>(dir / dname, npix, where + ".depth");
        const auto mname = get_field<std::string>(e, "mask", file, where);
        f.mask.bits = read_array<std::uint8_t>(dir / mname, npix, where + ".mask");
        for (const auto bit : f.mask.bits)
            if (bit > 1) throw Error(ErrorKind::schema, "mask values must be 0 or 1", (dir / mname).string(), where + ".mask");
        const auto kname = get_field<std::string>(e, "intrinsics", file, where);
        const auto k = read_array<double>(dir / kname, 4, where + ".intrinsics");
        f.intrinsics = {k[0], k[1], k[2], k[3]};
        if (!f.intrinsics.valid())
            throw Error(ErrorKind::schema, "intrinsics require fx, fy > 0", (dir / kname).string(), where + ".intrinsics");
        const auto pname = get_field<std::string>(e, "pose", file, where);
        const auto pose = read_array<double>(dir / pname, 12, where + ".pose");
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) f.rotation(r, c) = pose[r * 3 + c];
        f.translation = Vec3(pose[9], pose[10], pose[11]);
        if (!f.rotation.allFinite() || !f.translation.allFinite())
            throw Error(ErrorKind::schema, "pose has non-finite entries", (dir / pname).string(), where + ".pose");
        const double dev = (Rotation::project(f.rotation).matrix() - f.rotation).norm();
        if (!(dev < kPoseOrthoTolerance))
            throw Error(ErrorKind::schema, fmt::format("pose rotation deviates from SO(3) by {:.3g}", dev),
                        (dir / pname).string(), where + ".pose");
        if (b.has_rgb) {
            const auto rname = get_field<std::string>(e, "rgb", file, where);
            f.rgb = read_array<std::uint8_t>(dir / rname, npix * 3, where + ".rgb");
        }
    }
    b.tracks.resize(n - 1);
    for (std::size_t p = 0; p + 1 < n; ++p) {
        const std::string where = fmt::format("tracks[{}]", p);
        if (!tracks[p].is_string()) throw Error(ErrorKind::schema, "track entry must be a file name", file, where);
        const fs::path tpath = dir / tracks[p].get<std::string>();
        const std::string bytes = read_file(tpath, where);
        if (bytes.size() % 16 != 0)
            throw Error(ErrorKind::schema, "track file size is not a multiple of 16 bytes", tpath.string(), where);
        const auto flat = decode_le<float>(bytes);
        b.tracks[p].reserve(flat.size() / 4);
        for (std::size_t i = 0; i + 3 < flat.size(); i += 4)
            b.tracks[p].push_back({flat[i], flat[i + 1], flat[i + 2], flat[i + 3]});
    }
    if (m.contains("provenance")) b.provenance = m.at("provenance").dump();
    b.validate();
    return b;
}

// ---------------------------------------------------------------------------
// Calibration parameters

json to_json(const CalibrationParams& p) {
    json j;
    j["format_version"] = p.format_version;
    json order = json::array();
    json metrics = json::object();
    for (const auto m : kAllMetrics) {
        const auto& mp = p[m];
        order.push_back(std::string(metric_name(m)));
        metrics[std::string(metric_name(m))] = {
            {"mu", mp.mu}, {"sigma", mp.sigma}, {"z_min", mp.z_min}, {"z_max", mp.z_max}, {"weight", mp.weight}};
    }
    j["metric_order"] = order;
    j["metrics"] = metrics;
    j["ecd_bounds"] = {{"trans_min", p.ecd_bounds.trans_min},
                       {"trans_max", p.ecd_bounds.trans_max},
                       {"rot_min", p.ecd_bounds.rot_min},
                       {"rot_max", p.ecd_bounds.rot_max}};
    j["weights_source"] = p.weights_source;
    j["corpus_fingerprint"] = p.corpus_fingerprint;
    j["corpus_size"] = p.corpus_size;
    return j;
}

CalibrationParams calibration_from_json(const json& j) {
    const std::string file = "calibration";
    CalibrationParams p;
    p.format_version = get_field<int>(j, "format_version", file, "");
    const json metrics = get_field<json>(j, "metrics", file, "");
    for (const auto m : kAllMetrics) {
        const std::string name(metric_name(m));
        const json mj = get_field<json>(metrics, name.c_str(), file, "metrics");
        auto& mp = p[m];
        mp.mu = get_field<double>(mj, "mu", file, "metrics." + name);
        mp.sigma = get_field<double>(mj, "sigma", file, "metrics." + name);
        mp.z_min = get_field<double>(mj, "z_min", file, "metrics." + name);
        mp.z_max = get_field<double>(mj, "z_max", file, "metrics." + name);
        mp.weight = get_field<double>(mj, "weight", file, "metrics." + name);
    }
    if (j.contains("metric_order")) {
        // Order is informational; entries must still name known metrics.
        for (const auto& name : j.at("metric_order")) metric_from_name(name.get<std::string>());
    }
    const json eb = get_field<json>(j, "ecd_bounds", file, "");
    p.ecd_bounds.trans_min = get_field<double>(eb, "trans_min", file, "ecd_bounds");
    p.ecd_bounds.trans_max = get_field<double>(eb, "trans_max", file, "ecd_bounds");
    p.ecd_bounds.rot_min = get_field<double>(eb, "rot_min", file, "ecd_bounds");
    p.ecd_bounds.rot_max = get_field<double>(eb, "rot_max", file, "ecd_bounds");
    p.weights_source = j.value("weights_source", std::string("pca"));
    p.corpus_fingerprint = j.value("corpus_fingerprint", std::string());
    p.corpus_size = j.value("corpus_size", std::size_t{0});
    p.validate();
    return p;
}

// ---------------------------------------------------------------------------
// Reports

namespace {
json metric_object(const MetricVector& v) {
    json j = json::object();
    for (const auto m : kAllMetrics) j[std::string(metric_name(m))] = at(v, m);
    return j;
}

std::string_view status_name(SubregionStatus s) {
    switch (s) {
        case SubregionStatus::ok: return "ok";
        case SubregionStatus::insufficient_points: return "insufficient_points";
        case SubregionStatus::no_consensus: return "no_consensus";
    }
    return "unknown";
}
}  // namespace

json to_json(const PairMetrics& pm) {
    json j;
    j["frame_index"] = pm.frame_index;
    j["evaluable"] = pm.evaluable;
    j["depth_evaluable"] = pm.depth_evaluable;
    j["n_subregions"] = pm.n_subregions;
    j["metrics"] = metric_object(pm.values());
    j["depth_valid_pixels"] = pm.depth_valid_pixels;
    j["global_trans_mag"] = pm.global_trans_mag;
    j["global_rot_mag"] = pm.global_rot_mag;
    json subs = json::array();
    for (const auto& s : pm.subregions)
        subs.push_back({{"id", s.id},
                        {"depth_center", s.depth_center},
                        {"pixels", s.pixel_count},
                        {"correspondences", s.correspondence_count},
                        {"inliers", s.inlier_count},
                        {"status", std::string(status_name(s.status))}});
    j["subregions"] = subs;
    return j;
}

json to_json(const EcdValue& e) {
    return {{"trans_mag", e.trans_mag},
            {"rot_mag", e.rot_mag},
            {"trans_scaled", e.trans_scaled},
            {"rot_scaled", e.rot_scaled},
            {"ecd", e.ecd}};
}

json to_json(const SgcReport& r) {
    json j;
    j["video_id"] = r.video_id;
    j["raw"] = metric_object(r.raw);
    j["normalized"] = metric_object(r.normalized);
    j["weights"] = metric_object(r.weights);
    j["sgc"] = r.sgc;
    j["ecd"] = to_json(r.ecd);
    json clipped = json::array();
    for (const auto m : r.upper_clipped) clipped.push_back(std::string(metric_name(m)));
    j["upper_clipped"] = clipped;
    j["pair_count"] = r.pair_count;
    j["depth_pair_count"] = r.depth_pair_count;
    json pairs = json::array();
    for (const auto& pm : r.pairs) pairs.push_back(to_json(pm));
    j["pairs"] = pairs;
    return j;
}

json error_json(const std::exception& e, const std::string& context) {
    json err;
    err["message"] = e.what();
    if (const auto* se = dynamic_cast<const Error*>(&e)) {
        err["kind"] = std::string(to_string(se->kind()));
        if (!se->file().empty()) err["file"] = se->file();
        if (!se->field().empty()) err["field"] = se->field();
    } else {
        err["kind"] = "internal";
    }
    if (!context.empty()) err["context"] = context;
    return {{"error", err}};
}

// ---------------------------------------------------------------------------
// Perturbation and scene specs

json to_json(const PerturbSpec& s) {
    return {{"kind", std::string(perturb_kind_name(s.kind))},
            {"severity", s.severity},
            {"seed", s.seed},
            {"params",
             {{"wavelength", s.params.wavelength},
              {"warp_amplitude", s.params.warp_amplitude},
              {"max_squeeze", s.params.max_squeeze},
              {"remap_amplitude", s.params.remap_amplitude},
              {"noise_density", s.params.noise_density},
              {"kernel_fraction", s.params.kernel_fraction}}}};
}

PerturbSpec perturb_spec_from_json(const json& j, const PerturbParams& defaults) {
    const std::string file = "perturb spec";
    PerturbSpec s;
    s.params = defaults;
    s.kind = perturb_kind_from_name(get_field<std::string>(j, "kind", file, ""));
    s.severity = get_field<double>(j, "severity", file, "");
    s.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("params")) {
        const json& p = j.at("params");
        s.params.wavelength = p.value("wavelength", s.params.wavelength);
        s.params.warp_amplitude = p.value("warp_amplitude", s.params.warp_amplitude);
        s.params.max_squeeze = p.value("max_squeeze", s.params.max_squeeze);
        s.params.remap_amplitude = p.value("remap_amplitude", s.params.remap_amplitude);
        s.params.noise_density = p.value("noise_density", s.params.noise_density);
        s.params.kernel_fraction = p.value("kernel_fraction", s.params.kernel_fraction);
    }
    s.validate();
    return s;
}

namespace {
Vec3 vec3_field(const json& j, const char* key, const std::string& where) {
    const auto v = get_field<std::vector<double>>(j, key, "scene spec", where);
    if (v.size() != 3) throw Error(ErrorKind::schema, fmt::format("'{}' must have 3 entries", key), "scene spec", where + "." + key);
    return {v[0], v[1], v[2]};
}

Pose pose_from_json(const json& j, const std::string& where) {
    const auto r = get_field<std::vector<double>>(j, "rotation", "scene spec", where);
    if (r.size() != 9) throw Error(ErrorKind::schema, "rotation must have 9 entries", "scene spec", where + ".rotation");
    Mat3 m;
    for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = r[i];
    return {Rotation::project(m), vec3_field(j, "translation", where)};
}
}  // namespace

SceneSpec scene_spec_from_json(const json& j) {
    const std::string file = "scene spec";
    SceneSpec s;
    s.video_id = j.value("video_id", s.video_id);
    s.width = j.value("width", s.width);
    s.height = j.value("height", s.height);
    if (j.contains("intrinsics")) {
        const auto k = j.at("intrinsics").get<std::vector<double>>();
        if (k.size() != 4) throw Error(ErrorKind::schema, "intrinsics must be [fx, fy, cx, cy]", file, "intrinsics");
        s.intrinsics = {k[0], k[1], k[2], k[3]};
    }
    for (std::size_t p = 0; p < j.at("planes").size(); ++p) {
        const json& pj = j.at("planes")[p];
        const std::string where = fmt::format("planes[{}]", p);
        PlaneSpec pl;
        pl.center = vec3_field(pj, "center", where);
        pl.normal = vec3_field(pj, "normal", where).normalized();
        pl.axis_u = vec3_field(pj, "axis_u", where).normalized();
        const auto he = get_field<std::vector<double>>(pj, "half_extent", file, where);
        if (he.size() != 2) throw Error(ErrorKind::schema, "half_extent must be [u, v]", file, where + ".half_extent");
        pl.half_u = he[0];
        pl.half_v = he[1];
        s.planes.push_back(pl);
    }
    const json& tj = get_field<json>(j, "trajectory", file, "");
    if (tj.is_array()) {
        for (std::size_t k = 0; k < tj.size(); ++k) s.trajectory.push_back(pose_from_json(tj[k], fmt::format("trajectory[{}]", k)));
    } else {
        LinearTrajectory lt;
        lt.frames = get_field<int>(tj, "frames", file, "trajectory");
        if (tj.contains("start_center")) lt.start_center = vec3_field(tj, "start_center", "trajectory");
        if (tj.contains("velocity")) lt.velocity = vec3_field(tj, "velocity", "trajectory");
        if (tj.contains("start_rotation")) lt.start_rotation = vec3_field(tj, "start_rotation", "trajectory");
        if (tj.contains("angular_velocity")) lt.angular_velocity = vec3_field(tj, "angular_velocity", "trajectory");
        s.trajectory = lt.poses();
    }
    s.track_density = j.value("track_density", s.track_density);
    if (j.contains("dynamic_patch")) {
        const json& d = j.at("dynamic_patch");
        DynamicPatch dp;
        dp.x0 = get_field<double>(d, "x0", file, "dynamic_patch");
        dp.y0 = get_field<double>(d, "y0", file, "dynamic_patch");
        dp.width = get_field<double>(d, "width", file, "dynamic_patch");
        dp.height = get_field<double>(d, "height", file, "dynamic_patch");
        dp.du = d.value("du", 0.0);
        dp.dv = d.value("dv", 0.0);
        dp.depth = d.value("depth", dp.depth);
        s.dynamic_patch = dp;
    }
    if (j.contains("violation")) {
        const json& v = j.at("violation");
        Violation vi;
        vi.plane_id = get_field<int>(v, "plane_id", file, "violation");
        const Vec3 w = v.contains("rotation") ? vec3_field(v, "rotation", "violation") : Vec3::Zero();
        const Vec3 t = v.contains("translation") ? vec3_field(v, "translation", "violation") : Vec3::Zero();
        vi.extra_motion = {Rotation::exp(w), t};
        s.violation = vi;
    }
    s.depth_noise = j.value("depth_noise", 0.0);
    s.track_noise = j.value("track_noise", 0.0);
    s.render_rgb = j.value("render_rgb", false);
    s.seed = j.value("seed", std::uint64_t{0});
    s.validate();
    return s;
}

// ---------------------------------------------------------------------------
// Run configuration

void apply_config_json(RunConfig& cfg, const json& j) {
    if (!j.is_object()) throw Error(ErrorKind::schema, "config must be a JSON object", "config");
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "k_seg") cfg.scoring.cluster.k_seg = value.get<int>();
            else if (key == "s_min") cfg.scoring.cluster.s_min = value.get<int>();
            else if (key == "kmeans_max_iters") cfg.scoring.cluster.max_iters = value.get<int>();
            else if (key == "cluster_seed") cfg.scoring.cluster.seed = value.get<std::uint64_t>();
            else if (key == "pnp_inlier_thresh") cfg.scoring.pnp.inlier_thresh = value.get<double>();
            else if (key == "pnp_confidence") cfg.scoring.pnp.confidence = value.get<double>();
            else if (key == "pnp_iterations") cfg.scoring.pnp.max_iters = value.get<int>();
            else if (key == "pnp_min_points") cfg.scoring.pnp.min_points = value.get<int>();
            else if (key == "pnp_refine_iters") cfg.scoring.pnp.refine_iters = value.get<int>();
            else if (key == "pnp_seed") cfg.scoring.pnp.seed = value.get<std::uint64_t>();
            else if (key == "threads") cfg.scoring.threads = value.get<int>();
            else if (key == "wavelength") cfg.perturb_defaults.wavelength = value.get<double>();
            else if (key == "warp_amplitude") cfg.perturb_defaults.warp_amplitude = value.get<double>();
            else if (key == "max_squeeze") cfg.perturb_defaults.max_squeeze = value.get<double>();
            else if (key == "remap_amplitude") cfg.perturb_defaults.remap_amplitude = value.get<double>();
            else if (key == "noise_density") cfg.perturb_defaults.noise_density = value.get<double>();
            else if (key == "kernel_fraction") cfg.perturb_defaults.kernel_fraction = value.get<double>();
            else if (key == "profile") cfg.profile = value.get<std::string>();
            else if (key == "output") cfg.output = value.get<std::string>();
            else throw Error(ErrorKind::schema, fmt::format("unknown config key '{}'", key), "config", key);
        } catch (const json::exception&) {
            throw Error(ErrorKind::schema, fmt::format("config key '{}' has the wrong type", key), "config", key);
        }
    }
}

json read_json_file(const fs::path& path) {
    const std::string text = read_file(path, "json");
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::schema, fmt::format("invalid JSON: {}", e.what()), path.string());
    }
}

void write_text_file(const fs::path& path, const std::string& text) { write_file(path, text); }

}  // namespace sgc
