#include "sgc/calibration.hpp"

#include "sgc/common.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sgc {

MetricVector CalibrationParams::weights() const {
    MetricVector w{};
    for (const auto m : kAllMetrics) at(w, m) = (*this)[m].weight;
    return w;
}

void CalibrationParams::set_weights(const MetricVector& w) {
    for (const auto m : kAllMetrics) (*this)[m].weight = at(w, m);
}

void CalibrationParams::validate() const {
    if (format_version != kCalibrationFormatVersion)
        throw Error(ErrorKind::invalid_argument, fmt::format("unsupported calibration format_version {}", format_version),
                    {}, "format_version");
    double sum = 0.0;
    for (const auto m : kAllMetrics) {
        const auto& p = (*this)[m];
        const std::string name(metric_name(m));
        if (!std::isfinite(p.mu) || !std::isfinite(p.sigma) || !(p.sigma > 0.0))
            throw Error(ErrorKind::invalid_argument, "sigma must be finite and > 0", {}, name + ".sigma");
        if (!std::isfinite(p.z_min) || !std::isfinite(p.z_max) || !(p.z_max > p.z_min))
            throw Error(ErrorKind::invalid_argument, "z_max must exceed z_min", {}, name + ".z_max");
        if (!std::isfinite(p.weight) || p.weight < 0.0)
            throw Error(ErrorKind::invalid_argument, "weight must be finite and >= 0", {}, name + ".weight");
        sum += p.weight;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw Error(ErrorKind::invalid_argument, fmt::format("weights sum to {:.12g}, not 1", sum), {}, "weights");
}

MetricVector paper_v1_weights() {
    MetricVector w{};
    at(w, Metric::trans_var_global) = 0.2459;
    at(w, Metric::trans_var_local) = 0.2403;
    at(w, Metric::depth_error) = 0.2307;
    at(w, Metric::rot_var_global) = 0.1665;
    at(w, Metric::rot_var_local) = 0.1167;
    // The preset is given to four decimals and sums to 1.0001.
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& x : w) x /= sum;
    return w;
}

MetricVector weight_profile(const std::string& name) {
    if (name == "paper-v1") return paper_v1_weights();
    if (name == "uniform") return {0.2, 0.2, 0.2, 0.2, 0.2};
    throw Error(ErrorKind::invalid_argument, fmt::format("unknown weight profile '{}'", name), {}, "profile");
}

MetricVector log_transform(const MetricVector& raw) {
    MetricVector out{};
    for (const auto m : kAllMetrics) {
        const double x = at(raw, m);
        if (!std::isfinite(x))
            throw Error(ErrorKind::non_finite, fmt::format("{} is not finite", metric_name(m)), {},
                        std::string(metric_name(m)));
        if (x < 0.0)
            throw Error(ErrorKind::invalid_argument, fmt::format("{} is negative", metric_name(m)), {},
                        std::string(metric_name(m)));
        at(out, m) = is_variance_metric(m) ? std::log1p(x) : x;
    }
    return out;
}

PcaResult first_principal_component(const Eigen::MatrixXd& data) {
    const Eigen::Index n = data.rows();
    const Eigen::Index d = data.cols();
    if (n < 2 || d < 1) throw Error(ErrorKind::insufficient_corpus, "PCA needs at least two samples");
    const Eigen::MatrixXd centered = data.rowwise() - data.colwise().mean();
    const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);
    const double scale = cov.cwiseAbs().maxCoeff();
    if (!(scale > 0.0)) throw Error(ErrorKind::degenerate_variance, "covariance matrix is zero");

    // Repeated squaring runs 2^k power steps at once; a few plain steps polish.
    Eigen::MatrixXd m = cov / scale;
    for (int i = 0; i < 64; ++i) {
        m = m * m;
        const double mx = m.cwiseAbs().maxCoeff();
        if (!(mx > 0.0)) break;
        m /= mx;
    }
    Eigen::Index col = 0;
    m.colwise().norm().maxCoeff(&col);
    Eigen::VectorXd v = m.col(col).normalized();
    if (!v.allFinite()) v = Eigen::VectorXd::Ones(d).normalized();
    for (int i = 0; i < 1000; ++i) {
        Eigen::VectorXd next = (cov * v).normalized();
        if (next.dot(v) < 0.0) next = -next;
        const double change = (next - v).norm();
        v = next;
        if (change < 1e-15) break;
    }

    // Sign: majority of loadings nonnegative; ties resolved by the largest entry.
    const auto pos = (v.array() > 0.0).count();
    const auto neg = (v.array() < 0.0).count();
    Eigen::Index big = 0;
    v.cwiseAbs().maxCoeff(&big);
    if (neg > pos || (neg == pos && v(big) < 0.0)) v = -v;

    PcaResult r;
    r.eigenvalue = v.dot(cov * v);
    r.loading = v;
    r.covariance = cov;
    return r;
}

Eigen::VectorXd pca_weights(const Eigen::MatrixXd& normalized) {
    const PcaResult pc = first_principal_component(normalized);
    Eigen::VectorXd w = pc.loading.cwiseAbs();
    return w / w.sum();
}

std::string corpus_fingerprint(std::span<const VideoRawMetrics> corpus) {
    std::vector<std::string> ids;
    ids.reserve(corpus.size());
    for (const auto& v : corpus) ids.push_back(v.video_id);
    std::sort(ids.begin(), ids.end());
    std::string joined;
    for (const auto& id : ids) {
        joined += id;
        joined.push_back('\n');
    }
    return fmt::format("{:016x}", hash_string(joined));
}

namespace {

double zscore(double x, const MetricParams& p) { return (x - p.mu) / p.sigma; }

double minmax(double z, const MetricParams& p) { return (z - p.z_min) / (p.z_max - p.z_min); }

}  // namespace

CalibrationParams fit_calibration(std::span<const VideoRawMetrics> corpus, const FitOptions& options) {
    if (corpus.size() < 3)
        throw Error(ErrorKind::insufficient_corpus,
                    fmt::format("calibration needs at least 3 videos, got {}", corpus.size()));
    const auto n = static_cast<Eigen::Index>(corpus.size());
    Eigen::MatrixXd logged(n, static_cast<Eigen::Index>(kMetricCount));
    for (Eigen::Index r = 0; r < n; ++r) {
        const MetricVector t = log_transform(corpus[r].means);
        for (std::size_t c = 0; c < kMetricCount; ++c) logged(r, static_cast<Eigen::Index>(c)) = t[c];
    }

    CalibrationParams params;
    params.corpus_size = corpus.size();
    params.corpus_fingerprint = corpus_fingerprint(corpus);
    Eigen::MatrixXd normalized(n, static_cast<Eigen::Index>(kMetricCount));
    for (const auto m : kAllMetrics) {
        const auto c = static_cast<Eigen::Index>(m);
        MetricParams& p = params[m];
        p.mu = logged.col(c).mean();
        const double var = (logged.col(c).array() - p.mu).square().sum() / static_cast<double>(n);
        p.sigma = std::sqrt(var);
        if (!(p.sigma > 1e-12 * std::max(1.0, std::abs(p.mu))))
            throw Error(ErrorKind::degenerate_variance,
                        fmt::format("metric '{}' has zero variance across the corpus", metric_name(m)), {},
                        std::string(metric_name(m)));
        p.z_min = std::numeric_limits<double>::infinity();
        p.z_max = -std::numeric_limits<double>::infinity();
        for (Eigen::Index r = 0; r < n; ++r) {
            const double z = zscore(logged(r, c), p);
            p.z_min = std::min(p.z_min, z);
            p.z_max = std::max(p.z_max, z);
        }
        for (Eigen::Index r = 0; r < n; ++r) normalized(r, c) = minmax(zscore(logged(r, c), p), p);
    }

    if (options.mode == WeightMode::fixed) {
        params.set_weights(weight_profile(options.profile));
        params.weights_source = options.profile;
    } else {
        const Eigen::VectorXd w = pca_weights(normalized);
        MetricVector wv{};
        for (std::size_t c = 0; c < kMetricCount; ++c) wv[c] = w(static_cast<Eigen::Index>(c));
        params.set_weights(wv);
        params.weights_source = "pca";
    }

    EcdBounds& b = params.ecd_bounds;
    b.trans_min = b.rot_min = std::numeric_limits<double>::infinity();
    b.trans_max = b.rot_max = -std::numeric_limits<double>::infinity();
    for (const auto& v : corpus) {
        b.trans_min = std::min(b.trans_min, v.trans_mag);
        b.trans_max = std::max(b.trans_max, v.trans_mag);
        b.rot_min = std::min(b.rot_min, v.rot_mag);
        b.rot_max = std::max(b.rot_max, v.rot_mag);
    }
    params.validate();
    return params;
}

NormalizedScores normalize_video(const MetricVector& raw_means, const CalibrationParams& params) {
    const MetricVector t = log_transform(raw_means);
    NormalizedScores out;
    for (const auto m : kAllMetrics) {
        const MetricParams& p = params[m];
        const double x = minmax(zscore(at(t, m), p), p);
        if (x > 1.0) out.upper_clipped.push_back(m);
        at(out.values, m) = std::clamp(x, 0.0, 1.0);
    }
    return out;
}

double sgc_score(std::span<const double> normalized, std::span<const double> weights) {
    if (normalized.size() != weights.size())
        throw Error(ErrorKind::invalid_argument,
                    fmt::format("{} scores but {} weights", normalized.size(), weights.size()));
    const double wsum = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (std::abs(wsum - 1.0) > 1e-9) throw Error(ErrorKind::invalid_argument, "weights do not sum to 1");
    double s = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) s += weights[i] * normalized[i];
    return s;
}

SgcReport score_video(const VideoRawMetrics& raw, const CalibrationParams& params) {
    params.validate();
    SgcReport r;
    r.video_id = raw.video_id;
    r.raw = raw.means;
    const NormalizedScores ns = normalize_video(raw.means, params);
    r.normalized = ns.values;
    r.upper_clipped = ns.upper_clipped;
    r.weights = params.weights();
    r.sgc = sgc_score(r.normalized, r.weights);
    r.ecd = compute_ecd(raw.trans_mag, raw.rot_mag, params.ecd_bounds);
    r.pair_count = raw.pair_count;
    r.depth_pair_count = raw.depth_pair_count;
    r.pairs = raw.pairs;
    return r;
}

namespace {

std::vector<double> average_ranks(std::span<const double> x) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(x.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double spearman_rho(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2)
        throw Error(ErrorKind::invalid_argument, "spearman_rho needs two equal-length samples of size >= 2");
    const auto ra = average_ranks(a);
    const auto rb = average_ranks(b);
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
    const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        sab += (ra[i] - ma) * (rb[i] - mb);
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (!(saa > 0.0) || !(sbb > 0.0)) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

StabilityResult kfold_weight_stability(std::span<const VideoRawMetrics> corpus, int folds) {
    if (folds < 2) throw Error(ErrorKind::invalid_argument, "need at least 2 folds");
    StabilityResult out;
    const CalibrationParams full = fit_calibration(corpus);
    out.full_weights = full.weights();
    std::vector<double> full_scores;
    for (const auto& v : corpus) full_scores.push_back(score_video(v, full).sgc);

    for (int f = 0; f < folds; ++f) {
        std::vector<VideoRawMetrics> train;
        for (std::size_t i = 0; i < corpus.size(); ++i)
            if (static_cast<int>(i % folds) != f) train.push_back(corpus[i]);
        const CalibrationParams fp = fit_calibration(train);
        std::vector<double> scores;
        for (const auto& v : corpus) scores.push_back(score_video(v, fp).sgc);
        out.rho.push_back(spearman_rho(scores, full_scores));
        out.fold_weights.push_back(fp.weights());
    }
    return out;
}

}  // namespace sgc
