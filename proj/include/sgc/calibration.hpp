#pragma once

#include "sgc/metrics.hpp"

#include <Eigen/Core>

#include <span>
#include <string>
#include <vector>

namespace sgc {

inline constexpr int kCalibrationFormatVersion = 1;

struct MetricParams {
    double mu = 0.0;     // mean of the (log-)transformed video means
    double sigma = 1.0;  // population standard deviation of the same
    double z_min = 0.0;
    double z_max = 1.0;
    double weight = 0.2;
};

/// Dataset-level normalization parameters and component weights.
struct CalibrationParams {
    int format_version = kCalibrationFormatVersion;
    std::array<MetricParams, kMetricCount> metrics{};
    EcdBounds ecd_bounds;
    std::string weights_source = "pca";  // "pca" or a preset name
    std::string corpus_fingerprint;
    std::size_t corpus_size = 0;

    MetricParams& operator[](Metric m) { return metrics[static_cast<std::size_t>(m)]; }
    const MetricParams& operator[](Metric m) const { return metrics[static_cast<std::size_t>(m)]; }
    MetricVector weights() const;
    void set_weights(const MetricVector& w);
    /// Throws Error(invalid_argument) naming the first violated invariant.
    void validate() const;
};

/// Preset PC1 weights, renormalized to sum to one.
MetricVector paper_v1_weights();
/// Resolves a named weight profile; throws for unknown names.
MetricVector weight_profile(const std::string& name);

/// ln(1 + x) on the four variance metrics; depth passes through.
MetricVector log_transform(const MetricVector& raw);

struct PcaResult {
    Eigen::VectorXd loading;  // unit norm, sign-normalized
    double eigenvalue = 0.0;
    Eigen::MatrixXd covariance;
};

/// First principal component of the column-centered data (rows = samples)
/// by accelerated power iteration on the sample covariance.
PcaResult first_principal_component(const Eigen::MatrixXd& data);

/// |PC1 loadings| normalized to sum to one.
Eigen::VectorXd pca_weights(const Eigen::MatrixXd& normalized);

enum class WeightMode { pca, fixed };

struct FitOptions {
    WeightMode mode = WeightMode::pca;
    std::string profile;  // used when mode == fixed
};

/// Fits log / z-score / min-max parameters, ECD bounds and (unless a fixed
/// profile is requested) PCA weights. Requires at least three videos.
CalibrationParams fit_calibration(std::span<const VideoRawMetrics> corpus, const FitOptions& options = {});

std::string corpus_fingerprint(std::span<const VideoRawMetrics> corpus);

struct NormalizedScores {
    MetricVector values{};
    std::vector<Metric> upper_clipped;
};

/// Log transform, z-score, min-max and clip to [0, 1].
NormalizedScores normalize_video(const MetricVector& raw_means, const CalibrationParams& params);

/// Weighted sum; throws on length mismatch or weights not summing to one.
double sgc_score(std::span<const double> normalized, std::span<const double> weights);

struct SgcReport {
    std::string video_id;
    MetricVector raw{};
    MetricVector normalized{};
    MetricVector weights{};
    double sgc = 0.0;
    EcdValue ecd;
    std::vector<Metric> upper_clipped;
    int pair_count = 0;
    int depth_pair_count = 0;
    std::vector<PairMetrics> pairs;
};

SgcReport score_video(const VideoRawMetrics& raw, const CalibrationParams& params);

/// Spearman rank correlation with average ranks for ties.
double spearman_rho(std::span<const double> a, std::span<const double> b);

struct StabilityResult {
    std::vector<double> rho;  // per fold: scores under fold params vs full params, over the whole corpus
    std::vector<MetricVector> fold_weights;
    MetricVector full_weights{};
};

/// k-fold refit harness: fold f trains on videos with index % k != f.
StabilityResult kfold_weight_stability(std::span<const VideoRawMetrics> corpus, int folds);

}  // namespace sgc
