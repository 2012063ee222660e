#pragma once

#include "sgc/geometry.hpp"

#include <cstdint>
#include <vector>

namespace sgc {

/// Row-major boolean raster; 1 = static background.
struct StaticMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    StaticMask() = default;
    StaticMask(int w, int h, bool fill = true)
        : width(w), height(h), bits(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {}

    bool contains(int u, int v) const noexcept { return u >= 0 && v >= 0 && u < width && v < height; }
    bool at(int u, int v) const { return bits[static_cast<std::size_t>(v) * width + u] != 0; }
    void set(int u, int v, bool value) { bits[static_cast<std::size_t>(v) * width + u] = value ? 1 : 0; }
    std::size_t count() const;
};

/// Ω \ M: bit-wise complement over the image domain.
StaticMask mask_complement(const StaticMask& mask);

struct SubRegion {
    int id = 0;
    std::vector<Pixel> pixels;
    double depth_center = 0.0;
};

struct ClusterConfig {
    int k_seg = 10;
    int s_min = 200;
    int max_iters = 50;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Per-iteration k-means diagnostics.
struct KMeansTrace {
    std::vector<double> inertia;  // within-cluster sum of squares after each update
    int iterations = 0;
    int initial_k = 0;
};

/// 1D k-means (k-means++ seeding) on the valid static depths, followed by the
/// minimum-size filter. Output is sorted by depth_center; ids are the sorted
/// positions. Throws Error(empty_region) when no static pixel has valid depth.
std::vector<SubRegion> cluster_static_depth(const DepthMap& depth, const StaticMask& mask,
                                            const ClusterConfig& cfg, KMeansTrace* trace = nullptr);

/// Raster of sub-region ids (-1 elsewhere), for per-pixel membership lookups.
std::vector<int> label_raster(const std::vector<SubRegion>& regions, int width, int height);

}  // namespace sgc
