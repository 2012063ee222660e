#include "sgc/clustering.hpp"

#include "sgc/common.hpp"
#include "sgc/random.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace sgc {

std::size_t StaticMask::count() const {
    return static_cast<std::size_t>(std::count_if(bits.begin(), bits.end(), [](std::uint8_t b) { return b != 0; }));
}

StaticMask mask_complement(const StaticMask& mask) {
    StaticMask out = mask;
    for (auto& b : out.bits) b = b ? 0 : 1;
    return out;
}

void ClusterConfig::validate() const {
    if (k_seg < 1) throw Error(ErrorKind::invalid_argument, "k_seg must be >= 1", {}, "k_seg");
    if (s_min < 1) throw Error(ErrorKind::invalid_argument, "s_min must be >= 1", {}, "s_min");
    if (max_iters < 1) throw Error(ErrorKind::invalid_argument, "max_iters must be >= 1", {}, "kmeans_max_iters");
}

namespace {

std::vector<double> kmeanspp_seed(const std::vector<double>& x, int k, Rng& rng) {
    std::vector<double> centers;
    centers.reserve(k);
    centers.push_back(x[rng.index(x.size())]);
    std::vector<double> d2(x.size(), std::numeric_limits<double>::infinity());
    while (static_cast<int>(centers.size()) < k) {
        const double c = centers.back();
        double total = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            d2[i] = std::min(d2[i], (x[i] - c) * (x[i] - c));
            total += d2[i];
        }
        if (!(total > 0.0)) break;
        const double target = rng.uniform() * total;
        double acc = 0.0;
        std::size_t pick = x.size() - 1;
        for (std::size_t i = 0; i < x.size(); ++i) {
            acc += d2[i];
            if (acc > target && d2[i] > 0.0) {
                pick = i;
                break;
            }
        }
        // Floating-point slack can run past the end; fall back to the farthest point.
        if (d2[pick] == 0.0) pick = static_cast<std::size_t>(std::max_element(d2.begin(), d2.end()) - d2.begin());
        centers.push_back(x[pick]);
    }
    return centers;
}

int nearest_center(double value, const std::vector<double>& centers) {
    int best = 0;
    double best_d = std::abs(value - centers[0]);
    for (int c = 1; c < static_cast<int>(centers.size()); ++c) {
        const double d = std::abs(value - centers[c]);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

}  // namespace

std::vector<SubRegion> cluster_static_depth(const DepthMap& depth, const StaticMask& mask, const ClusterConfig& cfg,
                                            KMeansTrace* trace) {
    cfg.validate();
    if (depth.width != mask.width || depth.height != mask.height)
        throw Error(ErrorKind::invalid_argument, "depth and mask dimensions differ");

    std::vector<Pixel> pixels;
    std::vector<double> values;
    for (int v = 0; v < depth.height; ++v) {
        for (int u = 0; u < depth.width; ++u) {
            if (!mask.at(u, v)) continue;
            const float d = depth.at(u, v);
            if (!is_valid_depth(d)) continue;
            pixels.push_back({u, v});
            values.push_back(d);
        }
    }
    if (values.empty()) throw Error(ErrorKind::empty_region, "no static pixel with valid depth");

    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const auto distinct = static_cast<int>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
    const int k = std::min(cfg.k_seg, distinct);

    Rng rng(cfg.seed);
    std::vector<double> centers = kmeanspp_seed(values, k, rng);
    std::vector<int> assign(values.size(), -1);
    if (trace) {
        *trace = {};
        trace->initial_k = static_cast<int>(centers.size());
    }

    int iter = 0;
    for (; iter < cfg.max_iters; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < values.size(); ++i) {
            const int c = nearest_center(values[i], centers);
            if (c != assign[i]) {
                assign[i] = c;
                changed = true;
            }
        }
        if (!changed) break;

        std::vector<double> sum(centers.size(), 0.0);
        std::vector<std::size_t> count(centers.size(), 0);
        for (std::size_t i = 0; i < values.size(); ++i) {
            sum[assign[i]] += values[i];
            ++count[assign[i]];
        }
        // Empty clusters are dropped, not re-seeded.
        std::vector<int> remap(centers.size(), -1);
        std::vector<double> next;
        for (std::size_t c = 0; c < centers.size(); ++c) {
            if (count[c] == 0) continue;
            remap[c] = static_cast<int>(next.size());
            next.push_back(sum[c] / static_cast<double>(count[c]));
        }
        for (auto& a : assign) a = remap[a];
        centers = std::move(next);

        if (trace) {
            double inertia = 0.0;
            for (std::size_t i = 0; i < values.size(); ++i) {
                const double d = values[i] - centers[assign[i]];
                inertia += d * d;
            }
            trace->inertia.push_back(inertia);
        }
    }
    if (trace) trace->iterations = iter;

    std::vector<SubRegion> regions(centers.size());
    for (std::size_t c = 0; c < centers.size(); ++c) regions[c].depth_center = centers[c];
    for (std::size_t i = 0; i < values.size(); ++i) regions[assign[i]].pixels.push_back(pixels[i]);

    std::erase_if(regions, [&](const SubRegion& r) { return static_cast<int>(r.pixels.size()) < cfg.s_min; });
    std::stable_sort(regions.begin(), regions.end(),
                     [](const SubRegion& a, const SubRegion& b) { return a.depth_center < b.depth_center; });
    for (std::size_t j = 0; j < regions.size(); ++j) regions[j].id = static_cast<int>(j);
    return regions;
}

std::vector<int> label_raster(const std::vector<SubRegion>& regions, int width, int height) {
    std::vector<int> labels(static_cast<std::size_t>(width) * height, -1);
    for (const auto& r : regions)
        for (const auto& p : r.pixels) labels[static_cast<std::size_t>(p.v) * width + p.u] = r.id;
    return labels;
}

}  // namespace sgc
