#pragma once

#include "sgc/bundle.hpp"

#include <cstdint>
#include <string_view>

namespace sgc {

enum class PerturbKind { warp, squeeze, depth_warp, mask_erode, mask_dilate, mask_fp_noise, mask_fn_noise };

std::string_view perturb_kind_name(PerturbKind kind);
PerturbKind perturb_kind_from_name(std::string_view name);

struct PerturbParams {
    double wavelength = 64.0;         // px, sinusoid period
    double warp_amplitude = 8.0;      // px at severity 1, last frame
    double max_squeeze = 0.4;         // vertical compression fraction at severity 1, last frame
    double remap_amplitude = 8.0;     // px, depth_warp field amplitude
    double noise_density = 0.15;      // flip probability at severity 1
    double kernel_fraction = 0.02;    // structuring element side as a fraction of the image diagonal
};

struct PerturbSpec {
    PerturbKind kind = PerturbKind::warp;
    double severity = 0.0;
    PerturbParams params;
    std::uint64_t seed = 0;

    void validate() const;
};

/// severity * i / (T - 1) * (the kind's maximum amplitude).
double severity_at(const PerturbSpec& spec, std::size_t frame_index, std::size_t total_frames);

/// Sinusoidal displacement A * (sin(2πv/λ + φu), sin(2πu/λ + φv)).
Vec2 warp_displacement(const Vec2& p, double amplitude, double wavelength, double phase_u, double phase_v);

/// Phase of frame i out of T: 2π i / T.
double warp_phase(std::size_t frame_index, std::size_t total_frames);

/// Time-varying non-rigid warp of track endpoints (and RGB); depth, masks and poses untouched.
GeometryBundle apply_warp(const GeometryBundle& bundle, const PerturbSpec& spec);

/// Vertical compression of track v-coordinates about the image center.
GeometryBundle apply_squeeze(const GeometryBundle& bundle, const PerturbSpec& spec);

/// One remap field applied to depth (bilinear), masks (nearest), RGB and tracks.
GeometryBundle apply_depth_warp(const GeometryBundle& bundle, const PerturbSpec& spec);

/// Morphology or random flips on the dynamic region of every frame's mask.
GeometryBundle corrupt_mask(const GeometryBundle& bundle, const PerturbSpec& spec);

/// Dispatch on spec.kind.
GeometryBundle apply_perturbation(const GeometryBundle& bundle, const PerturbSpec& spec);

/// Side of the square structuring element: ceil(severity * fraction * diagonal), rounded up to odd; 0 = none.
int mask_kernel_side(const PerturbSpec& spec, int width, int height);

}  // namespace sgc
