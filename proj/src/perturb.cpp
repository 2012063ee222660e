#include "sgc/perturb.hpp"

#include "sgc/common.hpp"
#include "sgc/random.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace sgc {

namespace {
constexpr std::array<std::pair<PerturbKind, std::string_view>, 7> kKindNames{{
    {PerturbKind::warp, "warp"},
    {PerturbKind::squeeze, "squeeze"},
    {PerturbKind::depth_warp, "depth_warp"},
    {PerturbKind::mask_erode, "mask_erode"},
    {PerturbKind::mask_dilate, "mask_dilate"},
    {PerturbKind::mask_fp_noise, "mask_fp_noise"},
    {PerturbKind::mask_fn_noise, "mask_fn_noise"},
}};
}  // namespace

std::string_view perturb_kind_name(PerturbKind kind) {
    for (const auto& [k, name] : kKindNames)
        if (k == kind) return name;
    return "unknown";
}

PerturbKind perturb_kind_from_name(std::string_view name) {
    for (const auto& [k, n] : kKindNames)
        if (n == name) return k;
    throw Error(ErrorKind::invalid_argument, fmt::format("unknown perturbation kind '{}'", name), {}, "kind");
}

void PerturbSpec::validate() const {
    if (!(severity >= 0.0 && severity <= 1.0))
        throw Error(ErrorKind::invalid_argument, "severity must be in [0, 1]", {}, "severity");
    if (!(params.wavelength > 0.0)) throw Error(ErrorKind::invalid_argument, "wavelength must be > 0", {}, "wavelength");
    if (!(params.noise_density >= 0.0 && params.noise_density <= 1.0))
        throw Error(ErrorKind::invalid_argument, "noise_density must be in [0, 1]", {}, "noise_density");
    if (!(params.kernel_fraction >= 0.0))
        throw Error(ErrorKind::invalid_argument, "kernel_fraction must be >= 0", {}, "kernel_fraction");
}

double severity_at(const PerturbSpec& spec, std::size_t i, std::size_t total) {
    double max_amplitude = 0.0;
    switch (spec.kind) {
        case PerturbKind::warp: max_amplitude = spec.params.warp_amplitude; break;
        case PerturbKind::squeeze: max_amplitude = spec.params.max_squeeze; break;
        case PerturbKind::depth_warp: max_amplitude = spec.params.remap_amplitude; break;
        default: max_amplitude = 1.0; break;
    }
    if (total < 2) return 0.0;
    return spec.severity * (static_cast<double>(i) / static_cast<double>(total - 1)) * max_amplitude;
}

Vec2 warp_displacement(const Vec2& p, double amplitude, double wavelength, double phase_u, double phase_v) {
    const double k = 2.0 * std::numbers::pi / wavelength;
    return amplitude * Vec2(std::sin(k * p.y() + phase_u), std::sin(k * p.x() + phase_v));
}

double warp_phase(std::size_t i, std::size_t total) {
    return 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(total);
}

namespace {

struct Field {
    double amplitude = 0.0;
    double wavelength = 64.0;
    double phase = 0.0;

    Vec2 displace(const Vec2& p) const { return p + warp_displacement(p, amplitude, wavelength, phase, phase); }

    // Source location y with y + δ(y) = x, by Newton's method. δu depends only
    // on v and δv only on u, so the Jacobian is I + [[0, a], [b, 0]].
    Vec2 source_of(const Vec2& x) const {
        const double k = 2.0 * std::numbers::pi / wavelength;
        Vec2 y = x - warp_displacement(x, amplitude, wavelength, phase, phase);
        for (int it = 0; it < 30; ++it) {
            const Vec2 g = y + warp_displacement(y, amplitude, wavelength, phase, phase) - x;
            if (g.cwiseAbs().maxCoeff() < 1e-12) break;
            const double a = amplitude * k * std::cos(k * y.y() + phase);
            const double b = amplitude * k * std::cos(k * y.x() + phase);
            const double det = 1.0 - a * b;
            if (std::abs(det) < 1e-12) break;
            y -= Vec2(g.x() - a * g.y(), g.y() - b * g.x()) / det;
        }
        return y;
    }
};

Field field_for(const PerturbSpec& spec, std::size_t i, std::size_t total) {
    return {severity_at(spec, i, total), spec.params.wavelength, warp_phase(i, total)};
}

void displace_tracks(GeometryBundle& b, const PerturbSpec& spec) {
    const std::size_t total = b.frame_count();
    for (std::size_t p = 0; p < b.tracks.size(); ++p) {
        const Field fp = field_for(spec, p, total);
        const Field fc = field_for(spec, p + 1, total);
        for (auto& t : b.tracks[p]) {
            if (fp.amplitude != 0.0) {
                const Vec2 q = fp.displace(t.prev());
                t.u_prev = static_cast<float>(q.x());
                t.v_prev = static_cast<float>(q.y());
            }
            if (fc.amplitude != 0.0) {
                const Vec2 q = fc.displace(t.curr());
                t.u_curr = static_cast<float>(q.x());
                t.v_curr = static_cast<float>(q.y());
            }
        }
    }
}

// Bilinear depth sample over valid neighbours only; 0 (invalid) when none.
float sample_depth(const DepthMap& d, const Vec2& y) {
    const int u0 = static_cast<int>(std::floor(y.x()));
    const int v0 = static_cast<int>(std::floor(y.y()));
    const double fu = y.x() - u0;
    const double fv = y.y() - v0;
    double acc = 0.0;
    double wsum = 0.0;
    for (int dv = 0; dv <= 1; ++dv) {
        for (int du = 0; du <= 1; ++du) {
            const double w = (du ? fu : 1.0 - fu) * (dv ? fv : 1.0 - fv);
            if (w <= 0.0 || !d.valid_at(u0 + du, v0 + dv)) continue;
            acc += w * d.at(u0 + du, v0 + dv);
            wsum += w;
        }
    }
    if (!(wsum > 1e-9)) return 0.0f;
    return static_cast<float>(acc / wsum);
}

void remap_rgb(std::vector<std::uint8_t>& rgb, int w, int h, const Field& f) {
    if (rgb.empty() || f.amplitude == 0.0) return;
    const std::vector<std::uint8_t> src = rgb;
    for (int v = 0; v < h; ++v) {
        for (int u = 0; u < w; ++u) {
            const Vec2 y = f.source_of(Vec2(u, v));
            const int u0 = static_cast<int>(std::floor(y.x()));
            const int v0 = static_cast<int>(std::floor(y.y()));
            const double fu = y.x() - u0;
            const double fv = y.y() - v0;
            for (int c = 0; c < 3; ++c) {
                double acc = 0.0;
                for (int dv = 0; dv <= 1; ++dv) {
                    for (int du = 0; du <= 1; ++du) {
                        const int su = std::clamp(u0 + du, 0, w - 1);
                        const int sv = std::clamp(v0 + dv, 0, h - 1);
                        const double wgt = (du ? fu : 1.0 - fu) * (dv ? fv : 1.0 - fv);
                        acc += wgt * src[(static_cast<std::size_t>(sv) * w + su) * 3 + c];
                    }
                }
                rgb[(static_cast<std::size_t>(v) * w + u) * 3 + c] =
                    static_cast<std::uint8_t>(std::clamp(std::lround(acc), 0L, 255L));
            }
        }
    }
}

}  // namespace

GeometryBundle apply_warp(const GeometryBundle& bundle, const PerturbSpec& spec) {
    spec.validate();
    GeometryBundle out = bundle;
    displace_tracks(out, spec);
    for (std::size_t i = 0; i < out.frame_count(); ++i)
        remap_rgb(out.frames[i].rgb, out.width, out.height, field_for(spec, i, out.frame_count()));
    return out;
}

GeometryBundle apply_squeeze(const GeometryBundle& bundle, const PerturbSpec& spec) {
    spec.validate();
    GeometryBundle out = bundle;
    const std::size_t total = out.frame_count();
    const double cv = 0.5 * (out.height - 1);
    auto squeeze = [&](float& v, std::size_t frame) {
        const double s = 1.0 - severity_at(spec, frame, total);
        if (!(s > 0.0))
            throw Error(ErrorKind::invalid_argument, fmt::format("squeeze factor {} at frame {} is not positive", s, frame),
                        {}, "max_squeeze");
        if (s != 1.0) v = static_cast<float>(cv + s * (v - cv));
    };
    for (std::size_t p = 0; p < out.tracks.size(); ++p) {
        for (auto& t : out.tracks[p]) {
            squeeze(t.v_prev, p);
            squeeze(t.v_curr, p + 1);
        }
    }
    return out;
}

GeometryBundle apply_depth_warp(const GeometryBundle& bundle, const PerturbSpec& spec) {
    spec.validate();
    GeometryBundle out = bundle;
    const int w = out.width;
    const int h = out.height;
    const std::size_t total = out.frame_count();
    for (std::size_t i = 0; i < total; ++i) {
        const Field f = field_for(spec, i, total);
        if (f.amplitude == 0.0) continue;
        FrameData& frame = out.frames[i];
        const FrameData& src = bundle.frames[i];
        for (int v = 0; v < h; ++v) {
            for (int u = 0; u < w; ++u) {
                const Vec2 y = f.source_of(Vec2(u, v));
                frame.depth.at(u, v) = sample_depth(src.depth, y);
                const auto np = nearest_pixel(y, w, h);
                frame.mask.set(u, v, np && src.mask.at(np->u, np->v));
            }
        }
        remap_rgb(frame.rgb, w, h, f);
    }
    displace_tracks(out, spec);
    return out;
}

int mask_kernel_side(const PerturbSpec& spec, int width, int height) {
    const double diag = std::hypot(static_cast<double>(width), static_cast<double>(height));
    const double k = spec.severity * spec.params.kernel_fraction * diag;
    if (!(k > 0.0)) return 0;
    int side = static_cast<int>(std::ceil(k - 1e-9));
    if (side % 2 == 0) ++side;
    return side;
}

namespace {

// Square min/max filter over the dynamic raster (1 = dynamic); out-of-image
// samples are ignored.
std::vector<std::uint8_t> morph(const std::vector<std::uint8_t>& in, int w, int h, int side, bool dilate) {
    const int r = side / 2;
    std::vector<std::uint8_t> tmp(in.size());
    std::vector<std::uint8_t> out(in.size());
    for (int v = 0; v < h; ++v) {
        for (int u = 0; u < w; ++u) {
            bool acc = !dilate;
            for (int d = std::max(0, u - r); d <= std::min(w - 1, u + r); ++d) {
                const bool x = in[static_cast<std::size_t>(v) * w + d] != 0;
                acc = dilate ? (acc || x) : (acc && x);
            }
            tmp[static_cast<std::size_t>(v) * w + u] = acc;
        }
    }
    for (int v = 0; v < h; ++v) {
        for (int u = 0; u < w; ++u) {
            bool acc = !dilate;
            for (int d = std::max(0, v - r); d <= std::min(h - 1, v + r); ++d) {
                const bool x = tmp[static_cast<std::size_t>(d) * w + u] != 0;
                acc = dilate ? (acc || x) : (acc && x);
            }
            out[static_cast<std::size_t>(v) * w + u] = acc;
        }
    }
    return out;
}

}  // namespace

GeometryBundle corrupt_mask(const GeometryBundle& bundle, const PerturbSpec& spec) {
    spec.validate();
    if (spec.severity == 0.0) return bundle;
    GeometryBundle out = bundle;
    const int w = out.width;
    const int h = out.height;
    for (std::size_t i = 0; i < out.frame_count(); ++i) {
        StaticMask& mask = out.frames[i].mask;
        StaticMask dyn = mask_complement(mask);
        switch (spec.kind) {
            case PerturbKind::mask_erode:
            case PerturbKind::mask_dilate: {
                const int side = mask_kernel_side(spec, w, h);
                if (side > 1) dyn.bits = morph(dyn.bits, w, h, side, spec.kind == PerturbKind::mask_dilate);
                break;
            }
            case PerturbKind::mask_fp_noise:
            case PerturbKind::mask_fn_noise: {
                Rng rng(combine_seed(spec.seed, i));
                const double p = spec.severity * spec.params.noise_density;
                const std::uint8_t from = spec.kind == PerturbKind::mask_fp_noise ? 0 : 1;
                for (auto& b : dyn.bits)
                    if (b == from && rng.bernoulli(p)) b = 1 - from;
                break;
            }
            default:
                throw Error(ErrorKind::invalid_argument, "corrupt_mask requires a mask_* perturbation kind", {}, "kind");
        }
        mask = mask_complement(dyn);
    }
    return out;
}

GeometryBundle apply_perturbation(const GeometryBundle& bundle, const PerturbSpec& spec) {
    switch (spec.kind) {
        case PerturbKind::warp: return apply_warp(bundle, spec);
        case PerturbKind::squeeze: return apply_squeeze(bundle, spec);
        case PerturbKind::depth_warp: return apply_depth_warp(bundle, spec);
        default: return corrupt_mask(bundle, spec);
    }
}

}  // namespace sgc
