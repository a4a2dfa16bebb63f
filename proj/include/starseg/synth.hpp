// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 starseg contributors

#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "starseg/grid.hpp"

// Deterministic generator for microscopy-like test images: bright isotropic
// blobs over a rough, noisy background, with exact ground truth.
//
// PRNG contract (fixed so golden outputs are reproducible):
//   - generator: SplitMix64 seeded directly with SynthParams::seed;
//   - uniform [0,1) doubles take the top 53 bits of the next output;
//   - integers in [lo,hi] come from next() % (hi-lo+1);
//   - normals use the basic Box-Muller form sqrt(-2 ln u1) * cos(2 pi u2),
//     two uniforms per normal, the sine partner discarded.
//
// Draw order: per blob, one radius then (x, y) center pairs until placement
// succeeds (at most 1000 attempts); then 8 roughness waves, three uniforms
// each (direction, wavelength, phase), drawn even when the amplitude is 0;
// then, only when noise_sigma > 0, one normal per pixel in row-major order.
// Ground truth depends only on the blob geometry, so it is invariant to
// noise_sigma and roughness_amplitude.

namespace starseg {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    double normal() {
        const double u1 = 1.0 - uniform01();  // (0, 1], keeps the log finite
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    std::uint64_t state_;
};

struct SynthParams {
    int width = 256;
    int height = 256;
    int blob_count = 10;
    double radius_min = 3.0;
    double radius_max = 8.0;
    double blob_peak = 0.7;          // added intensity at a blob center
    double background_level = 0.15;  // flat base level
    double roughness_amplitude = 0.0;  // low-frequency background modulation
    double noise_sigma = 0.0;        // Gaussian white noise
    bool allow_overlap = true;
    std::uint64_t seed = 0;
};

struct LabeledSample {
    Image image;
    BinaryMask truth;
};

namespace detail {

inline void validate(const SynthParams& p) {
    if (p.width < 1 || p.height < 1)
        throw InvalidArgumentError("generate: image dimensions must be positive");
    if (p.blob_count < 0) throw InvalidArgumentError("generate: blob_count must be >= 0");
    if (p.radius_min < 0.0 || p.radius_min > p.radius_max)
        throw InvalidArgumentError("generate: need 0 <= radius_min <= radius_max");
    if (p.blob_count > 0) {
        const int min_dim = p.width < p.height ? p.width : p.height;
        if (!(p.radius_max < min_dim / 2.0))
            throw InvalidArgumentError("generate: radius_max must be below min(width, height) / 2");
        if (p.blob_peak <= 0.0 || p.blob_peak > 1.0)
            throw InvalidArgumentError("generate: blob_peak must be in (0, 1]");
    }
    if (p.background_level < 0.0 || p.background_level >= 1.0)
        throw InvalidArgumentError("generate: background_level must be in [0, 1)");
    if (p.background_level + p.blob_peak > 1.0 && p.blob_count > 0)
        throw InvalidArgumentError("generate: background_level + blob_peak must not exceed 1");
    if (p.roughness_amplitude < 0.0 || p.noise_sigma < 0.0)
        throw InvalidArgumentError("generate: amplitudes must be >= 0");
}

struct Blob {
    int cx = 0, cy = 0;
    double radius = 0.0;
};

}  // namespace detail

/// Generates one labeled sample. The image is
///   clamp01(background + roughness + blob Gaussians + noise)
/// where each blob is peak * exp(-d^2 / (2 sigma^2)) with sigma = radius/2,
/// and the roughness field is the mean of 8 random cosine plane waves of
/// wavelength in [width/4, width], scaled to roughness_amplitude. Truth
/// marks pixels within Euclidean distance radius of a blob center. Centers
/// land on the integer grid, confined so every disk lies fully inside the
/// image; with allow_overlap = false a candidate center is rejected while
/// its disk intersects an already placed one.
inline LabeledSample generate(const SynthParams& p) {
    detail::validate(p);
    SplitMix64 rng(p.seed);

    // Blob geometry first: ground truth must not depend on later draws.
    std::vector<detail::Blob> blobs;
    blobs.reserve(static_cast<std::size_t>(p.blob_count));
    for (int b = 0; b < p.blob_count; ++b) {
        detail::Blob blob;
        blob.radius = rng.uniform(p.radius_min, p.radius_max);
        const int reach = static_cast<int>(std::ceil(blob.radius));
        const int lo_x = reach, hi_x = p.width - 1 - reach;
        const int lo_y = reach, hi_y = p.height - 1 - reach;
        if (lo_x > hi_x || lo_y > hi_y)
            throw PlacementFailedError("generate: blob radius " + std::to_string(blob.radius) +
                                       " cannot fit inside the image");
        bool placed = false;
        for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
            blob.cx = rng.uniform_int(lo_x, hi_x);
            blob.cy = rng.uniform_int(lo_y, hi_y);
            placed = true;
            if (!p.allow_overlap) {
                for (const detail::Blob& other : blobs) {
                    const double dx = blob.cx - other.cx;
                    const double dy = blob.cy - other.cy;
                    const double min_dist = blob.radius + other.radius;
                    if (dx * dx + dy * dy <= min_dist * min_dist) {
                        placed = false;
                        break;
                    }
                }
            }
        }
        if (!placed)
            throw PlacementFailedError("generate: no non-overlapping position found for blob " +
                                       std::to_string(b) + " after 1000 attempts");
        blobs.push_back(blob);
    }

    // Roughness wave parameters are always drawn so that changing only the
    // amplitude does not shift the stream.
    struct Wave {
        double kx, ky, phase;
    };
    Wave waves[8];
    for (Wave& w : waves) {
        const double angle = rng.uniform(0.0, 6.283185307179586476925286766559);
        const double wavelength = rng.uniform(p.width / 4.0, static_cast<double>(p.width));
        const double k = 6.283185307179586476925286766559 / wavelength;
        w.kx = k * std::cos(angle);
        w.ky = k * std::sin(angle);
        w.phase = rng.uniform(0.0, 6.283185307179586476925286766559);
    }

    Image img(p.width, p.height, p.background_level);
    if (p.roughness_amplitude > 0.0) {
        const double amp = p.roughness_amplitude / 8.0;
        for (int y = 0; y < p.height; ++y)
            for (int x = 0; x < p.width; ++x) {
                double field = 0.0;
                for (const Wave& w : waves) field += std::cos(w.kx * x + w.ky * y + w.phase);
                img.at(x, y) += amp * field;
            }
    }
    for (const detail::Blob& blob : blobs) {
        const double sigma = blob.radius / 2.0;
        const double inv_two_sigma_sq = 1.0 / (2.0 * sigma * sigma);
        for (int y = 0; y < p.height; ++y)
            for (int x = 0; x < p.width; ++x) {
                const double dx = x - blob.cx;
                const double dy = y - blob.cy;
                img.at(x, y) += p.blob_peak * std::exp(-(dx * dx + dy * dy) * inv_two_sigma_sq);
            }
    }
    if (p.noise_sigma > 0.0) {
        for (std::size_t i = 0; i < img.size(); ++i)
            img.data()[i] += p.noise_sigma * rng.normal();
    }
    for (std::size_t i = 0; i < img.size(); ++i) {
        double v = img.data()[i];
        img.data()[i] = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    }

    BinaryMask truth(p.width, p.height, 0);
    for (const detail::Blob& blob : blobs) {
        const int reach = static_cast<int>(std::ceil(blob.radius));
        const double r_sq = blob.radius * blob.radius;
        for (int y = blob.cy - reach; y <= blob.cy + reach; ++y)
            for (int x = blob.cx - reach; x <= blob.cx + reach; ++x) {
                const double dx = x - blob.cx;
                const double dy = y - blob.cy;
                if (dx * dx + dy * dy <= r_sq) truth.at(x, y) = 1;
            }
    }
    return LabeledSample{std::move(img), std::move(truth)};
}

}  // namespace starseg
