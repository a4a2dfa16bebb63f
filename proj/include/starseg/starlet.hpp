// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 starseg contributors

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "starseg/grid.hpp"
#include "starseg/kernel.hpp"

// Isotropic undecimated wavelet transform ("starlet"). Each analysis level
// smooths the previous plane with the B3-spline kernel dilated to that level
// and keeps the difference as a detail plane:
//
//   c_j = c_{j-1} * h_j          (mirror-padded convolution)
//   w_j = c_{j-1} - c_j
//
// The transform is redundant (every plane keeps full resolution) and inverts
// exactly by summation: c_0 = c_L + w_1 + ... + w_L.

namespace starseg {

/// Detail planes w_1..w_L plus the smooth residual c_L.
struct Decomposition {
    std::vector<Image> details;
    Image residual;

    int levels() const { return static_cast<int>(details.size()); }
};

/// Pads by whole-sample symmetric reflection: the edge pixel is not
/// duplicated, so value(-1) == value(1) and value(w) == value(w-2).
/// The margin may not exceed min(width, height) - 1; the reflection must not
/// run off the far edge.
inline Image mirror_pad(const Image& img, int margin) {
    if (img.empty()) throw InvalidArgumentError("mirror_pad: empty image");
    if (margin < 0) throw InvalidArgumentError("mirror_pad: negative margin");
    if (margin > img.width() - 1 || margin > img.height() - 1)
        throw PadExceedsImageError("mirror_pad: margin " + std::to_string(margin) +
                                   " exceeds reflectable extent of a " + std::to_string(img.width()) +
                                   "x" + std::to_string(img.height()) + " image");
    if (margin == 0) return img;

    const int w = img.width();
    const int h = img.height();
    auto reflect = [](int i, int n) {
        if (i < 0) return -i;
        if (i >= n) return 2 * (n - 1) - i;
        return i;
    };
    Image out(w + 2 * margin, h + 2 * margin);
    for (int y = 0; y < out.height(); ++y) {
        const int sy = reflect(y - margin, h);
        for (int x = 0; x < out.width(); ++x)
            out.at(x, y) = img.at(reflect(x - margin, w), sy);
    }
    return out;
}

/// One smoothing step: c_j = c_{j-1} * h_j with mirror padding of margin
/// 2 * 2^(j-1), cropped back to the input size. Runs as two 1D passes over
/// the five nonzero taps; the result equals dense 2D convolution of the
/// padded image to within rounding. The kernel is a convex combination, so
/// outputs stay inside [min(img), max(img)].
inline Image smooth(const Image& img, int level) {
    if (img.width() < 2 || img.height() < 2)
        throw InvalidArgumentError("smooth: image dimensions must be at least 2x2");
    const int step = dilation_step(level);
    const int margin = kernel_margin(level);
    const Image padded = mirror_pad(img, margin);  // throws PadExceedsImageError if too small

    const Kernel1D k = b3_kernel_1d();
    const int w = img.width();
    const int h = img.height();

    // Horizontal pass over every padded row, original columns only.
    Grid<double> rows(w, padded.height());
    for (int y = 0; y < padded.height(); ++y) {
        for (int x = 0; x < w; ++x) {
            const int px = x + margin;
            double acc = 0.0;
            for (int t = 0; t < 5; ++t)
                acc += k.taps[t] * padded.at(px + (t - 2) * step, y);
            rows.at(x, y) = acc;
        }
    }
    // Vertical pass, original rows only.
    Image out(w, h);
    for (int y = 0; y < h; ++y) {
        const int py = y + margin;
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int t = 0; t < 5; ++t)
                acc += k.taps[t] * rows.at(x, py + (t - 2) * step);
            out.at(x, y) = acc;
        }
    }
    return out;
}

/// Largest L for which the level-L padding margin 2 * 2^(L-1) still fits a
/// width x height image; 0 when not even one level fits.
inline int max_decomposition_levels(int width, int height) {
    const int extent = (width < height ? width : height) - 1;
    int levels = 0;
    while (levels < 30 && kernel_margin(levels + 1) <= extent) ++levels;
    return levels;
}

/// Full L-level analysis. Throws InvalidLevelError when L < 1 or the level-L
/// margin does not fit the image, so batch callers can cap L via
/// max_decomposition_levels() instead of failing.
inline Decomposition starlet_decompose(const Image& img, int levels) {
    if (levels < 1)
        throw InvalidLevelError("starlet_decompose: levels must be >= 1, got " + std::to_string(levels));
    const int max_levels = max_decomposition_levels(img.width(), img.height());
    if (levels > max_levels)
        throw InvalidLevelError("starlet_decompose: level " + std::to_string(levels) +
                                " needs margin " + std::to_string(kernel_margin(levels)) +
                                "; a " + std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                                " image supports at most " + std::to_string(max_levels) + " level(s)");

    Decomposition d;
    d.details.reserve(static_cast<std::size_t>(levels));
    Image current = img;
    for (int j = 1; j <= levels; ++j) {
        Image next = smooth(current, j);
        Image detail(img.width(), img.height());
        for (std::size_t i = 0; i < detail.size(); ++i)
            detail.data()[i] = current.data()[i] - next.data()[i];
        d.details.push_back(std::move(detail));
        current = std::move(next);
    }
    d.residual = std::move(current);
    return d;
}

/// Inverse transform: c_L + sum of all detail planes.
inline Image reconstruct(const Decomposition& d) {
    if (d.details.empty() || d.residual.empty())
        throw InconsistentDecompositionError("reconstruct: decomposition has no planes");
    for (const Image& w : d.details)
        if (!w.same_shape(d.residual))
            throw InconsistentDecompositionError("reconstruct: plane dimensions disagree");

    Image out = d.residual;
    for (const Image& w : d.details)
        for (std::size_t i = 0; i < out.size(); ++i)
            out.data()[i] += w.data()[i];
    return out;
}

}  // namespace starseg
