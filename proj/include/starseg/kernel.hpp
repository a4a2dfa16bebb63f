// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 starseg contributors

#pragma once

#include <vector>

#include "starseg/error.hpp"

namespace starseg {

/// Centered odd-length 1D filter.
struct Kernel1D {
    std::vector<double> taps;

    int radius() const { return (static_cast<int>(taps.size()) - 1) / 2; }
};

/// Square 2D filter at a given dilation level.
struct Kernel2D {
    int side = 0;    // odd; 4 * 2^(level-1) + 1
    int level = 0;   // dilation level j >= 1
    std::vector<double> weights;  // row-major, side x side

    double at(int row, int col) const {
        return weights[static_cast<std::size_t>(row) * side + col];
    }
};

/// The sampled cubic B-spline smoothing filter, [1 4 6 4 1] / 16.
/// All taps are dyadic rationals, so they sum to exactly 1.0.
inline Kernel1D b3_kernel_1d() {
    return Kernel1D{{1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16}};
}

/// Tap spacing at a dilation level: 1, 2, 4, ... for j = 1, 2, 3, ...
inline int dilation_step(int level) {
    if (level < 1)
        throw InvalidLevelError("dilation level must be >= 1, got " + std::to_string(level));
    if (level > 30)
        throw InvalidLevelError("dilation level " + std::to_string(level) + " is out of range");
    return 1 << (level - 1);
}

/// Half-width of the level-j dilated kernel support, 2 * 2^(j-1). This is
/// also the mirror padding margin a level-j smoothing needs.
inline int kernel_margin(int level) { return 2 * dilation_step(level); }

/// Base taps spread with 2^(j-1) - 1 zeros between adjacent entries
/// (contiguous for j = 1). Length 4 * 2^(j-1) + 1.
inline Kernel1D dilated_kernel_1d(int level) {
    const int step = dilation_step(level);
    const Kernel1D base = b3_kernel_1d();
    std::vector<double> taps(static_cast<std::size_t>(4) * step + 1, 0.0);
    for (std::size_t i = 0; i < base.taps.size(); ++i)
        taps[i * step] = base.taps[i];
    return Kernel1D{std::move(taps)};
}

/// Level-j 2D smoothing kernel: the dilated 1D taps outer-multiplied with
/// themselves, then divided by the total weight. The division is a
/// mathematical no-op (the taps sum to 1 exactly) kept to pin the weights
/// against drift at high levels.
inline Kernel2D dilated_kernel_2d(int level) {
    const Kernel1D taps = dilated_kernel_1d(level);
    const int side = static_cast<int>(taps.taps.size());
    Kernel2D k;
    k.side = side;
    k.level = level;
    k.weights.resize(static_cast<std::size_t>(side) * side);
    for (int r = 0; r < side; ++r)
        for (int c = 0; c < side; ++c)
            k.weights[static_cast<std::size_t>(r) * side + c] = taps.taps[r] * taps.taps[c];
    double total = 0.0;
    for (double w : k.weights) total += w;
    for (double& w : k.weights) w /= total;
    return k;
}

}  // namespace starseg
