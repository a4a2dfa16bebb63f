// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 starseg contributors

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "starseg/evaluation.hpp"
#include "starseg/grid.hpp"
#include "starseg/starlet.hpp"

// Particle scoring and binarization. The score map combines the detail
// planes from level j_min upward and subtracts the input image:
//
//   S = w_{j_min} + ... + w_L - c_0
//
// with j_min defaulting to 3 because the two finest levels are dominated by
// noise. Bright isotropic objects come out as the minority mode of S, offset
// by the (image-dependent) background; the otsu policy below is therefore
// defined to be invariant to offset, positive scale, and sign of the map.

namespace starseg {

/// How a score map is turned into a mask.
struct ThresholdPolicy {
    enum class Kind { otsu, positive, fixed };

    Kind kind = Kind::otsu;
    double threshold = 0.0;  // used by Kind::fixed only

    static ThresholdPolicy otsu() { return {Kind::otsu, 0.0}; }
    static ThresholdPolicy positive() { return {Kind::positive, 0.0}; }
    static ThresholdPolicy fixed(double t) { return {Kind::fixed, t}; }
};

/// S = sum of detail planes j_min..L minus the source image, in double
/// precision. By the telescoping sum this equals (c_{j_min-1} - c_L) - c_0.
inline ScoreMap detail_sum_map(const Decomposition& d, const Image& img, int j_min = 3) {
    if (j_min < 1) throw InvalidArgumentError("detail_sum_map: j_min must be >= 1");
    if (d.levels() < j_min)
        throw InsufficientLevelsError("detail_sum_map: decomposition has " + std::to_string(d.levels()) +
                                      " level(s), needs at least j_min = " + std::to_string(j_min));
    if (d.details.empty() || !d.details.front().same_shape(img) || !d.residual.same_shape(img))
        throw InconsistentInputError("detail_sum_map: image and decomposition dimensions disagree");

    ScoreMap s(img.width(), img.height(), 0.0);
    for (int j = j_min; j <= d.levels(); ++j) {
        const Image& w = d.details[static_cast<std::size_t>(j - 1)];
        for (std::size_t i = 0; i < s.size(); ++i)
            s.data()[i] += w.data()[i];
    }
    for (std::size_t i = 0; i < s.size(); ++i)
        s.data()[i] -= img.data()[i];
    return s;
}

namespace detail {

/// Otsu's split of the 256-bin histogram restricted to bins [lo, hi]:
/// the threshold t in [lo, hi) maximizing between-class variance, lowest t
/// on ties, with bin indices standing in for sample values. Returns -1 when
/// no split leaves both classes nonempty.
inline int otsu_split(const std::array<std::uint64_t, 256>& hist, int lo, int hi) {
    std::uint64_t total = 0;
    double weighted_total = 0.0;
    for (int b = lo; b <= hi; ++b) {
        total += hist[static_cast<std::size_t>(b)];
        weighted_total += static_cast<double>(b) * static_cast<double>(hist[static_cast<std::size_t>(b)]);
    }
    int best_bin = -1;
    double best_variance = -1.0;
    std::uint64_t count_low = 0;
    double weighted_low = 0.0;
    for (int t = lo; t < hi; ++t) {
        count_low += hist[static_cast<std::size_t>(t)];
        weighted_low += static_cast<double>(t) * static_cast<double>(hist[static_cast<std::size_t>(t)]);
        const std::uint64_t count_high = total - count_low;
        if (count_low == 0 || count_high == 0) continue;
        const double mean_low = weighted_low / static_cast<double>(count_low);
        const double mean_high = (weighted_total - weighted_low) / static_cast<double>(count_high);
        const double diff = mean_low - mean_high;
        const double variance =
            static_cast<double>(count_low) * static_cast<double>(count_high) * diff * diff;
        if (variance > best_variance) {
            best_variance = variance;
            best_bin = t;
        }
    }
    return best_bin;
}

}  // namespace detail

/// Thresholds a score map.
///
/// otsu: min-max normalize to [0,1] (a constant map yields an all-background
/// mask) and histogram into 256 bins. Split at the bin maximizing between-
/// class variance (ties toward the lowest threshold) and take the smaller
/// class as foreground; objects of interest are assumed sparse, and picking
/// the minority side makes the result invariant to offset, to positive
/// rescaling, and to an overall sign flip of the scores. While the
/// foreground side still holds more than a fifth of all pixels the split is
/// treated as noise-internal and Otsu is reapplied within that side, moving
/// away from the background mode; a single global Otsu pass otherwise buries
/// a sparse tail inside the background's own variance and lands near the
/// background median.
///
/// positive: foreground iff score > 0.
/// fixed(t): foreground iff score > t.
inline BinaryMask binarize(const ScoreMap& scores, const ThresholdPolicy& policy) {
    if (scores.empty()) throw InvalidArgumentError("binarize: empty score map");
    BinaryMask mask(scores.width(), scores.height(), 0);

    switch (policy.kind) {
        case ThresholdPolicy::Kind::positive:
        case ThresholdPolicy::Kind::fixed: {
            const double t = policy.kind == ThresholdPolicy::Kind::positive ? 0.0 : policy.threshold;
            for (std::size_t i = 0; i < scores.size(); ++i)
                mask.data()[i] = scores.data()[i] > t ? 1 : 0;
            return mask;
        }
        case ThresholdPolicy::Kind::otsu:
            break;
    }

    const double lo = min_value(scores);
    const double hi = max_value(scores);
    if (!(hi > lo)) return mask;  // constant map: nothing to separate

    const double scale = 256.0 / (hi - lo);
    auto bin_of = [&](double v) {
        int b = static_cast<int>((v - lo) * scale);
        return b > 255 ? 255 : b;
    };
    std::array<std::uint64_t, 256> hist{};
    for (std::size_t i = 0; i < scores.size(); ++i)
        ++hist[static_cast<std::size_t>(bin_of(scores.data()[i]))];
    auto count_range = [&hist](int a, int b) {
        std::uint64_t n = 0;
        for (int i = a; i <= b; ++i) n += hist[static_cast<std::size_t>(i)];
        return n;
    };

    const int t0 = detail::otsu_split(hist, 0, 255);
    if (t0 < 0) return mask;
    const std::uint64_t below = count_range(0, t0);
    const bool foreground_high = (scores.size() - below) <= below;

    // Foreground bin range; refined while it stays implausibly large.
    int fg_lo = foreground_high ? t0 + 1 : 0;
    int fg_hi = foreground_high ? 255 : t0;
    const std::uint64_t sparse_cap = scores.size() / 5;
    for (int pass = 0; pass < 16 && count_range(fg_lo, fg_hi) > sparse_cap; ++pass) {
        const int t = detail::otsu_split(hist, fg_lo, fg_hi);
        if (t < 0) break;
        if (foreground_high)
            fg_lo = t + 1;  // background mode sits below; keep the far side
        else
            fg_hi = t;
    }

    for (std::size_t i = 0; i < scores.size(); ++i) {
        const int b = bin_of(scores.data()[i]);
        mask.data()[i] = (b >= fg_lo && b <= fg_hi) ? 1 : 0;
    }
    return mask;
}

/// End-to-end determination of bright objects in an image: decompose to L
/// levels, build the level-(j_min..L) score map, binarize.
inline BinaryMask segment(const Image& img, int levels, const ThresholdPolicy& policy = ThresholdPolicy::otsu(),
                          int j_min = 3) {
    if (levels < j_min)
        throw InsufficientLevelsError("segment: levels = " + std::to_string(levels) +
                                      " is below j_min = " + std::to_string(j_min));
    const Decomposition d = starlet_decompose(img, levels);
    return binarize(detail_sum_map(d, img, j_min), policy);
}

/// One row of a level sweep.
struct SweepEntry {
    int level = 0;
    ConfusionCounts counts;
    Metrics metrics;
};

/// Segments at every level in [level_lo .. level_hi] and scores each mask
/// against ground truth. The high end is capped at the largest level the
/// image size supports (compare the last entry's level against the request
/// to detect the cap). Entries are ordered by ascending level.
inline std::vector<SweepEntry> sweep_levels(const Image& img, const BinaryMask& gt, int level_lo = 3,
                                            int level_hi = 10,
                                            const ThresholdPolicy& policy = ThresholdPolicy::otsu(),
                                            int j_min = 3) {
    if (level_lo < 1 || level_lo > level_hi)
        throw InvalidArgumentError("sweep_levels: bad level range " + std::to_string(level_lo) + ".." +
                                   std::to_string(level_hi));
    if (!gt.same_shape(img))
        throw InconsistentInputError("sweep_levels: ground truth dimensions disagree with image");

    const int effective_hi = std::min(level_hi, max_decomposition_levels(img.width(), img.height()));
    std::vector<SweepEntry> entries;
    for (int level = level_lo; level <= effective_hi; ++level) {
        SweepEntry e;
        e.level = level;
        e.counts = confusion(segment(img, level, policy, j_min), gt);
        e.metrics = metrics(e.counts);
        entries.push_back(e);
    }
    return entries;
}

/// The swept level with the highest F1; ties break toward the smaller level,
/// so the result does not depend on entry order.
inline int select_optimal_level(const std::vector<SweepEntry>& sweep) {
    if (sweep.empty()) throw EmptyInputError("select_optimal_level: empty sweep");
    const SweepEntry* best = &sweep.front();
    for (const SweepEntry& e : sweep) {
        if (e.metrics.f1 > best->metrics.f1 ||
            (e.metrics.f1 == best->metrics.f1 && e.level < best->level))
            best = &e;
    }
    return best->level;
}

}  // namespace starseg
