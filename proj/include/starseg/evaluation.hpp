// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 starseg contributors

#pragma once

#include <cstdint>

#include "starseg/grid.hpp"

namespace starseg {

/// Pixel tallies from comparing a predicted mask against ground truth.
struct ConfusionCounts {
    std::uint64_t tp = 0;  // foreground in both
    std::uint64_t fp = 0;  // foreground predicted, background in truth
    std::uint64_t fn = 0;  // background predicted, foreground in truth
    std::uint64_t tn = 0;  // background in both

    std::uint64_t total() const { return tp + fp + fn + tn; }
};

struct Metrics {
    double precision = 0.0;
    double recall = 0.0;
    double accuracy = 0.0;
    double f1 = 0.0;
};

/// Harmonic mean of precision and recall; 0 when both are 0.
inline double f1_score(double precision, double recall) {
    const double denom = precision + recall;
    if (denom <= 0.0) return 0.0;
    return 2.0 * precision * recall / denom;
}

inline ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt) {
    if (!pred.same_shape(gt))
        throw InconsistentInputError("confusion: mask dimensions disagree");
    ConfusionCounts c;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const bool p = pred.data()[i] != 0;
        const bool g = gt.data()[i] != 0;
        if (p && g) ++c.tp;
        else if (p && !g) ++c.fp;
        else if (!p && g) ++c.fn;
        else ++c.tn;
    }
    return c;
}

/// Precision and recall fall back to 0 when their denominator is 0 (empty
/// prediction or empty truth); the inputs here never divide by zero
/// otherwise. All-zero counts are rejected.
inline Metrics metrics(const ConfusionCounts& c) {
    if (c.total() == 0) throw EmptyInputError("metrics: all-zero confusion counts");
    Metrics m;
    m.precision = (c.tp + c.fp) > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
    m.recall = (c.tp + c.fn) > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
    m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
    m.f1 = f1_score(m.precision, m.recall);
    return m;
}

// Overlay color convention: hits green, misses blue, false alarms red,
// everything else black.
inline constexpr Rgb kOverlayTruePositive{0, 255, 0};
inline constexpr Rgb kOverlayFalseNegative{0, 0, 255};
inline constexpr Rgb kOverlayFalsePositive{255, 0, 0};
inline constexpr Rgb kOverlayTrueNegative{0, 0, 0};

inline OverlayImage overlay(const BinaryMask& pred, const BinaryMask& gt) {
    if (!pred.same_shape(gt))
        throw InconsistentInputError("overlay: mask dimensions disagree");
    OverlayImage out(pred.width(), pred.height());
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const bool p = pred.data()[i] != 0;
        const bool g = gt.data()[i] != 0;
        out.data()[i] = p ? (g ? kOverlayTruePositive : kOverlayFalsePositive)
                          : (g ? kOverlayFalseNegative : kOverlayTrueNegative);
    }
    return out;
}

}  // namespace starseg
