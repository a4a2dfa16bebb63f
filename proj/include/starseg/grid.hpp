// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 starseg contributors

#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <vector>

#include "starseg/error.hpp"

namespace starseg {

/// Dense row-major 2D grid. The single storage type behind images, score
/// maps, masks and overlays.
template <typename T>
class Grid {
public:
    Grid() = default;  // empty 0x0 grid

    Grid(int width, int height, T fill = T{}) : width_(width), height_(height) {
        if (width < 1 || height < 1)
            throw InvalidArgumentError("grid dimensions must be positive");
        cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return cells_.empty(); }
    std::size_t size() const { return cells_.size(); }

    T& at(int x, int y) {
        assert(x >= 0 && x < width_ && y >= 0 && y < height_);
        return cells_[static_cast<std::size_t>(y) * width_ + x];
    }
    const T& at(int x, int y) const {
        assert(x >= 0 && x < width_ && y >= 0 && y < height_);
        return cells_[static_cast<std::size_t>(y) * width_ + x];
    }

    T* data() { return cells_.data(); }
    const T* data() const { return cells_.data(); }
    std::vector<T>& cells() { return cells_; }
    const std::vector<T>& cells() const { return cells_; }

    template <typename U>
    bool same_shape(const Grid<U>& other) const {
        return width_ == other.width() && height_ == other.height();
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> cells_;
};

/// Grayscale image; nominal range [0,1], detail planes may go negative.
using Image = Grid<double>;

/// Signed per-pixel scores produced by the segmentation stage.
using ScoreMap = Grid<double>;

/// Binary mask; nonzero = foreground.
using BinaryMask = Grid<std::uint8_t>;

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// 8-bit color rendering of a mask comparison.
using OverlayImage = Grid<Rgb>;

inline double min_value(const Image& img) {
    return *std::min_element(img.cells().begin(), img.cells().end());
}

inline double max_value(const Image& img) {
    return *std::max_element(img.cells().begin(), img.cells().end());
}

}  // namespace starseg
