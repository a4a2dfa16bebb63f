// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 starseg contributors

#pragma once

#include <png.h>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "starseg/error.hpp"

// Thin wrappers over the libpng simplified API. Only 8-bit grayscale and
// 8-bit RGB are supported; anything else is rejected rather than converted.

namespace starseg {

struct PngGray8 {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> samples;  // row-major, one byte per pixel
};

inline bool looks_like_png(std::span<const std::uint8_t> bytes) {
    static constexpr std::uint8_t sig[8] = {137, 80, 78, 71, 13, 10, 26, 10};
    if (bytes.size() < 8) return false;
    for (int i = 0; i < 8; ++i)
        if (bytes[static_cast<std::size_t>(i)] != sig[i]) return false;
    return true;
}

inline PngGray8 png_read_gray8(std::span<const std::uint8_t> bytes) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        const std::string msg = image.message;
        png_image_free(&image);
        throw MalformedHeaderError("PNG: " + msg);
    }
    if (image.format & PNG_FORMAT_FLAG_COLOR) {
        png_image_free(&image);
        throw UnsupportedFormatError("PNG: color images are not supported for grayscale reads");
    }
    if ((image.format & PNG_FORMAT_FLAG_LINEAR) || (image.format & PNG_FORMAT_FLAG_ALPHA)) {
        png_image_free(&image);
        throw UnsupportedFormatError("PNG: only plain 8-bit grayscale is supported");
    }
    image.format = PNG_FORMAT_GRAY;
    PngGray8 out;
    out.width = static_cast<int>(image.width);
    out.height = static_cast<int>(image.height);
    out.samples.resize(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, out.samples.data(), 0, nullptr)) {
        const std::string msg = image.message;
        png_image_free(&image);
        throw TruncatedPayloadError("PNG: " + msg);
    }
    return out;
}

namespace detail {

inline std::vector<std::uint8_t> png_encode(int width, int height, std::uint32_t format,
                                            const std::uint8_t* samples) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(width);
    image.height = static_cast<png_uint_32>(height);
    image.format = format;
    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, samples, 0, nullptr))
        throw Error(std::string("PNG encode failed: ") + image.message);
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&image, out.data(), &size, 0, samples, 0, nullptr))
        throw Error(std::string("PNG encode failed: ") + image.message);
    out.resize(size);
    return out;
}

}  // namespace detail

inline std::vector<std::uint8_t> png_write_gray8(int width, int height,
                                                 const std::uint8_t* samples) {
    return detail::png_encode(width, height, PNG_FORMAT_GRAY, samples);
}

/// samples: 3 bytes per pixel, row-major RGB.
inline std::vector<std::uint8_t> png_write_rgb8(int width, int height,
                                                const std::uint8_t* samples) {
    return detail::png_encode(width, height, PNG_FORMAT_RGB, samples);
}

}  // namespace starseg
