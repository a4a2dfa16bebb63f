// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 starseg contributors

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "starseg/grid.hpp"
#include "starseg/png_io.hpp"

// Byte-level image codecs. PNM (P2/P5 grayscale, P6 overlays) is the
// bit-exact interchange format; PNG is supported for interoperability.
// Grayscale loads divide by the file's declared maximum, so pixel values are
// always in [0,1]; 8-bit writes quantize as round(value * 255), rounding
// halves away from zero, clamped to [0,255]. File-system access stays in the
// CLI layer; everything here works on in-memory buffers.

namespace starseg {

enum class ImageFileFormat {
    pgm_ascii,   // P2
    pgm_binary,  // P5
    png_gray_8,
    ppm_binary,  // P6, overlays only
    png_rgb_8,   // overlays only
};

namespace detail {

inline bool pnm_is_space(std::uint8_t c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

/// Advances over whitespace and '#' comments (comment runs to end of line).
inline void pnm_skip_space(std::span<const std::uint8_t> bytes, std::size_t& pos) {
    while (pos < bytes.size()) {
        if (pnm_is_space(bytes[pos])) {
            ++pos;
        } else if (bytes[pos] == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else {
            return;
        }
    }
}

inline std::uint64_t pnm_read_uint(std::span<const std::uint8_t> bytes, std::size_t& pos,
                                   const char* what, bool header) {
    pnm_skip_space(bytes, pos);
    if (pos >= bytes.size()) {
        if (header) throw MalformedHeaderError(std::string("PNM: missing ") + what, pos);
        throw TruncatedPayloadError(std::string("PNM: input ends before ") + what, pos);
    }
    if (bytes[pos] < '0' || bytes[pos] > '9') {
        if (header)
            throw MalformedHeaderError(std::string("PNM: expected ") + what + ", found non-digit", pos);
        throw ParseError(std::string("PNM: invalid ") + what + " token", pos);
    }
    std::uint64_t value = 0;
    while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
        value = value * 10 + (bytes[pos] - '0');
        if (value > 10'000'000'000ull) {
            if (header) throw MalformedHeaderError(std::string("PNM: ") + what + " out of range", pos);
            throw ParseError(std::string("PNM: ") + what + " out of range", pos);
        }
        ++pos;
    }
    return value;
}

struct PnmHeader {
    char kind = 0;  // '2' or '5'
    int width = 0;
    int height = 0;
    int maxval = 0;
    std::size_t payload_pos = 0;  // first byte after the header
};

inline PnmHeader pnm_parse_gray_header(std::span<const std::uint8_t> bytes) {
    PnmHeader h;
    h.kind = static_cast<char>(bytes[1]);
    std::size_t pos = 2;
    const std::uint64_t width = pnm_read_uint(bytes, pos, "width", true);
    const std::uint64_t height = pnm_read_uint(bytes, pos, "height", true);
    if (width == 0 || height == 0)
        throw MalformedHeaderError("PNM: image dimensions must be positive", pos);
    if (width * height > (1ull << 30))
        throw MalformedHeaderError("PNM: image dimensions unreasonably large", pos);
    const std::uint64_t maxval = pnm_read_uint(bytes, pos, "maxval", true);
    if (maxval < 1 || maxval > 65535)
        throw MalformedHeaderError("PNM: maxval must be in [1, 65535], got " + std::to_string(maxval),
                                   pos);
    h.width = static_cast<int>(width);
    h.height = static_cast<int>(height);
    h.maxval = static_cast<int>(maxval);
    if (h.kind == '5') {
        // Exactly one whitespace byte separates the maxval from the samples.
        if (pos >= bytes.size() || !pnm_is_space(bytes[pos]))
            throw MalformedHeaderError("PNM: expected single whitespace before binary samples", pos);
        ++pos;
    }
    h.payload_pos = pos;
    return h;
}

inline Image pnm_read_gray(std::span<const std::uint8_t> bytes) {
    const PnmHeader h = pnm_parse_gray_header(bytes);
    Image img(h.width, h.height);
    const double inv_maxval = 1.0 / h.maxval;
    std::size_t pos = h.payload_pos;
    const std::size_t count = img.size();

    if (h.kind == '2') {
        for (std::size_t i = 0; i < count; ++i) {
            const std::uint64_t v = pnm_read_uint(bytes, pos, "sample", false);
            if (v > static_cast<std::uint64_t>(h.maxval))
                throw ParseError("PNM: sample value " + std::to_string(v) + " exceeds maxval", pos);
            img.data()[i] = static_cast<double>(v) * inv_maxval;
        }
        return img;
    }

    const std::size_t bytes_per_sample = h.maxval > 255 ? 2 : 1;
    const std::size_t needed = count * bytes_per_sample;
    if (bytes.size() - pos < needed)
        throw TruncatedPayloadError("PNM: payload holds " + std::to_string(bytes.size() - pos) +
                                        " byte(s), needs " + std::to_string(needed),
                                    bytes.size());
    for (std::size_t i = 0; i < count; ++i) {
        std::uint32_t v;
        if (bytes_per_sample == 1) {
            v = bytes[pos++];
        } else {
            v = static_cast<std::uint32_t>(bytes[pos]) << 8 | bytes[pos + 1];  // big-endian
            pos += 2;
        }
        if (v > static_cast<std::uint32_t>(h.maxval))
            throw ParseError("PNM: sample value " + std::to_string(v) + " exceeds maxval", pos);
        img.data()[i] = static_cast<double>(v) * inv_maxval;
    }
    return img;
}

inline void append_text(std::vector<std::uint8_t>& out, const std::string& s) {
    out.insert(out.end(), s.begin(), s.end());
}

inline std::string pnm_size_header(const char* magic, int width, int height) {
    return std::string(magic) + "\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
}

}  // namespace detail

/// round(value * 255) clamped to [0, 255], halves away from zero.
inline std::uint8_t quantize_8bit(double value) {
    const long q = std::lround(value * 255.0);
    return static_cast<std::uint8_t>(q < 0 ? 0 : (q > 255 ? 255 : q));
}

/// Decodes P2/P5 PNM (any maxval up to 65535) or 8-bit grayscale PNG into a
/// [0,1] image. Color and bitmap inputs are rejected.
inline Image read_image(std::span<const std::uint8_t> bytes) {
    if (looks_like_png(bytes)) {
        const PngGray8 png = png_read_gray8(bytes);
        Image img(png.width, png.height);
        for (std::size_t i = 0; i < img.size(); ++i)
            img.data()[i] = png.samples[i] / 255.0;
        return img;
    }
    if (bytes.size() < 2)
        throw TruncatedPayloadError("image input shorter than any known magic", 0);
    if (bytes[0] != 'P')
        throw UnsupportedFormatError("unrecognized image magic", 0);
    switch (bytes[1]) {
        case '2':
        case '5':
            return detail::pnm_read_gray(bytes);
        case '3':
        case '6':
            throw UnsupportedFormatError("PNM: color images are not supported for grayscale reads", 1);
        case '1':
        case '4':
            throw UnsupportedFormatError("PNM: bitmap (PBM) images are not supported", 1);
        default:
            throw UnsupportedFormatError("unrecognized image magic", 1);
    }
}

inline Image read_image(const std::vector<std::uint8_t>& bytes) {
    return read_image(std::span<const std::uint8_t>(bytes.data(), bytes.size()));
}

/// Reads a grayscale file as a mask: foreground where the normalized value
/// is at least 0.5. Masks written by write_mask round-trip exactly.
inline BinaryMask read_mask(std::span<const std::uint8_t> bytes) {
    const Image img = read_image(bytes);
    BinaryMask mask(img.width(), img.height(), 0);
    for (std::size_t i = 0; i < img.size(); ++i)
        mask.data()[i] = img.data()[i] >= 0.5 ? 1 : 0;
    return mask;
}

inline BinaryMask read_mask(const std::vector<std::uint8_t>& bytes) {
    return read_mask(std::span<const std::uint8_t>(bytes.data(), bytes.size()));
}

inline std::vector<std::uint8_t> write_image(const Image& img,
                                             ImageFileFormat format = ImageFileFormat::pgm_binary) {
    if (img.empty()) throw InvalidImageError("write_image: empty image");
    std::vector<std::uint8_t> samples(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) samples[i] = quantize_8bit(img.data()[i]);

    std::vector<std::uint8_t> out;
    switch (format) {
        case ImageFileFormat::pgm_binary:
            detail::append_text(out, detail::pnm_size_header("P5", img.width(), img.height()));
            out.insert(out.end(), samples.begin(), samples.end());
            return out;
        case ImageFileFormat::pgm_ascii: {
            detail::append_text(out, detail::pnm_size_header("P2", img.width(), img.height()));
            for (int y = 0; y < img.height(); ++y) {
                std::string line;
                for (int x = 0; x < img.width(); ++x) {
                    if (x) line += ' ';
                    line += std::to_string(samples[static_cast<std::size_t>(y) * img.width() + x]);
                }
                line += '\n';
                detail::append_text(out, line);
            }
            return out;
        }
        case ImageFileFormat::png_gray_8:
            return png_write_gray8(img.width(), img.height(), samples.data());
        case ImageFileFormat::ppm_binary:
        case ImageFileFormat::png_rgb_8:
            throw InvalidArgumentError("write_image: color formats cannot encode a grayscale image");
    }
    throw InvalidArgumentError("write_image: unknown format");
}

/// Masks encode as {0, 255}.
inline std::vector<std::uint8_t> write_mask(const BinaryMask& mask,
                                            ImageFileFormat format = ImageFileFormat::pgm_binary) {
    if (mask.empty()) throw InvalidImageError("write_mask: empty mask");
    std::vector<std::uint8_t> samples(mask.size());
    for (std::size_t i = 0; i < mask.size(); ++i) samples[i] = mask.data()[i] ? 255 : 0;

    std::vector<std::uint8_t> out;
    switch (format) {
        case ImageFileFormat::pgm_binary:
            detail::append_text(out, detail::pnm_size_header("P5", mask.width(), mask.height()));
            out.insert(out.end(), samples.begin(), samples.end());
            return out;
        case ImageFileFormat::pgm_ascii: {
            detail::append_text(out, detail::pnm_size_header("P2", mask.width(), mask.height()));
            for (int y = 0; y < mask.height(); ++y) {
                std::string line;
                for (int x = 0; x < mask.width(); ++x) {
                    if (x) line += ' ';
                    line += std::to_string(samples[static_cast<std::size_t>(y) * mask.width() + x]);
                }
                line += '\n';
                detail::append_text(out, line);
            }
            return out;
        }
        case ImageFileFormat::png_gray_8:
            return png_write_gray8(mask.width(), mask.height(), samples.data());
        case ImageFileFormat::ppm_binary:
        case ImageFileFormat::png_rgb_8:
            throw InvalidArgumentError("write_mask: color formats cannot encode a mask");
    }
    throw InvalidArgumentError("write_mask: unknown format");
}

/// Overlays encode as P6 or RGB PNG with the exact overlay colors.
inline std::vector<std::uint8_t> write_overlay(const OverlayImage& ov,
                                               ImageFileFormat format = ImageFileFormat::ppm_binary) {
    if (ov.empty()) throw InvalidImageError("write_overlay: empty overlay");
    std::vector<std::uint8_t> samples;
    samples.reserve(ov.size() * 3);
    for (std::size_t i = 0; i < ov.size(); ++i) {
        samples.push_back(ov.data()[i].r);
        samples.push_back(ov.data()[i].g);
        samples.push_back(ov.data()[i].b);
    }
    switch (format) {
        case ImageFileFormat::ppm_binary: {
            std::vector<std::uint8_t> out;
            detail::append_text(out, detail::pnm_size_header("P6", ov.width(), ov.height()));
            out.insert(out.end(), samples.begin(), samples.end());
            return out;
        }
        case ImageFileFormat::png_rgb_8:
            return png_write_rgb8(ov.width(), ov.height(), samples.data());
        default:
            throw InvalidArgumentError("write_overlay: overlays require a color format");
    }
}

}  // namespace starseg
