#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace semaug {

/// 8-bit interleaved RGB raster. Every decoder path normalizes to this layout.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // size == width * height * 3, row-major RGB

    Image() = default;
    Image(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), pixels(static_cast<size_t>(w) * h * 3, fill) {}

    bool empty() const { return width == 0 || height == 0; }
    size_t pixel_count() const { return static_cast<size_t>(width) * height; }

    std::uint8_t& at(int x, int y, int c) {
        return pixels[(static_cast<size_t>(y) * width + x) * 3 + c];
    }
    std::uint8_t at(int x, int y, int c) const {
        return pixels[(static_cast<size_t>(y) * width + x) * 3 + c];
    }

    bool operator==(const Image& other) const = default;
};

/// Decode from encoded bytes (PNG/JPEG/BMP/...). Throws UnreadableImage.
Image decode_image(const std::vector<std::uint8_t>& bytes);

/// Load from disk. Throws UnreadableImage / IoError.
Image load_image(const std::filesystem::path& path);

/// PNG-encode with fixed settings; byte-stable for identical inputs.
std::vector<std::uint8_t> encode_png(const Image& image);

void save_png(const Image& image, const std::filesystem::path& path);

/// Mean |a - b| over all channels. Throws DimensionMismatch.
double mean_abs_diff(const Image& a, const Image& b);

/// Rec.601 integer-weight luma in [0, 255].
double luma(std::uint8_t r, std::uint8_t g, std::uint8_t b);

}  // namespace semaug
