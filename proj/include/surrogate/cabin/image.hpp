#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace surrogate::cabin {

/// 8-bit grayscale image, row-major.
struct Image8 {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    Image8() = default;
    Image8(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

    std::uint8_t& at(int row, int col) { return pixels[static_cast<std::size_t>(row) * width + col]; }
    std::uint8_t at(int row, int col) const { return pixels[static_cast<std::size_t>(row) * width + col]; }

    bool same_shape(const Image8& other) const { return width == other.width && height == other.height; }
    bool operator==(const Image8&) const = default;
};

/// Binary PGM (P5, maxval 255).
void write_pgm(const std::filesystem::path& path, const Image8& img);
Image8 read_pgm(const std::filesystem::path& path);

} // namespace surrogate::cabin
