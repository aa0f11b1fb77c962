#pragma once

#include "surrogate/cabin/image.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace surrogate::data {

using cabin::Image8;

struct PixelCoord {
    int row = 0;
    int col = 0;
    bool operator==(const PixelCoord&) const = default;
};

/// Pixels that vary across an image stack, in row-major scan order, plus the
/// template holding every constant pixel.
struct TargetPixelMap {
    std::vector<PixelCoord> coords;
    Image8 background;
    std::uint64_t source_hash = 0;

    int width() const { return background.width; }
    int height() const { return background.height; }
    std::size_t size() const { return coords.size(); }
};

/// FNV-1a over the dimensions and bytes of every image, in order.
std::uint64_t hash_image_stack(std::span<const Image8> stack);

/// A pixel is a target iff its 8-bit value is not the same in every image.
TargetPixelMap extract_target_pixels(std::span<const Image8> stack);

/// Target pixel values scaled to [0, 1].
std::vector<double> targets_from_image(const Image8& img, const TargetPixelMap& map);

/// Background with each mapped pixel set to round(clamp(v, 0, 1) * 255).
Image8 restore(std::span<const double> values, const TargetPixelMap& map);

/// Writes map.txt (dims, count, hash), coords.csv and background.pgm into dir.
void save_target_map(const std::filesystem::path& dir, const TargetPixelMap& map);
TargetPixelMap load_target_map(const std::filesystem::path& dir);

} // namespace surrogate::data
