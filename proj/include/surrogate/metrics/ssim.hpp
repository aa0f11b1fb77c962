#pragma once

#include "surrogate/cabin/image.hpp"

#include <optional>
#include <vector>

namespace surrogate::metrics {

using cabin::Image8;

/// Inclusive pixel rectangle.
struct PixelBox {
    int row0 = 0;
    int col0 = 0;
    int row1 = 0;
    int col1 = 0;
};

/// Gaussian-windowed SSIM settings. Defaults are the canonical 11x11,
/// sigma 1.5, K1 = 0.01, K2 = 0.03, L = 255 configuration.
struct SsimConfig {
    int window = 11;
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double dynamic_range = 255.0;
    /// When set, both images are cropped to this box before scoring.
    std::optional<PixelBox> region;

    double c1() const { return (k1 * dynamic_range) * (k1 * dynamic_range); }
    double c2() const { return (k2 * dynamic_range) * (k2 * dynamic_range); }
};

/// 1-D normalized Gaussian taps; the 2-D window is their outer product.
std::vector<double> gaussian_taps(int size, double sigma);

/// Row-major size x size window weights.
std::vector<double> gaussian_window(int size, double sigma);

Image8 crop(const Image8& img, const PixelBox& box);

/// Mean SSIM over every window position fully inside the image (no padding).
double ssim(const Image8& a, const Image8& b, const SsimConfig& cfg = {});

} // namespace surrogate::metrics
