#include "surrogate/metrics/ssim.hpp"
#include "surrogate/error.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace surrogate::metrics {

std::vector<double> gaussian_taps(int size, double sigma) {
    if (size < 1 || sigma <= 0) throw ConfigError("gaussian_taps: size must be >= 1 and sigma > 0");
    std::vector<double> taps(static_cast<std::size_t>(size));
    const double center = (size - 1) / 2.0;
    for (int i = 0; i < size; ++i) {
        const double d = i - center;
        taps[static_cast<std::size_t>(i)] = std::exp(-d * d / (2 * sigma * sigma));
    }
    const double total = std::accumulate(taps.begin(), taps.end(), 0.0);
    for (auto& t : taps) t /= total;
    return taps;
}

std::vector<double> gaussian_window(int size, double sigma) {
    const auto taps = gaussian_taps(size, sigma);
    std::vector<double> w;
    w.reserve(taps.size() * taps.size());
    for (double a : taps)
        for (double b : taps) w.push_back(a * b);
    return w;
}

Image8 crop(const Image8& img, const PixelBox& box) {
    if (box.row0 < 0 || box.col0 < 0 || box.row1 >= img.height || box.col1 >= img.width ||
        box.row0 > box.row1 || box.col0 > box.col1) {
        throw ShapeError("crop: box lies outside the image");
    }
    Image8 out(box.col1 - box.col0 + 1, box.row1 - box.row0 + 1);
    for (int r = 0; r < out.height; ++r)
        for (int c = 0; c < out.width; ++c) out.at(r, c) = img.at(box.row0 + r, box.col0 + c);
    return out;
}

namespace {

// Valid-mode separable filtering of a row-major plane.
std::vector<double> filter_valid(const std::vector<double>& plane, int width, int height,
                                 const std::vector<double>& taps) {
    const int n = static_cast<int>(taps.size());
    const int out_w = width - n + 1;
    const int out_h = height - n + 1;
    std::vector<double> horiz(static_cast<std::size_t>(height) * out_w);
    for (int r = 0; r < height; ++r) {
        const double* row = plane.data() + static_cast<std::size_t>(r) * width;
        for (int c = 0; c < out_w; ++c) {
            double s = 0;
            for (int k = 0; k < n; ++k) s += taps[static_cast<std::size_t>(k)] * row[c + k];
            horiz[static_cast<std::size_t>(r) * out_w + c] = s;
        }
    }
    std::vector<double> out(static_cast<std::size_t>(out_h) * out_w);
    for (int r = 0; r < out_h; ++r) {
        for (int c = 0; c < out_w; ++c) {
            double s = 0;
            for (int k = 0; k < n; ++k) s += taps[static_cast<std::size_t>(k)] * horiz[static_cast<std::size_t>(r + k) * out_w + c];
            out[static_cast<std::size_t>(r) * out_w + c] = s;
        }
    }
    return out;
}

} // namespace

double ssim(const Image8& a_in, const Image8& b_in, const SsimConfig& cfg) {
    if (!a_in.same_shape(b_in)) {
        throw ShapeError("ssim: images are " + std::to_string(a_in.width) + "x" + std::to_string(a_in.height) +
                         " and " + std::to_string(b_in.width) + "x" + std::to_string(b_in.height));
    }
    const Image8 a = cfg.region ? crop(a_in, *cfg.region) : a_in;
    const Image8 b = cfg.region ? crop(b_in, *cfg.region) : b_in;
    if (a.width < cfg.window || a.height < cfg.window) {
        throw ShapeError("ssim: image smaller than the " + std::to_string(cfg.window) + "x" +
                         std::to_string(cfg.window) + " window");
    }

    const std::size_t n = a.pixels.size();
    std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = a.pixels[i];
        y[i] = b.pixels[i];
        xx[i] = x[i] * x[i];
        yy[i] = y[i] * y[i];
        xy[i] = x[i] * y[i];
    }
    const auto taps = gaussian_taps(cfg.window, cfg.sigma);
    const auto mx = filter_valid(x, a.width, a.height, taps);
    const auto my = filter_valid(y, a.width, a.height, taps);
    const auto sxx = filter_valid(xx, a.width, a.height, taps);
    const auto syy = filter_valid(yy, a.width, a.height, taps);
    const auto sxy = filter_valid(xy, a.width, a.height, taps);

    const double c1 = cfg.c1();
    const double c2 = cfg.c2();
    double total = 0;
    for (std::size_t i = 0; i < mx.size(); ++i) {
        const double vx = sxx[i] - mx[i] * mx[i];
        const double vy = syy[i] - my[i] * my[i];
        const double cov = sxy[i] - mx[i] * my[i];
        total += ((2 * mx[i] * my[i] + c1) * (2 * cov + c2)) /
                 ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
    }
    return total / static_cast<double>(mx.size());
}

} // namespace surrogate::metrics
