#include "doctest.h"

#include "surrogate/data/dataset.hpp"
#include "surrogate/error.hpp"
#include "surrogate/metrics/report.hpp"
#include "surrogate/metrics/ssim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace surrogate;
using namespace surrogate::metrics;

namespace {

Image8 random_image(int w, int h, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> dist(0, 255);
    Image8 img(w, h);
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(dist(rng));
    return img;
}

// Direct 2-D evaluation of the windowed statistics at every valid position.
double brute_ssim(const Image8& a, const Image8& b) {
    const int n = 11;
    const double sigma = 1.5;
    std::vector<double> w(n * n);
    double total = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double di = i - 5, dj = j - 5;
            w[i * n + j] = std::exp(-(di * di + dj * dj) / (2 * sigma * sigma));
            total += w[i * n + j];
        }
    for (auto& v : w) v /= total;
    const double c1 = std::pow(0.01 * 255, 2), c2 = std::pow(0.03 * 255, 2);
    double sum = 0;
    int count = 0;
    for (int r = 0; r + n <= a.height; ++r)
        for (int c = 0; c + n <= a.width; ++c) {
            double mx = 0, my = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    mx += w[i * n + j] * a.at(r + i, c + j);
                    my += w[i * n + j] * b.at(r + i, c + j);
                }
            double vx = 0, vy = 0, cxy = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const double dx = a.at(r + i, c + j) - mx, dy = b.at(r + i, c + j) - my;
                    vx += w[i * n + j] * dx * dx;
                    vy += w[i * n + j] * dy * dy;
                    cxy += w[i * n + j] * dx * dy;
                }
            sum += ((2 * mx * my + c1) * (2 * cxy + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
            ++count;
        }
    return sum / count;
}

} // namespace

TEST_CASE("gaussian window is normalized and symmetric") {
    const auto w = gaussian_window(11, 1.5);
    REQUIRE(w.size() == 121);
    CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    for (int i = 0; i < 11; ++i)
        for (int j = 0; j < 11; ++j) {
            CHECK(w[i * 11 + j] == doctest::Approx(w[j * 11 + i]).epsilon(1e-15));
            CHECK(w[i * 11 + j] == doctest::Approx(w[(10 - i) * 11 + (10 - j)]).epsilon(1e-15));
        }
    const auto taps = gaussian_taps(11, 1.5);
    CHECK(taps[5] > taps[4]);
    CHECK(taps[0] == doctest::Approx(taps[10]).epsilon(1e-15));
}

TEST_CASE("ssim of an image with itself is one") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 5; ++i) {
        const auto img = random_image(40, 30, rng);
        CHECK(std::abs(ssim(img, img) - 1.0) <= 1e-12);
    }
    const Image8 flat(20, 20, 77);
    CHECK(std::abs(ssim(flat, flat) - 1.0) <= 1e-12);
}

TEST_CASE("ssim of two constant images has the closed form") {
    const Image8 a(32, 32, 170), b(32, 32, 0);
    const double expected = 6.5025 / 28906.5025;
    CHECK(std::abs(ssim(a, b) - expected) <= 1e-7);
}

TEST_CASE("ssim is symmetric and bounded") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 50; ++i) {
        const auto a = random_image(24, 20, rng);
        const auto b = random_image(24, 20, rng);
        const double ab = ssim(a, b), ba = ssim(b, a);
        CHECK(std::abs(ab - ba) <= 1e-12);
        CHECK(ab <= 1.0 + 1e-12);
        CHECK(ab >= -1.0 - 1e-12);
    }
    Image8 neg(16, 16), pos(16, 16);
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 16; ++c) {
            pos.at(r, c) = static_cast<std::uint8_t>(((r + c) % 2) * 255);
            neg.at(r, c) = static_cast<std::uint8_t>(255 - pos.at(r, c));
        }
    CHECK(ssim(pos, neg) < 0.0);
}

TEST_CASE("separable ssim agrees with a direct windowed evaluation") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 5; ++i) {
        const auto a = random_image(27, 19, rng);
        auto b = a;
        std::uniform_int_distribution<int> noise(-30, 30);
        for (auto& p : b.pixels) p = static_cast<std::uint8_t>(std::clamp(p + noise(rng), 0, 255));
        CHECK(ssim(a, b) == doctest::Approx(brute_ssim(a, b)).epsilon(1e-10));
        const auto c = random_image(27, 19, rng);
        CHECK(ssim(a, c) == doctest::Approx(brute_ssim(a, c)).epsilon(1e-10));
    }
}

TEST_CASE("ssim penalizes larger distortions more") {
    std::mt19937_64 rng(4);
    const auto a = random_image(32, 32, rng);
    double prev = 1.0;
    for (int amp : {5, 20, 60}) {
        auto b = a;
        std::mt19937_64 noise_rng(9);
        std::uniform_int_distribution<int> noise(-amp, amp);
        for (auto& p : b.pixels) p = static_cast<std::uint8_t>(std::clamp(p + noise(noise_rng), 0, 255));
        const double s = ssim(a, b);
        CHECK(s < prev);
        prev = s;
    }
}

TEST_CASE("ssim input validation") {
    CHECK_THROWS_AS(ssim(Image8(20, 20), Image8(21, 20)), ShapeError);
    CHECK_THROWS_AS(ssim(Image8(10, 20), Image8(10, 20)), ShapeError);
    SsimConfig cfg;
    cfg.region = PixelBox{0, 0, 4, 4};
    CHECK_THROWS_AS(ssim(Image8(20, 20), Image8(20, 20), cfg), ShapeError);
}

TEST_CASE("region scoring equals scoring the crops") {
    std::mt19937_64 rng(5);
    const auto a = random_image(40, 30, rng);
    const auto b = random_image(40, 30, rng);
    const PixelBox box{3, 5, 20, 33};
    SsimConfig cfg;
    cfg.region = box;
    const auto ca = crop(a, box);
    CHECK(ca.width == 29);
    CHECK(ca.height == 18);
    CHECK(ca.at(0, 0) == a.at(3, 5));
    CHECK(ssim(a, b, cfg) == ssim(ca, crop(b, box)));
}

TEST_CASE("mean_std uses the population deviation") {
    const std::vector<double> v{0.9, 1.0};
    const auto ms = mean_std(v);
    CHECK(ms.mean == doctest::Approx(0.95).epsilon(1e-15));
    CHECK(ms.std == doctest::Approx(0.05).epsilon(1e-12));
    const std::vector<double> one{0.42};
    CHECK(mean_std(one).mean == 0.42);
    CHECK(mean_std(one).std == 0.0);
    CHECK_THROWS_AS(mean_std(std::vector<double>{}), ConfigError);

    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.8, 1.0);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> xs(3 + t);
        for (auto& x : xs) x = u(rng);
        double s = 0;
        for (double x : xs) s += x;
        const double mean = s / static_cast<double>(xs.size());
        double q = 0;
        for (double x : xs) q += (x - mean) * (x - mean);
        const auto got = aggregate_over_seeds(xs);
        CHECK(std::abs(got.mean - mean) <= 1e-12);
        CHECK(std::abs(got.std - std::sqrt(q / static_cast<double>(xs.size()))) <= 1e-12);
    }
}

TEST_CASE("perfect predictions score one") {
    const auto ds = data::make_dataset(data::generate_corpus(32, 32));
    const std::vector<int> ids{0, 100, 2000};
    const auto report = evaluate_predictions(ds.targets(ids), ids, ds);
    REQUIRE(report.ssim.size() == 3);
    for (double s : report.ssim) CHECK(std::abs(s - 1.0) <= 1e-12);
    for (double m : report.mse) CHECK(m == 0.0);
    CHECK(report.ssim_mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.ssim_std <= 1e-12);

    auto worse = ds.targets(ids);
    worse.array() += 0.1;
    const auto r2 = evaluate_predictions(worse, ids, ds);
    CHECK(r2.ssim_mean < 1.0);
    CHECK(r2.mse_mean > 0.0);

    const auto box = target_bounding_box(ds.map);
    CHECK(box.row0 >= 3);
    CHECK(box.col1 <= 28);
    CHECK_THROWS_AS(evaluate_predictions(worse, std::vector<int>{0}, ds), ShapeError);
}
