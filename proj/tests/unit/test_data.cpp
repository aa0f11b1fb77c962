#include "doctest.h"

#include "surrogate/cabin/field.hpp"
#include "surrogate/data/dataset.hpp"
#include "surrogate/data/normalize.hpp"
#include "surrogate/data/split.hpp"
#include "surrogate/data/target_pixels.hpp"
#include "surrogate/error.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>

using namespace surrogate;
using namespace surrogate::data;
using cabin::Image8;

namespace {

const Corpus& small_corpus() {
    static const Corpus corpus = generate_corpus(32, 32);
    return corpus;
}

std::filesystem::path scratch(const char* name) {
    auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("identical images have no target pixels") {
    Image8 img(4, 3, 9);
    img.at(1, 2) = 200;
    const std::vector<Image8> stack{img, img, img};
    const auto map = extract_target_pixels(stack);
    CHECK(map.coords.empty());
    CHECK(map.background == img);
}

TEST_CASE("a single differing pixel is the only target") {
    Image8 a(2, 2, 5), b(2, 2, 5);
    b.at(0, 1) = 6;
    const std::vector<Image8> stack{a, b};
    const auto map = extract_target_pixels(stack);
    REQUIRE(map.coords.size() == 1);
    CHECK(map.coords[0] == PixelCoord{0, 1});
    CHECK(map.background.at(1, 1) == 5);
}

TEST_CASE("extraction validates its input") {
    const std::vector<Image8> one{Image8(2, 2)};
    CHECK_THROWS_AS(extract_target_pixels(one), ConfigError);
    const std::vector<Image8> mixed{Image8(2, 2), Image8(3, 2)};
    CHECK_THROWS_AS(extract_target_pixels(mixed), ShapeError);
}

TEST_CASE("extraction on the synthetic stack matches a brute-force variance scan") {
    const auto& corpus = small_corpus();
    const auto map = extract_target_pixels(corpus.images);

    std::vector<PixelCoord> expected;
    for (int r = 0; r < 32; ++r) {
        for (int c = 0; c < 32; ++c) {
            double sum = 0, sq = 0;
            for (const auto& img : corpus.images) {
                sum += img.at(r, c);
                sq += double(img.at(r, c)) * img.at(r, c);
            }
            const double n = static_cast<double>(corpus.images.size());
            if (sq / n - (sum / n) * (sum / n) > 0) expected.push_back({r, c});
        }
    }
    CHECK(map.coords == expected);
    for (const auto& p : map.coords) CHECK(!cabin::is_border_pixel(p.row, p.col, 32, 32));

    // Targets and constant pixels partition the image.
    std::set<std::pair<int, int>> targets;
    for (const auto& p : map.coords) targets.insert({p.row, p.col});
    CHECK(targets.size() == map.coords.size());
    for (int r = 0; r < 32; ++r)
        for (int c = 0; c < 32; ++c) {
            if (targets.count({r, c})) continue;
            for (const auto& img : corpus.images) REQUIRE(img.at(r, c) == map.background.at(r, c));
        }
    for (std::size_t i = 1; i < map.coords.size(); ++i) {
        const auto& a = map.coords[i - 1];
        const auto& b = map.coords[i];
        CHECK((a.row < b.row || (a.row == b.row && a.col < b.col)));
    }
}

TEST_CASE("targets_from_image scales bytes to [0, 1]") {
    Image8 a(2, 1, 0), b(2, 1, 0);
    b.at(0, 0) = 255;
    b.at(0, 1) = 170;
    const std::vector<Image8> stack{a, b};
    const auto map = extract_target_pixels(stack);
    const auto t = targets_from_image(b, map);
    REQUIRE(t.size() == 2);
    CHECK(t[0] == 1.0);
    CHECK(t[1] == doctest::Approx(170.0 / 255.0).epsilon(1e-15));
    CHECK(targets_from_image(a, map) == std::vector<double>{0.0, 0.0});
    CHECK_THROWS_AS(targets_from_image(Image8(3, 1), map), ShapeError);
}

TEST_CASE("restore inverts targets_from_image on every generated image") {
    const auto& corpus = small_corpus();
    const auto map = extract_target_pixels(corpus.images);
    for (const auto& img : corpus.images) REQUIRE(restore(targets_from_image(img, map), map) == img);
}

TEST_CASE("restore clamps and validates") {
    Image8 a(3, 1, 50), b(3, 1, 50);
    b.at(0, 0) = 60;
    b.at(0, 2) = 70;
    const std::vector<Image8> stack{a, b};
    const auto map = extract_target_pixels(stack);
    const std::vector<double> zeros(2, 0.0);
    const auto z = restore(zeros, map);
    CHECK(z.at(0, 0) == 0);
    CHECK(z.at(0, 1) == 50);
    CHECK(z.at(0, 2) == 0);
    const std::vector<double> wild{1.7, -0.3};
    const auto w = restore(wild, map);
    CHECK(w.at(0, 0) == 255);
    CHECK(w.at(0, 2) == 0);
    CHECK_THROWS_AS(restore(std::vector<double>(3, 0.0), map), ShapeError);
}

TEST_CASE("target maps persist losslessly") {
    const auto map = extract_target_pixels(small_corpus().images);
    const auto dir = scratch("surrogate_test_map");
    save_target_map(dir, map);
    const auto back = load_target_map(dir);
    CHECK(back.coords == map.coords);
    CHECK(back.background == map.background);
    CHECK(back.source_hash == map.source_hash);
    CHECK(map.source_hash == hash_image_stack(small_corpus().images));
    std::filesystem::remove_all(dir);
}

TEST_CASE("normalize_input maps each domain onto [-1, 1]") {
    const auto lo = normalize_input({500, 45, -90, 5, 50, 20});
    const auto hi = normalize_input({1000, 90, 90, 15, 300, 40});
    for (double v : lo) CHECK(v == -1.0);
    for (double v : hi) CHECK(v == 1.0);
    CHECK(normalize_input({750, 45, -90, 5, 50, 30})[5] == 0.0);
    CHECK(normalize_input({750, 45, -90, 10, 50, 30})[3] == 0.0);
    // Grid points land on 2 i / (n - 1) - 1 for equally spaced domains.
    const auto& domains = cabin::variable_domains();
    for (std::size_t var : {0u, 4u, 5u}) {
        const auto& d = domains[var];
        for (std::size_t i = 0; i < d.size(); ++i) {
            std::array<double, 6> raw{500, 45, -90, 5, 50, 20};
            raw[var] = d[i];
            const double expected = 2.0 * static_cast<double>(i) / static_cast<double>(d.size() - 1) - 1.0;
            CHECK(normalize_input(cabin::CaseSpec::from_values(raw))[var] == doctest::Approx(expected).epsilon(1e-15));
        }
    }
    // Extrapolates linearly outside the domain.
    CHECK(normalize_input({0, 45, -90, 5, 50, 20})[0] == -3.0);
}

TEST_CASE("split_cases partitions the grid 2000/80/80 with full coverage") {
    const auto cases = cabin::enumerate_cases();
    const auto split = split_cases(cases, 0);
    CHECK(split.train_ids.size() == 2000);
    CHECK(split.val_ids.size() == 80);
    CHECK(split.test_ids.size() == 80);
    std::vector<int> all;
    all.insert(all.end(), split.train_ids.begin(), split.train_ids.end());
    all.insert(all.end(), split.val_ids.begin(), split.val_ids.end());
    all.insert(all.end(), split.test_ids.begin(), split.test_ids.end());
    std::sort(all.begin(), all.end());
    std::vector<int> expected(2160);
    std::iota(expected.begin(), expected.end(), 0);
    CHECK(all == expected);

    for (const auto* ids : {&split.train_ids, &split.val_ids, &split.test_ids}) {
        CHECK(covers_all_values(cases, *ids));
        std::set<double> solar;
        for (int id : *ids) solar.insert(cases[static_cast<std::size_t>(id)].solar_load);
        CHECK(solar.size() == 6);
    }

    const auto again = split_cases(cases, 0);
    CHECK(again.train_ids == split.train_ids);
    CHECK(again.val_ids == split.val_ids);
    CHECK(again.test_ids == split.test_ids);
    CHECK(split_cases(cases, 1).val_ids != split.val_ids);
}

TEST_CASE("split_cases re-draws until coverage holds and records retries") {
    const auto cases = cabin::enumerate_cases();
    // Tiny validation/test sets make coverage failures likely on the first draw.
    bool saw_retry = false;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto s = split_cases(cases, seed, SplitSizes{2140, 10, 10});
        CHECK(covers_all_values(cases, s.val_ids));
        CHECK(covers_all_values(cases, s.test_ids));
        saw_retry = saw_retry || s.retries > 0;
    }
    CHECK(saw_retry);
}

TEST_CASE("split_cases errors") {
    const auto cases = cabin::enumerate_cases();
    CHECK_THROWS_AS(split_cases(cases, 0, SplitSizes{2100, 80, 80}), ConfigError);
    CHECK_THROWS_AS(split_cases(std::vector<cabin::CaseSpec>{}, 0), ConfigError);
    // Three cases cannot give every split both sun altitudes.
    const std::vector<cabin::CaseSpec> few{{500, 45, -90, 5, 50, 20}, {500, 90, -90, 5, 50, 20}, {500, 45, -90, 5, 50, 20}};
    CHECK_THROWS_AS(split_cases(few, 0, SplitSizes{1, 1, 1}, 10), ConfigError);
}

TEST_CASE("default split sizes are proportional") {
    const auto s = default_split_sizes(2160);
    CHECK(s.train == 2000);
    CHECK(s.val == 80);
    CHECK(s.test == 80);
    const auto half = default_split_sizes(1080);
    CHECK(half.val == 40);
    CHECK(half.test == 40);
    CHECK(half.train == 1000);
}

TEST_CASE("sample_first_k draws nested prefixes of a seeded shuffle") {
    const auto split = split_cases(cabin::enumerate_cases(), 0);
    const auto full = sample_first_k(split, 3, split.train_ids.size());
    auto sorted_full = full;
    auto sorted_train = split.train_ids;
    std::sort(sorted_full.begin(), sorted_full.end());
    std::sort(sorted_train.begin(), sorted_train.end());
    CHECK(sorted_full == sorted_train);

    const std::vector<std::size_t> ks{50, 100, 150, 200, 500, 1000, 1500, 2000};
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const auto small = sample_first_k(split, 3, ks[i]);
        for (std::size_t j = i; j < ks.size(); ++j) {
            const auto big = sample_first_k(split, 3, ks[j]);
            CHECK(std::equal(small.begin(), small.end(), big.begin()));
        }
    }

    std::set<std::vector<int>> prefixes;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) prefixes.insert(sample_first_k(split, seed, 50));
    CHECK(prefixes.size() == 10);

    CHECK_THROWS_AS(sample_first_k(split, 1, 2001), ConfigError);
}

TEST_CASE("splits persist losslessly") {
    const auto split = split_cases(cabin::enumerate_cases(), 5);
    const auto dir = scratch("surrogate_test_split");
    save_split(dir, split);
    const auto back = load_split(dir);
    CHECK(back.train_ids == split.train_ids);
    CHECK(back.val_ids == split.val_ids);
    CHECK(back.test_ids == split.test_ids);
    CHECK(back.seed == 5);
    CHECK(back.retries == split.retries);
    std::filesystem::remove_all(dir);
}

TEST_CASE("corpus files round-trip and are byte-identical across writes") {
    const auto corpus = generate_corpus(16, 16);
    const auto a = scratch("surrogate_test_corpus_a");
    const auto b = scratch("surrogate_test_corpus_b");
    write_corpus(a, corpus, 4);
    write_corpus(b, corpus, 4);
    const auto back = read_corpus(a);
    CHECK(back.cases == corpus.cases);
    CHECK(back.images == corpus.images);
    for (const auto* name : {"cases.csv", "manifest.txt", "images/case_0000.pgm", "images/case_2159.pgm"}) {
        std::ifstream fa(a / name, std::ios::binary), fb(b / name, std::ios::binary);
        const std::string sa((std::istreambuf_iterator<char>(fa)), {});
        const std::string sb((std::istreambuf_iterator<char>(fb)), {});
        CHECK(!sa.empty());
        CHECK(sa == sb);
    }
    std::filesystem::remove_all(a);
    std::filesystem::remove_all(b);
}

TEST_CASE("dataset builds normalized inputs and [0, 1] targets") {
    const auto ds = make_dataset(small_corpus());
    const std::vector<int> ids{0, 2159, 17};
    const auto x = ds.inputs(ids);
    const auto y = ds.targets(ids);
    CHECK(x.rows() == 3);
    CHECK(x.cols() == 6);
    CHECK(y.cols() == static_cast<nn::Index>(ds.num_targets()));
    CHECK(x.row(0).maxCoeff() == -1.0);
    CHECK(x.row(1).minCoeff() == 1.0);
    CHECK(y.minCoeff() >= 0.0);
    CHECK(y.maxCoeff() <= 1.0);
    const auto t17 = targets_from_image(ds.corpus.images[17], ds.map);
    for (std::size_t j = 0; j < t17.size(); ++j) CHECK(y(2, static_cast<nn::Index>(j)) == t17[j]);
    CHECK_THROWS_AS(Dataset(small_corpus(), extract_target_pixels(generate_corpus(16, 16).images)), ShapeError);
}
