#include "surrogate/data/dataset.hpp"
#include "surrogate/cabin/field.hpp"
#include "surrogate/data/normalize.hpp"
#include "surrogate/error.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace surrogate::data {

namespace {

constexpr const char* kCaseHeader =
    "case_id,solar_load,sun_altitude,sun_azimuth,discharge_temp,flow_rate,ambient_temp";

std::string image_name(std::size_t id) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "case_%04zu.pgm", id);
    return buf;
}

std::map<std::string, std::string> read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read " + path.string());
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find(" = ");
        if (eq == std::string::npos) continue;
        kv[line.substr(0, eq)] = line.substr(eq + 3);
    }
    return kv;
}

} // namespace

Corpus generate_corpus(int width, int height) {
    Corpus corpus;
    corpus.cases = cabin::enumerate_cases();
    corpus.images.reserve(corpus.cases.size());
    for (const auto& c : corpus.cases) corpus.images.push_back(cabin::render(cabin::synth_field(c, width, height)));
    return corpus;
}

void write_corpus(const std::filesystem::path& dir, const Corpus& corpus, std::uint64_t seed) {
    std::error_code ec;
    std::filesystem::create_directories(dir / "images", ec);
    if (ec) throw DataError("cannot create " + (dir / "images").string() + ": " + ec.message());

    {
        std::ofstream out(dir / "cases.csv", std::ios::trunc);
        if (!out) throw DataError("cannot write " + (dir / "cases.csv").string());
        out << kCaseHeader << '\n';
        for (std::size_t i = 0; i < corpus.cases.size(); ++i) {
            out << i;
            for (double v : corpus.cases[i].values()) out << ',' << v;
            out << '\n';
        }
    }
    for (std::size_t i = 0; i < corpus.images.size(); ++i) {
        cabin::write_pgm(dir / "images" / image_name(i), corpus.images[i]);
    }
    std::ofstream out(dir / "manifest.txt", std::ios::trunc);
    if (!out) throw DataError("cannot write " + (dir / "manifest.txt").string());
    out << "oracle_version = " << cabin::oracle_version << '\n'
        << "grid_width = " << corpus.width() << '\n'
        << "grid_height = " << corpus.height() << '\n'
        << "color_scale_min = " << cabin::color_scale_min << '\n'
        << "color_scale_max = " << cabin::color_scale_max << '\n'
        << "border_width = " << cabin::border_width << '\n'
        << "num_cases = " << corpus.cases.size() << '\n'
        << "seed = " << seed << '\n';
}

Corpus read_corpus(const std::filesystem::path& dir) {
    const auto manifest = read_manifest(dir / "manifest.txt");
    int width = 0, height = 0;
    try {
        width = std::stoi(manifest.at("grid_width"));
        height = std::stoi(manifest.at("grid_height"));
    } catch (const std::exception&) {
        throw DataError("manifest.txt lacks a valid grid size");
    }

    Corpus corpus;
    std::ifstream in(dir / "cases.csv");
    if (!in) throw DataError("cannot read " + (dir / "cases.csv").string());
    std::string line;
    std::getline(in, line);
    if (line != kCaseHeader) throw DataError("cases.csv: bad header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        std::vector<double> v;
        while (std::getline(ls, field, ',')) {
            try {
                v.push_back(std::stod(field));
            } catch (const std::exception&) {
                throw DataError("cases.csv: bad value '" + field + "'");
            }
        }
        if (v.size() != 7 || static_cast<std::size_t>(v[0]) != corpus.cases.size()) {
            throw DataError("cases.csv: bad line '" + line + "'");
        }
        corpus.cases.push_back({v[1], v[2], v[3], v[4], v[5], v[6]});
    }
    corpus.images.reserve(corpus.cases.size());
    for (std::size_t i = 0; i < corpus.cases.size(); ++i) {
        auto img = cabin::read_pgm(dir / "images" / image_name(i));
        if (img.width != width || img.height != height) {
            throw DataError(image_name(i) + " does not match the manifest grid size");
        }
        corpus.images.push_back(std::move(img));
    }
    return corpus;
}

Dataset::Dataset(Corpus c, TargetPixelMap m) : corpus(std::move(c)), map(std::move(m)) {
    if (corpus.cases.size() != corpus.images.size()) {
        throw DataError("dataset: case and image counts differ");
    }
    if (!corpus.images.empty() && !corpus.images.front().same_shape(map.background)) {
        throw ShapeError("dataset: target map dimensions differ from the corpus images");
    }
}

nn::Matrix Dataset::inputs(std::span<const int> ids) const {
    nn::Matrix x(static_cast<nn::Index>(ids.size()), static_cast<nn::Index>(cabin::CaseSpec::num_variables));
    for (std::size_t r = 0; r < ids.size(); ++r) {
        const auto v = normalize_input(corpus.cases.at(static_cast<std::size_t>(ids[r])));
        for (std::size_t c = 0; c < v.size(); ++c) x(static_cast<nn::Index>(r), static_cast<nn::Index>(c)) = v[c];
    }
    return x;
}

nn::Matrix Dataset::targets(std::span<const int> ids) const {
    nn::Matrix y(static_cast<nn::Index>(ids.size()), static_cast<nn::Index>(map.size()));
    for (std::size_t r = 0; r < ids.size(); ++r) {
        const Image8& img = corpus.images.at(static_cast<std::size_t>(ids[r]));
        for (std::size_t j = 0; j < map.coords.size(); ++j) {
            y(static_cast<nn::Index>(r), static_cast<nn::Index>(j)) =
                img.at(map.coords[j].row, map.coords[j].col) / 255.0;
        }
    }
    return y;
}

Dataset make_dataset(Corpus corpus) {
    auto map = extract_target_pixels(corpus.images);
    return Dataset(std::move(corpus), std::move(map));
}

} // namespace surrogate::data
